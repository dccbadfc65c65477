use nalgebra::Vector3;
use num_complex::Complex64;

use crate::atom::{AtomicData, HyperfineState};
use crate::constants::{BOHR_MAGNETON_HZ_PER_G, PLANCK};
use crate::error::{Error, Result};
use crate::fiber::ComplexVector;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// i(E×E*), real by construction.
pub fn spin_density(e: &ComplexVector) -> Vector3<f64> {
    let c = e.cross(&e.map(|x| x.conj())) * I;
    Vector3::new(c.x.re, c.y.re, c.z.re)
}

/// Ellipticity vector ε = i(E×E*)/|E|².
pub fn ellipticity(e: &ComplexVector) -> Result<Vector3<f64>> {
    let n = e.norm_squared();
    if n == 0.0 {
        return Err(Error::UndefinedPoint);
    }
    Ok(spin_density(e) / n)
}

/// Spherical amplitudes (A₊, A₀, A₋) of `e` about the unit vector `axis`.
/// A field with ε parallel to `axis` is pure σ⁺.
pub fn spherical_components(e: &ComplexVector, axis: &Vector3<f64>) -> Result<[Complex64; 3]> {
    let n = axis.norm();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::domain("quantization axis must be a non-zero vector"));
    }
    let u = axis / n;
    // any vector not parallel to u seeds the transverse pair
    let seed = if u.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let e1 = (seed - u * u.dot(&seed)).normalize();
    let e2 = u.cross(&e1);
    let c = |v: &Vector3<f64>| v.map(|x| Complex64::new(x, 0.0));
    let (e1c, e2c, uc) = (c(&e1), c(&e2), c(&u));
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = -(e1c.dot(e) - I * e2c.dot(e)) * s;
    let minus = (e1c.dot(e) + I * e2c.dot(e)) * s;
    Ok([plus, uc.dot(e), minus])
}

impl AtomicData {
    /// Fictitious magnetic field (G) felt by the ground manifold F.
    pub fn fictitious_field(&self, e: &ComplexVector, wavelength: f64, f: i32) -> Result<Vector3<f64>> {
        if !(f == 3 || f == 4) {
            return Err(Error::domain(format!("ground-state F must be 3 or 4, got {f}")));
        }
        Ok(spin_density(e) * self.fictitious_coefficient(wavelength)?)
    }

    /// Scalar light shift −α|E|²/4, in Hz.
    pub fn scalar_shift(&self, e: &ComplexVector, wavelength: f64) -> Result<f64> {
        Ok(-0.25 * self.scalar_polarizability(wavelength)? * e.norm_squared() / PLANCK)
    }

    /// Vector light shift of `state` about `axis` (Hz), from the
    /// Clebsch–Gordan decomposition of the J-level shifts.
    pub fn vector_shift(
        &self,
        e: &ComplexVector,
        wavelength: f64,
        state: HyperfineState,
        axis: &Vector3<f64>,
    ) -> Result<f64> {
        let a = spherical_components(e, axis)?;
        let weights = a.map(|x| x.norm_sqr());
        let mirrored = HyperfineState { mf: -state.mf, ..state };
        let up = self.hyperfine_light_shift(wavelength, weights, state)?;
        let down = self.hyperfine_light_shift(wavelength, weights, mirrored)?;
        Ok(0.5 * (up - down) / PLANCK)
    }

    /// Linear Zeeman energy of the light-induced field, g_F mF μB (B·axis),
    /// with the electronic Landé factor.
    pub fn fictitious_zeeman(&self, b: &Vector3<f64>, state: HyperfineState, axis: &Vector3<f64>) -> f64 {
        self.g_f_electronic(state.f) * state.mf as f64 * BOHR_MAGNETON_HZ_PER_G * b.dot(&axis.normalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: [Complex64; 3]) -> ComplexVector {
        Vector3::new(x[0], x[1], x[2])
    }
    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn ellipticity_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let e = v([re(s), re(0.0), I * s]);
        let eps = ellipticity(&e).unwrap();
        assert!((eps - Vector3::new(0.0, -1.0, 0.0)).norm() < 1e-15);
        assert_eq!(ellipticity(&v([re(1.0), re(2.0), re(-0.5)])).unwrap().norm(), 0.0);
        assert!(matches!(ellipticity(&v([re(0.0); 3])), Err(Error::UndefinedPoint)));
    }

    #[test]
    fn spherical_decomposition() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let e = v([re(s), re(0.0), I * s]);
        let axis = Vector3::new(0.0, -1.0, 0.0);
        let a = spherical_components(&e, &axis).unwrap();
        assert!((a[0].norm_sqr() - 1.0).abs() < 1e-15);
        assert!(a[1].norm() < 1e-15 && a[2].norm() < 1e-15);
        let b = spherical_components(&e, &-axis).unwrap();
        assert!((b[2].norm_sqr() - 1.0).abs() < 1e-15);
        let e = v([Complex64::new(0.3, -1.2), Complex64::new(0.7, 0.1), Complex64::new(-0.4, 0.9)]);
        let axis = Vector3::new(0.2, 1.0, -0.3);
        let a = spherical_components(&e, &axis).unwrap();
        let total: f64 = a.iter().map(|x| x.norm_sqr()).sum();
        assert!((total - e.norm_squared()).abs() < 1e-14);
        let spin = spin_density(&e).dot(&axis.normalize());
        assert!((a[0].norm_sqr() - a[2].norm_sqr() - spin).abs() < 1e-14);
        assert!(spherical_components(&e, &Vector3::zeros()).is_err());
    }

    #[test]
    fn shifts() {
        let cs = AtomicData::cesium();
        let e = v([re(1e5), Complex64::new(0.0, 4e4), re(0.0)]);
        assert!(cs.scalar_shift(&e, 783e-9).unwrap() > 0.0);
        assert!(cs.scalar_shift(&e, 1064e-9).unwrap() < 0.0);
        let axis = Vector3::new(0.0, 0.0, 1.0);
        let st = |m| HyperfineState::ground(4, m).unwrap();
        assert_eq!(cs.vector_shift(&e, 880e-9, st(0), &axis).unwrap(), 0.0);
        let plus = cs.vector_shift(&e, 880e-9, st(3), &axis).unwrap();
        let minus = cs.vector_shift(&e, 880e-9, st(-3), &axis).unwrap();
        assert!((plus + minus).abs() < 1e-12 * plus.abs() && plus != 0.0);
        let b = cs.fictitious_field(&e, 880e-9, 4).unwrap();
        let z = cs.fictitious_zeeman(&b, st(3), &axis);
        assert!(((plus - z) / z).abs() < 1e-12);
        assert_eq!(cs.fictitious_field(&v([re(2.0), re(1.0), re(0.0)]), 880e-9, 4).unwrap().norm(), 0.0);
    }
}
