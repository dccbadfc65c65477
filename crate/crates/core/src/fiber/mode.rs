use crate::atom::Sellmeier;
use crate::constants::{SPEED_OF_LIGHT, VACUUM_PERMEABILITY};
use crate::error::{Error, Result};
use crate::numerics::{bessel_j, bessel_j_prime, bessel_k, bessel_k_prime, find_root, integrate};

/// First zero of J0: the TE01/TM01 cutoff.
pub const SECOND_MODE_CUTOFF: f64 = 2.404_825_557_695_773;

const SCAN_STEP: f64 = 1e-4;

/// Vacuum-clad step-index fiber.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberSpec {
    /// Radius in m.
    pub radius: f64,
    pub core: Sellmeier,
    pub exterior_index: f64,
}

impl FiberSpec {
    pub fn new(radius: f64, core: Sellmeier) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::domain(format!("fiber radius must be positive, got {radius}")));
        }
        Ok(Self { radius, core, exterior_index: 1.0 })
    }

    /// Silica fiber using the material model of the bundled data file.
    pub fn silica(radius: f64) -> Result<Self> {
        Self::new(radius, crate::atom::AtomicData::cesium().silica)
    }

    pub fn core_index(&self, wavelength: f64) -> Result<f64> {
        let n = self.core.index(wavelength)?;
        if n <= self.exterior_index {
            return Err(Error::domain(format!("core index {n} does not exceed exterior index")));
        }
        Ok(n)
    }

    pub fn v_number(&self, wavelength: f64) -> Result<f64> {
        let n1 = self.core_index(wavelength)?;
        let n2 = self.exterior_index;
        Ok(2.0 * std::f64::consts::PI * self.radius / wavelength * (n1 * n1 - n2 * n2).sqrt())
    }

    /// Solve the fundamental hybrid mode.
    pub fn solve_he11(&self, wavelength: f64) -> Result<GuidedMode> {
        GuidedMode::solve(self, wavelength)
    }
}

/// Radial profile of the circularly polarized HE11 mode at unit amplitude:
/// e_r = i·g_r, e_φ and e_z real.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Profile {
    pub g_r: f64,
    pub e_phi: f64,
    pub e_z: f64,
    pub e_z_prime: f64,
}

/// Solved HE11 eigenmode.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GuidedMode {
    pub wavelength: f64,
    pub radius: f64,
    pub core_index: f64,
    pub exterior_index: f64,
    /// Propagation constant β, rad/m.
    pub beta: f64,
    /// Transverse wavenumber inside the core, h.
    pub interior_parameter: f64,
    /// Evanescent decay constant outside, q.
    pub exterior_parameter: f64,
    /// Mode amplitude A for 1 W of guided power, V/m per √W.
    pub normalization: f64,
    pub v_number: f64,
    /// Set when V exceeds the second-mode cutoff.
    pub multimode: bool,
    s: f64,
    j1_u: f64,
    k1_w: f64,
    /// Sign of g_r at the surface; fixes the global phase.
    pub(crate) phase_sign: f64,
}

/// (J1'(u)/(u J1(u)), K1'(w)/(w K1(w)))
fn log_derivatives(u: f64, w: f64) -> (f64, f64) {
    let jj = bessel_j_prime(1, u) / (u * bessel_j(1, u));
    let kk = bessel_k_prime(1, w).expect("w > 0") / (w * bessel_k(1, w).expect("w > 0"));
    (jj, kk)
}

/// Left minus right side of the HE11/EH11 characteristic equation at
/// effective index `n_eff`.
pub(crate) fn characteristic(n_eff: f64, k: f64, a: f64, n1: f64, n2: f64) -> f64 {
    let u = k * a * (n1 * n1 - n_eff * n_eff).sqrt();
    let w = k * a * (n_eff * n_eff - n2 * n2).sqrt();
    let (jj, kk) = log_derivatives(u, w);
    let geom = 1.0 / (u * u) + 1.0 / (w * w);
    (jj + kk) * (n1 * n1 * jj + n2 * n2 * kk) - (n_eff * n_eff) * geom * geom
}

impl GuidedMode {
    fn solve(fiber: &FiberSpec, wavelength: f64) -> Result<Self> {
        let n1 = fiber.core_index(wavelength)?;
        let n2 = fiber.exterior_index;
        let v = fiber.v_number(wavelength)?;
        let k = 2.0 * std::f64::consts::PI / wavelength;
        let a = fiber.radius;
        let f = |n: f64| characteristic(n, k, a, n1, n2);

        // HE11 is the root with the largest effective index: scan downward.
        let edge = 1e-12;
        let mut hi = n1 - edge;
        let mut f_hi = f(hi);
        let mut root = None;
        while hi > n2 + edge {
            let lo = (hi - SCAN_STEP).max(n2 + edge);
            let f_lo = f(lo);
            if f_lo.is_finite() && f_hi.is_finite() && f_lo.signum() != f_hi.signum() {
                root = Some(find_root(f, lo, hi, 1e-12)?);
                break;
            }
            hi = lo;
            f_hi = f_lo;
        }
        let n_eff = root.ok_or(Error::NoMode { wavelength })?;

        let beta = k * n_eff;
        let h = (k * k * n1 * n1 - beta * beta).sqrt();
        let q = (beta * beta - k * k * n2 * n2).sqrt();
        let (u, w) = (h * a, q * a);
        let (jj, kk) = log_derivatives(u, w);
        let s = (1.0 / (u * u) + 1.0 / (w * w)) / (jj + kk);
        let mut mode = GuidedMode {
            wavelength,
            radius: a,
            core_index: n1,
            exterior_index: n2,
            beta,
            interior_parameter: h,
            exterior_parameter: q,
            normalization: 1.0,
            v_number: v,
            multimode: v > SECOND_MODE_CUTOFF,
            s,
            j1_u: bessel_j(1, u),
            k1_w: bessel_k(1, w)?,
            phase_sign: 1.0,
        };
        mode.phase_sign = mode.profile(a).g_r.signum();
        mode.normalization = (1.0 / mode.unit_power()).sqrt();
        Ok(mode)
    }

    pub fn effective_index(&self) -> f64 {
        self.beta * self.wavelength / (2.0 * std::f64::consts::PI)
    }

    pub fn angular_frequency(&self) -> f64 {
        2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / self.wavelength
    }

    /// Characteristic-equation residual at the solved β.
    pub fn residual(&self) -> f64 {
        let k = 2.0 * std::f64::consts::PI / self.wavelength;
        characteristic(self.effective_index(), k, self.radius, self.core_index, self.exterior_index)
    }

    pub(crate) fn profile(&self, r: f64) -> Profile {
        let (h, q, beta, s) = (self.interior_parameter, self.exterior_parameter, self.beta, self.s);
        if r < self.radius {
            let x = h * r;
            let (j0, j1, j2) = (bessel_j(0, x), bessel_j(1, x), bessel_j(2, x));
            let c = q * self.k1_w / (h * self.j1_u);
            let cz = 2.0 * q * self.k1_w / (beta * self.j1_u);
            Profile {
                g_r: c * ((1.0 - s) * j0 - (1.0 + s) * j2),
                e_phi: -c * ((1.0 - s) * j0 + (1.0 + s) * j2),
                e_z: cz * j1,
                e_z_prime: cz * h * 0.5 * (j0 - j2),
            }
        } else {
            let x = q * r;
            let [k0, k1, k2] = crate::numerics::bessel_k_triple(1, x);
            Profile {
                g_r: (1.0 - s) * k0 + (1.0 + s) * k2,
                e_phi: -((1.0 - s) * k0 - (1.0 + s) * k2),
                e_z: 2.0 * q / beta * k1,
                e_z_prime: -q * q / beta * (k0 + k2),
            }
        }
    }

    /// Axial Poynting flux density of the unit-amplitude circular mode, W/m².
    fn flux(&self, r: f64) -> f64 {
        let p = self.profile(r);
        let omega = self.angular_frequency();
        let curl = if r > 0.0 { p.e_phi * p.e_z / r } else { 0.0 };
        (p.g_r * (self.beta * p.g_r + p.e_z_prime) + self.beta * p.e_phi * p.e_phi - curl)
            / (2.0 * omega * VACUUM_PERMEABILITY)
    }

    /// Guided power carried at unit amplitude A = 1.
    fn unit_power(&self) -> f64 {
        let a = self.radius;
        let inside = integrate(|r| self.flux(r) * r, 0.0, a, 8, 16);
        let outside = integrate(|r| self.flux(r) * r, a, a + 40.0 / self.exterior_parameter, 40, 16);
        2.0 * std::f64::consts::PI * (inside + outside)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fiber() -> FiberSpec {
        FiberSpec::silica(250e-9).unwrap()
    }

    #[test]
    fn v_numbers() {
        let f = fiber();
        assert!((f.v_number(852e-9).unwrap() - 1.94).abs() < 0.01);
        assert!((f.v_number(1064e-9).unwrap() - 1.55).abs() < 0.01);
        for nm in [783.0, 852.0, 880.25, 1064.0] {
            assert!(f.v_number(nm * 1e-9).unwrap() < SECOND_MODE_CUTOFF);
        }
    }

    #[test]
    fn guided_and_dispersive() {
        let f = fiber();
        let mut last = f64::INFINITY;
        for nm in [783.0, 852.0, 1064.0] {
            let m = f.solve_he11(nm * 1e-9).unwrap();
            let n = m.effective_index();
            assert!(n > 1.0 && n < m.core_index);
            assert!(!m.multimode);
            assert!(m.beta < last);
            last = m.beta;
            let k = 2.0 * std::f64::consts::PI / m.wavelength;
            let h2 = (k * m.core_index).powi(2) - m.beta.powi(2);
            assert!((h2 - m.interior_parameter.powi(2)).abs() / h2 < 1e-9);
        }
    }

    #[test]
    fn thick_fiber_is_flagged_multimode() {
        let m = FiberSpec::silica(400e-9).unwrap().solve_he11(852e-9).unwrap();
        assert!(m.multimode);
        assert!(m.effective_index() > 1.2);
    }

    #[test]
    fn bad_radius() {
        assert!(FiberSpec::silica(-1.0).is_err());
        assert!(fiber().solve_he11(2e-6).is_err());
    }
}
