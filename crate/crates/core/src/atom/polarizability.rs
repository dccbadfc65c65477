use crate::constants::{BOHR_MAGNETON, HBAR, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::numerics::find_root;

use super::angular::clebsch_gordan;
use super::data::{AtomicData, LineData, Sellmeier};
use super::zeeman::{HyperfineState, Manifold};

/// Lines closer than this many natural linewidths are rejected.
pub const NEAR_RESONANCE_LINEWIDTHS: f64 = 10.0;

/// Default tune-out search interval, m.
pub const TUNE_OUT_INTERVAL: (f64, f64) = (860e-9, 893e-9);

fn angular(wavelength: f64) -> f64 {
    2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / wavelength
}

impl Sellmeier {
    /// Refractive index at `wavelength` (m).
    pub fn index(&self, wavelength: f64) -> Result<f64> {
        let um = wavelength * 1e6;
        if !(um >= self.valid_um.0 && um <= self.valid_um.1) {
            return Err(Error::domain(format!(
                "wavelength {:.1} nm outside the Sellmeier range {}-{} um",
                wavelength * 1e9,
                self.valid_um.0,
                self.valid_um.1
            )));
        }
        let l2 = um * um;
        let n2 = 1.0 + (0..3).map(|k| self.b[k] * l2 / (l2 - self.l_um[k] * self.l_um[k])).sum::<f64>();
        Ok(n2.sqrt())
    }
}

impl AtomicData {
    /// Fused-silica refractive index.
    pub fn refractive_index(&self, wavelength: f64) -> Result<f64> {
        self.silica.index(wavelength)
    }

    fn check_detuning(&self, wavelength: f64) -> Result<f64> {
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(Error::domain(format!("wavelength must be positive, got {wavelength}")));
        }
        let w = angular(wavelength);
        for line in self.lines() {
            let linewidths = (w - line.angular_frequency()).abs() / line.gamma();
            if linewidths < NEAR_RESONANCE_LINEWIDTHS {
                return Err(Error::NearResonance { wavelength, linewidths });
            }
        }
        Ok(w)
    }

    /// Two-line dynamic scalar polarizability of 6S1/2 in C·m²/V,
    /// counter-rotating terms included.
    pub fn scalar_polarizability(&self, wavelength: f64) -> Result<f64> {
        let w = self.check_detuning(wavelength)?;
        Ok(self
            .lines()
            .iter()
            .map(|l| {
                let wl = l.angular_frequency();
                2.0 * wl * l.dipole * l.dipole / (3.0 * HBAR * (wl * wl - w * w))
            })
            .sum())
    }

    /// Light shift (J) of the 6S1/2 sublevel `2·mJ = twice_mj` in a field of
    /// pure spherical component `q` about the quantization axis, per unit |E|².
    pub fn j_level_shift(&self, wavelength: f64, q: i32, twice_mj: i32) -> Result<f64> {
        let w = self.check_detuning(wavelength)?;
        if !(-1..=1).contains(&q) || twice_mj.abs() != 1 {
            return Err(Error::domain(format!("invalid q = {q} or 2mJ = {twice_mj}")));
        }
        let weight = |l: &LineData, q: i32| {
            let jp = l.twice_j_excited;
            let mp = twice_mj + 2 * q;
            if mp.abs() > jp {
                return 0.0;
            }
            let cg = clebsch_gordan(1, twice_mj, 2, 2 * q, jp, mp);
            cg * cg * 2.0 / (jp + 1) as f64
        };
        let sum: f64 = self
            .lines()
            .iter()
            .map(|l| {
                let wl = l.angular_frequency();
                l.dipole * l.dipole * (weight(l, q) / (wl - w) + weight(l, -q) / (wl + w))
            })
            .sum();
        Ok(-sum / (4.0 * HBAR))
    }

    /// Light shift (J) of a ground hyperfine sublevel for a field whose
    /// spherical intensities about the quantization axis are `intensities`
    /// = (|A₊|², |A₀|², |A₋|²) in (V/m)². Scalar and vector parts together;
    /// the hyperfine mixing of the J-level shift is neglected.
    pub fn hyperfine_light_shift(&self, wavelength: f64, intensities: [f64; 3], state: HyperfineState) -> Result<f64> {
        if state.manifold != Manifold::Ground {
            return Err(Error::domain("light shifts are modelled for 6S1/2 only"));
        }
        let two_i = (2.0 * self.nuclear_spin).round() as i32;
        let mut total = 0.0;
        for (k, q) in [1, 0, -1].into_iter().enumerate() {
            if intensities[k] == 0.0 {
                continue;
            }
            let mut v = 0.0;
            for twice_mj in [-1, 1] {
                let twice_mi = 2 * state.mf - twice_mj;
                if twice_mi.abs() > two_i {
                    continue;
                }
                let cg = clebsch_gordan(1, twice_mj, two_i, twice_mi, 2 * state.f, 2 * state.mf);
                v += cg * cg * self.j_level_shift(wavelength, q, twice_mj)?;
            }
            total += intensities[k] * v;
        }
        Ok(total)
    }

    /// ΔE₊(mJ=+½) − ΔE₊(mJ=−½) for unit σ⁺ intensity, J per (V/m)².
    pub fn vector_splitting(&self, wavelength: f64) -> Result<f64> {
        let w = self.check_detuning(wavelength)?;
        let term = |l: &LineData| {
            let wl = l.angular_frequency();
            l.dipole * l.dipole * (1.0 / (wl - w) - 1.0 / (wl + w))
        };
        Ok(-(term(&self.d2) / 3.0 - 2.0 * term(&self.d1) / 3.0) / (4.0 * HBAR))
    }

    /// Vector polarizability α^v_F (C·m²/V), defined through
    /// V = −(|E|²/4) α^v_F (mF / 2F) (ε·axis) with ε = i(E×E*)/|E|².
    pub fn vector_polarizability(&self, wavelength: f64, f: i32) -> Result<f64> {
        if !(f == 3 || f == 4) {
            return Err(Error::domain(format!("ground-state F must be 3 or 4, got {f}")));
        }
        let projection = self.g_f_electronic(f) / self.g_j_ground;
        Ok(-8.0 * f as f64 * projection * self.vector_splitting(wavelength)?)
    }

    /// Coefficient β in B_fict = β·i(E×E*), gauss per (V/m)². Independent of F
    /// because the light couples only to the electron spin.
    pub fn fictitious_coefficient(&self, wavelength: f64) -> Result<f64> {
        let tesla = self.vector_splitting(wavelength)? / (self.g_j_ground * BOHR_MAGNETON);
        Ok(tesla * crate::constants::GAUSS_PER_TESLA)
    }

    /// Zero of the scalar polarizability inside `interval` (m).
    pub fn tune_out(&self, interval: (f64, f64)) -> Result<f64> {
        find_root(|l| self.scalar_polarizability(l).map_err(|_| ()).unwrap_or(f64::NAN), interval.0, interval.1, 1e-15)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{BOHR_RADIUS, PLANCK, VACUUM_PERMITTIVITY};

    fn atomic_units(alpha: f64) -> f64 {
        // 4π ε0 a0³
        alpha / (4.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY * BOHR_RADIUS.powi(3))
    }

    #[test]
    fn silica_index() {
        let cs = AtomicData::cesium();
        for (nm, want) in [(852.0, 1.4525), (1064.0, 1.4496), (783.0, 1.4537)] {
            let n = cs.refractive_index(nm * 1e-9).unwrap();
            assert!((n - want).abs() < 5e-4, "{nm}: {n}");
        }
        assert!(cs.refractive_index(300e-9).is_err());
    }

    #[test]
    fn scalar_polarizability_signs_and_static_limit() {
        let cs = AtomicData::cesium();
        assert!(cs.scalar_polarizability(783e-9).unwrap() < 0.0);
        assert!(cs.scalar_polarizability(1064e-9).unwrap() > 0.0);
        let stat = atomic_units(cs.scalar_polarizability(100e-6).unwrap());
        assert!((stat - 382.0).abs() < 3.0, "{stat}");
        // independent evaluation in atomic units
        let hartree = 4.359_744_722_2e-18;
        let oracle: f64 = [(3.1822, cs.d1.frequency_hz), (4.4786, cs.d2.frequency_hz)]
            .iter()
            .map(|&(d, nu): &(f64, f64)| {
                let e = PLANCK * nu / hartree;
                let x = PLANCK * SPEED_OF_LIGHT / 1064e-9 / hartree;
                2.0 * e * d * d / (3.0 * (e * e - x * x))
            })
            .sum();
        let got = atomic_units(cs.scalar_polarizability(1064e-9).unwrap());
        assert!(((got - oracle) / oracle).abs() < 1e-6, "{got} vs {oracle}");
    }

    #[test]
    fn near_resonance_is_rejected() {
        let cs = AtomicData::cesium();
        let err = cs.scalar_polarizability(cs.d2.wavelength()).unwrap_err();
        assert!(matches!(err, Error::NearResonance { .. }));
    }

    #[test]
    fn j_level_shifts_reduce_to_scalar() {
        let cs = AtomicData::cesium();
        for nm in [783.0, 880.0, 1064.0] {
            let l = nm * 1e-9;
            let scalar = -0.25 * cs.scalar_polarizability(l).unwrap();
            let pi = cs.j_level_shift(l, 0, 1).unwrap();
            assert!(((pi - scalar) / scalar).abs() < 1e-12);
            let mean = 0.5 * (cs.j_level_shift(l, 1, 1).unwrap() + cs.j_level_shift(l, 1, -1).unwrap());
            assert!(((mean - scalar) / scalar).abs() < 1e-12);
            let d = cs.j_level_shift(l, 1, 1).unwrap() - cs.j_level_shift(l, 1, -1).unwrap();
            assert!(((d - cs.vector_splitting(l).unwrap()) / d).abs() < 1e-12);
        }
    }

    #[test]
    fn vector_polarizability_signs() {
        let cs = AtomicData::cesium();
        for nm in [783.0, 880.25, 1064.0] {
            let a4 = cs.vector_polarizability(nm * 1e-9, 4).unwrap();
            let a3 = cs.vector_polarizability(nm * 1e-9, 3).unwrap();
            assert!(a4 * a3 < 0.0);
        }
        assert!(cs.fictitious_coefficient(783e-9).unwrap() > 0.0);
        // the vector part vanishes far below both lines much faster than the scalar part
        let far = cs.vector_splitting(20e-6).unwrap().abs() / cs.scalar_polarizability(20e-6).unwrap();
        let near = cs.vector_splitting(1064e-9).unwrap().abs() / cs.scalar_polarizability(1064e-9).unwrap();
        assert!(far < 0.1 * near);
    }

    #[test]
    fn hyperfine_projection_is_scalar_plus_linear_in_mf() {
        let cs = AtomicData::cesium();
        let l = 880e-9;
        let scalar = -0.25 * cs.scalar_polarizability(l).unwrap();
        let slope = cs.vector_splitting(l).unwrap() * cs.g_f_electronic(4) / cs.g_j_ground;
        for mf in -4..=4 {
            let v = cs.hyperfine_light_shift(l, [1.0, 0.0, 0.0], HyperfineState::ground(4, mf).unwrap()).unwrap();
            let want = scalar + slope * mf as f64;
            assert!(((v - want) / scalar).abs() < 1e-10, "mF={mf}");
        }
    }

    #[test]
    fn tune_out_between_the_lines() {
        let cs = AtomicData::cesium();
        let t = cs.tune_out(TUNE_OUT_INTERVAL).unwrap();
        assert!((t - 880.25e-9).abs() < 1.5e-9, "{t}");
        let t2 = cs.tune_out((870e-9, 890e-9)).unwrap();
        assert!((t - t2).abs() < 1e-15);
        let ratio = cs.scalar_polarizability(t).unwrap() / cs.scalar_polarizability(852e-9).unwrap();
        assert!(ratio.abs() < 1e-6);
        assert!(matches!(cs.tune_out((900e-9, 1000e-9)), Err(Error::Bracket { .. })));
    }
}
