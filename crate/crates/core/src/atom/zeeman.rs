use crate::constants::BOHR_MAGNETON_HZ_PER_G;
use crate::error::{Error, Result};

use super::angular::{clebsch_gordan, wigner_6j};
use super::data::AtomicData;

/// Largest field at which the linear excited-state Zeeman model is used.
pub const EXCITED_ZEEMAN_MAX_GAUSS: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Manifold {
    /// 6S1/2
    Ground,
    /// 6P3/2, upper level of the D2 line
    Excited,
}

/// A hyperfine Zeeman sublevel |F, mF⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct HyperfineState {
    pub manifold: Manifold,
    pub f: i32,
    pub mf: i32,
}

impl HyperfineState {
    pub fn ground(f: i32, mf: i32) -> Result<Self> {
        if !(f == 3 || f == 4) {
            return Err(Error::domain(format!("ground-state F must be 3 or 4, got {f}")));
        }
        Self::checked(Manifold::Ground, f, mf)
    }

    pub fn excited(f: i32, mf: i32) -> Result<Self> {
        if !(2..=5).contains(&f) {
            return Err(Error::domain(format!("6P3/2 F' must be in 2..=5, got {f}")));
        }
        Self::checked(Manifold::Excited, f, mf)
    }

    fn checked(manifold: Manifold, f: i32, mf: i32) -> Result<Self> {
        if mf.abs() > f {
            return Err(Error::domain(format!("|mF| = {} exceeds F = {f}", mf.abs())));
        }
        Ok(Self { manifold, f, mf })
    }

    pub fn is_stretched(&self) -> bool {
        self.mf.abs() == self.f
    }
}

impl AtomicData {
    /// Breit–Rabi energy of a ground sublevel in Hz, measured from the
    /// hyperfine-free 6S1/2 level. `field` is the signed field projection on
    /// the quantization axis in gauss.
    pub fn breit_rabi_energy(&self, state: HyperfineState, field: f64) -> Result<f64> {
        if state.manifold != Manifold::Ground {
            return Err(Error::domain("breit_rabi_energy applies to 6S1/2 only; use zeeman_shift_excited"));
        }
        if !field.is_finite() {
            return Err(Error::domain("magnetic field must be finite"));
        }
        let i = self.nuclear_spin;
        let hfs = self.ground_hyperfine_hz;
        let m = state.mf as f64;
        let mu_b = BOHR_MAGNETON_HZ_PER_G;
        let upper = state.f as f64 > i;
        if upper && state.is_stretched() {
            // closed linear branch of the stretched states
            let sign = m.signum();
            return Ok(hfs * i / (2.0 * i + 1.0) + sign * (0.5 * self.g_j_ground + i * self.g_i) * mu_b * field);
        }
        let x = (self.g_j_ground - self.g_i) * mu_b * field / hfs;
        let root = (1.0 + 4.0 * m * x / (2.0 * i + 1.0) + x * x).sqrt();
        let branch = if upper { 1.0 } else { -1.0 };
        Ok(-hfs / (2.0 * (2.0 * i + 1.0)) + self.g_i * mu_b * m * field + branch * 0.5 * hfs * root)
    }

    /// Linear Zeeman shift of a 6P3/2 hyperfine sublevel, Hz.
    pub fn zeeman_shift_excited(&self, state: HyperfineState, field: f64) -> Result<f64> {
        if state.manifold != Manifold::Excited {
            return Err(Error::domain("zeeman_shift_excited applies to 6P3/2 only"));
        }
        if field.abs() > EXCITED_ZEEMAN_MAX_GAUSS {
            return Err(Error::Validity(format!(
                "|B| = {field} G exceeds the {EXCITED_ZEEMAN_MAX_GAUSS} G linear-Zeeman limit"
            )));
        }
        Ok(self.g_f_excited(state.f) * state.mf as f64 * BOHR_MAGNETON_HZ_PER_G * field)
    }

    /// Frequency of the microwave transition |3, mF⟩ → |4, mF'⟩ at field `field`.
    pub fn mw_transition_frequency(&self, lower_mf: i32, upper_mf: i32, field: f64) -> Result<f64> {
        if (lower_mf - upper_mf).abs() > 1 {
            return Err(Error::SelectionRule(format!("|3, {lower_mf}⟩ → |4, {upper_mf}⟩ changes mF by more than one")));
        }
        let lower = HyperfineState::ground(3, lower_mf)?;
        let upper = HyperfineState::ground(4, upper_mf)?;
        Ok(self.breit_rabi_energy(upper, field)? - self.breit_rabi_energy(lower, field)?)
    }

    /// Clock transition |3,0⟩ → |4,0⟩ frequency.
    pub fn clock_frequency(&self, field: f64) -> f64 {
        self.mw_transition_frequency(0, 0, field).expect("clock transition is always allowed")
    }

    /// Optical frequency of a D2 transition |F, mF⟩ → |F', mF'⟩ at `field`,
    /// relative to the field-free line, including only the Zeeman shifts.
    pub fn d2_zeeman_detuning(&self, ground: HyperfineState, excited: HyperfineState, field: f64) -> Result<f64> {
        let g0 = self.breit_rabi_energy(ground, 0.0)?;
        Ok(self.zeeman_shift_excited(excited, field)? - (self.breit_rabi_energy(ground, field)? - g0))
    }

    /// Relative strength of the D2 component |F, mF⟩ →(q)→ |F', mF'⟩,
    /// normalized so the cycling transition |4,4⟩ → |5',5⟩ has strength 1.
    pub fn transition_strength(&self, ground: HyperfineState, q: i32, excited: HyperfineState) -> Result<f64> {
        if ground.manifold != Manifold::Ground || excited.manifold != Manifold::Excited {
            return Err(Error::domain("transition_strength expects a ground and an excited state"));
        }
        if !(-1..=1).contains(&q) || excited.mf != ground.mf + q {
            return Err(Error::SelectionRule(format!("mF' = {} is not mF + q = {} + {q}", excited.mf, ground.mf)));
        }
        let two_i = (2.0 * self.nuclear_spin).round() as i32;
        let relative = |f: i32, fp: i32| {
            let six = wigner_6j(1, 3, 2, 2 * fp, 2 * f, two_i);
            (2 * fp + 1) as f64 * 2.0 * six * six
        };
        let cg = clebsch_gordan(2 * ground.f, 2 * ground.mf, 2, 2 * q, 2 * excited.f, 2 * excited.mf);
        Ok(relative(ground.f, excited.f) * cg * cg / relative(4, 5))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs() -> AtomicData {
        AtomicData::cesium()
    }

    /// Brute-force oracle: diagonalize H = A I·J + μB (gJ Jz + gI Iz) B in the
    /// full 16-dimensional |mJ, mI⟩ space.
    fn exact_ground_levels(cs: &AtomicData, field: f64) -> Vec<(f64, f64)> {
        use nalgebra::DMatrix;
        let i2 = 7; // 2I
        let dim = 2 * (i2 as usize + 1);
        let a = cs.ground_hyperfine_hz / (cs.nuclear_spin + 0.5);
        let mu = BOHR_MAGNETON_HZ_PER_G * field;
        let idx = |mj2: i32, mi2: i32| ((mj2 + 1) / 2) as usize * (i2 as usize + 1) + ((mi2 + i2) / 2) as usize;
        let mut h = DMatrix::<f64>::zeros(dim, dim);
        let ladder = |j2: i32, m2: i32, up: bool| {
            let (j, m) = (j2 as f64 / 2.0, m2 as f64 / 2.0);
            if up {
                (j * (j + 1.0) - m * (m + 1.0)).sqrt()
            } else {
                (j * (j + 1.0) - m * (m - 1.0)).sqrt()
            }
        };
        for mj2 in [-1, 1] {
            for mi2 in (-i2..=i2).step_by(2) {
                let s = idx(mj2, mi2);
                let (mj, mi) = (mj2 as f64 / 2.0, mi2 as f64 / 2.0);
                h[(s, s)] += a * mj * mi + mu * (cs.g_j_ground * mj + cs.g_i * mi);
                // (A/2)(J+ I- + J- I+)
                if mj2 == -1 && mi2 > -i2 {
                    let t = idx(1, mi2 - 2);
                    let v = 0.5 * a * ladder(1, -1, true) * ladder(i2, mi2, false);
                    h[(t, s)] += v;
                    h[(s, t)] += v;
                }
            }
        }
        let eig = h.symmetric_eigen();
        // mF of each eigenvector
        (0..dim)
            .map(|k| {
                let v = eig.eigenvectors.column(k);
                let mut mf = 0.0;
                for mj2 in [-1, 1] {
                    for mi2 in (-i2..=i2).step_by(2) {
                        mf += v[idx(mj2, mi2)].powi(2) * (mj2 + mi2) as f64 / 2.0;
                    }
                }
                (eig.eigenvalues[k], mf)
            })
            .collect()
    }

    #[test]
    fn breit_rabi_matches_diagonalization() {
        let cs = cs();
        for &b in &[0.0, 3.0, 28.0, 500.0] {
            let levels = exact_ground_levels(&cs, b);
            for f in [3, 4] {
                for mf in -f..=f {
                    let e = cs.breit_rabi_energy(HyperfineState::ground(f, mf).unwrap(), b).unwrap();
                    // mF is only a good label once the degeneracy is lifted
                    let found = levels
                        .iter()
                        .any(|&(lv, m)| (lv - e).abs() < 1e-3 && (b == 0.0 || (m - mf as f64).abs() < 1e-6));
                    assert!(found, "F={f} mF={mf} B={b}: {e}");
                }
            }
        }
    }

    #[test]
    fn clock_shift_and_symmetry() {
        let cs = cs();
        assert!((cs.clock_frequency(0.0) - cs.ground_hyperfine_hz).abs() < 1e-6);
        let shift = cs.clock_frequency(28.0) - cs.ground_hyperfine_hz;
        assert!((shift - 334.7e3).abs() < 0.5e3, "{shift}");
        assert_eq!(cs.clock_frequency(-7.0), cs.clock_frequency(7.0));
    }

    #[test]
    fn small_field_is_linear_zeeman() {
        let cs = cs();
        for f in [3, 4] {
            for mf in -f..=f {
                if mf == 0 {
                    continue;
                }
                let s = HyperfineState::ground(f, mf).unwrap();
                for &b in &[0.1, 0.5, 1.0] {
                    let shift = cs.breit_rabi_energy(s, b).unwrap() - cs.breit_rabi_energy(s, 0.0).unwrap();
                    let linear = cs.g_f_ground(f) * mf as f64 * BOHR_MAGNETON_HZ_PER_G * b;
                    assert!(((shift - linear) / linear).abs() < 1e-3, "F={f} mF={mf} B={b}");
                }
            }
        }
    }

    #[test]
    fn excited_zeeman() {
        let cs = cs();
        let top = HyperfineState::excited(5, 5).unwrap();
        let bottom = HyperfineState::excited(5, -5).unwrap();
        let g_top = HyperfineState::ground(4, 4).unwrap();
        let g_bottom = HyperfineState::ground(4, -4).unwrap();
        let plus = cs.d2_zeeman_detuning(g_top, top, 28.0).unwrap();
        let minus = cs.d2_zeeman_detuning(g_bottom, bottom, 28.0).unwrap();
        assert!((plus - 39.2e6).abs() < 0.1e6, "{plus}");
        assert!((plus - minus - 78.4e6).abs() < 0.1e6, "{}", plus - minus);
        assert_eq!(cs.zeeman_shift_excited(HyperfineState::excited(5, 0).unwrap(), 28.0).unwrap(), 0.0);
        assert!(matches!(cs.zeeman_shift_excited(top, 51.0), Err(Error::Validity(_))));
        assert!(cs.zeeman_shift_excited(g_top, 1.0).is_err());
        assert!(cs.breit_rabi_energy(top, 1.0).is_err());
    }

    #[test]
    fn microwave_transitions() {
        let cs = cs();
        assert!(matches!(cs.mw_transition_frequency(-3, -1, 3.0), Err(Error::SelectionRule(_))));
        assert!((cs.mw_transition_frequency(-3, -3, 0.0).unwrap() - cs.clock_frequency(0.0)).abs() < 1e-6);
        let a = cs.mw_transition_frequency(0, 0, 3.0).unwrap();
        let b = cs.mw_transition_frequency(1, 1, 3.0).unwrap();
        assert!(((b - a) - 2.1e6).abs() < 0.02e6, "{}", b - a);
        let sigma = cs.mw_transition_frequency(0, 1, 3.0).unwrap();
        assert!(((sigma - a) - 1.05e6).abs() < 0.02e6);
    }

    #[test]
    fn transition_strengths() {
        let cs = cs();
        let s = |m: i32, q: i32| {
            cs.transition_strength(HyperfineState::ground(4, m).unwrap(), q, HyperfineState::excited(5, m + q).unwrap())
                .unwrap()
        };
        assert!((s(4, 1) - 1.0).abs() < 1e-14);
        assert!((s(-4, -1) - 1.0).abs() < 1e-14);
        let total = |m: i32| (-1..=1).map(|q| s(m, q)).sum::<f64>();
        for m in -4..=4 {
            assert!((total(m) - total(4)).abs() < 1e-13);
        }
        // decay out of every |5', m'⟩ into F = 4 is complete
        for mp in -5..=5 {
            let out: f64 = (-1..=1).filter(|&q: &i32| (mp - q).abs() <= 4).map(|q| s(mp - q, q)).sum();
            assert!((out - 1.0).abs() < 1e-13, "m' = {mp}: {out}");
        }
        assert!(matches!(
            cs.transition_strength(HyperfineState::ground(4, 0).unwrap(), 1, HyperfineState::excited(5, 0).unwrap()),
            Err(Error::SelectionRule(_))
        ));
    }
}
