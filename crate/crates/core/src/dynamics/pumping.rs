use nalgebra::{DMatrix, DVector};

use crate::atom::{AtomicData, HyperfineState, Line};
use crate::error::{Error, Result};

/// Ground sublevels |4, mF⟩, mF = −4..=4.
pub const GROUND_LEVELS: usize = 9;
/// Excited sublevels |5', mF'⟩, mF' = −5..=5.
pub const EXCITED_LEVELS: usize = 11;
const LEVELS: usize = GROUND_LEVELS + EXCITED_LEVELS;

const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Occupation of the Zeeman sublevels of one ground manifold, ordered from
/// mF = −F to +F.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PopulationVector {
    pub f: i32,
    pub populations: Vec<f64>,
}

impl PopulationVector {
    pub fn new(f: i32, populations: Vec<f64>) -> Result<Self> {
        if !(f == 3 || f == 4) {
            return Err(Error::domain(format!("ground-state F must be 3 or 4, got {f}")));
        }
        if populations.len() != (2 * f + 1) as usize {
            return Err(Error::domain(format!("F = {f} needs {} populations, got {}", 2 * f + 1, populations.len())));
        }
        if let Some(p) = populations.iter().find(|p| !(**p >= 0.0)) {
            return Err(Error::domain(format!("negative population {p}")));
        }
        let total: f64 = populations.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::domain(format!("populations sum to {total}, not 1")));
        }
        Ok(Self { f, populations })
    }

    pub fn uniform(f: i32) -> Result<Self> {
        let n = (2 * f + 1).max(1) as usize;
        Self::new(f, vec![1.0 / n as f64; n])
    }

    /// All population in |F, mF⟩.
    pub fn pure(f: i32, mf: i32) -> Result<Self> {
        let mut p = vec![0.0; (2 * f + 1).max(0) as usize];
        if mf.abs() > f {
            return Err(Error::domain(format!("|mF| = {} exceeds F = {f}", mf.abs())));
        }
        p[(mf + f) as usize] = 1.0;
        Self::new(f, p)
    }

    pub fn get(&self, mf: i32) -> f64 {
        self.populations[(mf + self.f) as usize]
    }

    /// mF → −mF.
    pub fn mirrored(&self) -> Self {
        let mut p = self.populations.clone();
        p.reverse();
        Self { f: self.f, populations: p }
    }
}

/// Generator of the F=4 → F'=5 rate equations, dp/dt = M p, over the 9 ground
/// and 11 excited sublevels (ground first, both ordered by increasing m).
#[derive(Debug, Clone, PartialEq)]
pub struct RateMatrix {
    pub matrix: DMatrix<f64>,
    /// Γ·strength for each (excited, ground) pair, 1/s.
    decay: DMatrix<f64>,
}

fn ground_index(mf: i32) -> usize {
    (mf + 4) as usize
}

fn excited_index(mf: i32) -> usize {
    GROUND_LEVELS + (mf + 5) as usize
}

/// Rate matrix for light with spherical intensity fractions
/// `[σ⁺, π, σ⁻]` at saturation parameter `saturation`, every transition
/// driven on resonance.
pub fn pump_rates(atom: &AtomicData, fractions: [f64; 3], saturation: f64) -> Result<RateMatrix> {
    if fractions.iter().any(|x| !(*x >= 0.0)) || !(saturation >= 0.0) || !saturation.is_finite() {
        return Err(Error::domain(format!("fractions {fractions:?} and saturation {saturation} must be non-negative")));
    }
    let total: f64 = fractions.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::domain(format!("polarization fractions sum to {total}, not 1")));
    }
    let gamma = atom.line(Line::D2).gamma();
    let mut m = DMatrix::zeros(LEVELS, LEVELS);
    let mut decay = DMatrix::zeros(EXCITED_LEVELS, GROUND_LEVELS);
    for mf in -4..=4 {
        for (k, q) in [1, 0, -1].into_iter().enumerate() {
            let g = HyperfineState::ground(4, mf)?;
            let Ok(e) = HyperfineState::excited(5, mf + q) else {
                continue;
            };
            let strength = atom.transition_strength(g, q, e)?;
            let (gi, ei) = (ground_index(mf), excited_index(mf + q));
            let drive = 0.5 * gamma * saturation * fractions[k] * strength;
            m[(ei, gi)] += drive;
            m[(gi, gi)] -= drive;
            m[(gi, ei)] += drive;
            m[(ei, ei)] -= drive;
            let spont = gamma * strength;
            m[(gi, ei)] += spont;
            m[(ei, ei)] -= spont;
            decay[(ei - GROUND_LEVELS, gi)] = spont;
        }
    }
    Ok(RateMatrix { matrix: m, decay })
}

impl RateMatrix {
    /// Ground-manifold generator with the excited states adiabatically
    /// eliminated.
    pub fn effective_ground(&self) -> Result<DMatrix<f64>> {
        let (g, e) = (GROUND_LEVELS, EXCITED_LEVELS);
        let agg = self.matrix.view((0, 0), (g, g));
        let age = self.matrix.view((0, g), (g, e));
        let aeg = self.matrix.view((g, 0), (e, g));
        let aee = self.matrix.view((g, g), (e, e)).clone_owned();
        let inv = aee.try_inverse().ok_or_else(|| Error::domain("excited-state block is singular"))?;
        Ok(agg - age * inv * aeg)
    }

    /// Excited populations slaved to ground populations `p`.
    fn slaved_excited(&self, p: &DVector<f64>) -> Result<DVector<f64>> {
        let (g, e) = (GROUND_LEVELS, EXCITED_LEVELS);
        let aee = self.matrix.view((g, g), (e, e)).clone_owned();
        let aeg = self.matrix.view((g, 0), (e, g));
        let lu = aee.lu();
        lu.solve(&(-(aeg * p))).ok_or_else(|| Error::domain("excited-state block is singular"))
    }

    /// Ground populations after the excited states decay, using the
    /// spontaneous branching ratios.
    fn relax(&self, full: &DVector<f64>) -> DVector<f64> {
        let mut out = full.rows(0, GROUND_LEVELS).clone_owned();
        for e in 0..EXCITED_LEVELS {
            let pe = full[GROUND_LEVELS + e];
            let row = self.decay.row(e);
            let total: f64 = row.sum();
            if pe == 0.0 || total == 0.0 {
                continue;
            }
            for g in 0..GROUND_LEVELS {
                out[g] += pe * row[g] / total;
            }
        }
        out
    }
}

const SINGULAR_GAP: f64 = 1e-10;
const STEADY_TOLERANCE: f64 = 1e-12;

/// Steady-state ground populations, with any residual excited population
/// returned to the ground manifold through the branching ratios.
///
/// The null vector of the eliminated generator is found by inverse iteration
/// (power iteration on the resolvent at a small negative shift).
pub fn pump_steady_state(rates: &RateMatrix) -> Result<PopulationVector> {
    let g = rates.effective_ground()?;
    let scale = g.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if scale == 0.0 {
        return Err(Error::NonUniqueSteadyState("no transitions are driven".into()));
    }
    let sv = g.clone().svd(false, false).singular_values;
    let mut sorted: Vec<f64> = sv.iter().copied().collect();
    sorted.sort_by(f64::total_cmp);
    if sorted[1] < SINGULAR_GAP * scale {
        return Err(Error::NonUniqueSteadyState(format!(
            "generator has a degenerate null space (singular values {:.3e}, {:.3e})",
            sorted[0], sorted[1]
        )));
    }
    let shift = DMatrix::identity(GROUND_LEVELS, GROUND_LEVELS) * (1e-9 * scale);
    let lu = (&g - shift).lu();
    let mut x = DVector::from_element(GROUND_LEVELS, 1.0 / GROUND_LEVELS as f64);
    for _ in 0..100 {
        let mut next = lu.solve(&x).ok_or_else(|| Error::domain("shifted generator is singular"))?;
        let sum = next.sum();
        next /= sum;
        let change = (&next - &x).amax();
        x = next;
        if change < STEADY_TOLERANCE {
            break;
        }
    }
    let excited = rates.slaved_excited(&x)?;
    let mut full = DVector::zeros(LEVELS);
    full.rows_mut(0, GROUND_LEVELS).copy_from(&x);
    full.rows_mut(GROUND_LEVELS, EXCITED_LEVELS).copy_from(&excited);
    finish(rates.relax(&full))
}

fn finish(mut p: DVector<f64>) -> Result<PopulationVector> {
    for v in p.iter_mut() {
        // round-off from the elimination can leave −1e-17
        if *v < 0.0 && *v > -1e-12 {
            *v = 0.0;
        }
    }
    let total = p.sum();
    p /= total;
    PopulationVector::new(4, p.iter().copied().collect())
}

const RELATIVE_TOLERANCE: f64 = 1e-9;

/// Integrate the full 20-level equations for `duration` seconds starting
/// from ground populations `initial` (F = 4), returning the ground
/// populations after the excited states relax.
pub fn pump_evolution(rates: &RateMatrix, initial: &PopulationVector, duration: f64) -> Result<PopulationVector> {
    if initial.f != 4 {
        return Err(Error::domain("pumping acts on the F = 4 manifold"));
    }
    let mut p = DVector::zeros(LEVELS);
    for (i, v) in initial.populations.iter().enumerate() {
        p[i] = *v;
    }
    let p = evolve(&rates.matrix, p, duration)?;
    finish(rates.relax(&p))
}

/// Adaptive RK4 with step doubling.
fn evolve(m: &DMatrix<f64>, mut p: DVector<f64>, duration: f64) -> Result<DVector<f64>> {
    if !(duration >= 0.0) || !duration.is_finite() {
        return Err(Error::domain(format!("duration must be non-negative, got {duration}")));
    }
    let rate = m.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if duration == 0.0 || rate == 0.0 {
        return Ok(p);
    }
    let rk4 = |p: &DVector<f64>, h: f64| {
        let k1 = m * p;
        let k2 = m * (p + &k1 * (0.5 * h));
        let k3 = m * (p + &k2 * (0.5 * h));
        let k4 = m * (p + &k3 * h);
        p + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
    };
    let mut t = 0.0;
    let mut h = (0.5 / rate).min(duration);
    while t < duration {
        h = h.min(duration - t);
        if h < 1e-14 * duration.max(1.0 / rate) {
            return Err(Error::Stiffness { time: t });
        }
        let full = rk4(&p, h);
        let half = rk4(&rk4(&p, 0.5 * h), 0.5 * h);
        let err = (&half - &full).amax() / 15.0;
        let tol = RELATIVE_TOLERANCE * half.amax().max(1e-300);
        if err <= tol {
            t += h;
            p = &half + (&half - &full) / 15.0;
            let grow = if err == 0.0 { 2.0 } else { (0.9 * (tol / err).powf(0.2)).min(2.0) };
            h *= grow;
        } else {
            h *= (0.9 * (tol / err).powf(0.2)).max(0.1);
        }
    }
    Ok(p)
}

/// Time for the population of the most-populated steady-state sublevel to
/// close 1 − 1/e of its gap, starting from `initial`.
pub fn pumping_time(rates: &RateMatrix, initial: &PopulationVector) -> Result<f64> {
    let steady = pump_steady_state(rates)?;
    let (target, &goal) =
        steady.populations.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("nine sublevels");
    let start = initial.populations[target];
    let gap = goal - start;
    if gap.abs() < 1e-12 {
        return Ok(0.0);
    }
    let threshold = start + gap * (1.0 - (-1.0f64).exp());
    let reached =
        |t: f64| -> Result<f64> { Ok((pump_evolution(rates, initial, t)?.populations[target] - threshold) / gap) };
    let mut hi = 1.0 / rates.matrix.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let mut n = 0;
    while reached(hi)? < 0.0 {
        hi *= 2.0;
        n += 1;
        if n > 200 {
            return Err(Error::domain("pumping does not approach the steady state"));
        }
    }
    crate::numerics::find_root(|t| reached(t).unwrap_or(f64::NAN), 0.0, hi, 1e-6 * hi)
}

/// Photon scattering rate (1/s) of |4, mF⟩ on the F'=5 component with
/// polarization `q`, detuned by `detuning` Hz from its shifted resonance.
pub fn scattering_rate(atom: &AtomicData, mf: i32, q: i32, detuning: f64, saturation: f64) -> Result<f64> {
    if !(saturation >= 0.0) {
        return Err(Error::domain(format!("saturation must be non-negative, got {saturation}")));
    }
    let g = HyperfineState::ground(4, mf)?;
    let e = HyperfineState::excited(5, mf + q)
        .map_err(|_| Error::SelectionRule(format!("|4,{mf}⟩ has no F'=5 partner for q = {q}")))?;
    let strength = atom.transition_strength(g, q, e)?;
    let line = atom.line(Line::D2);
    let width = line.linewidth_hz;
    Ok(0.5 * line.gamma() * saturation * strength / (1.0 + saturation + 4.0 * detuning * detuning / (width * width)))
}

/// Ratio of the σ⁻ push-out scattering rate of |4,−4⟩ (on resonance) to that
/// of |4,+4⟩ in the same beam, at `field` gauss.
pub fn push_out_selectivity(atom: &AtomicData, field: f64, saturation: f64) -> Result<f64> {
    let dark = HyperfineState::ground(4, -4)?;
    let bright = HyperfineState::ground(4, 4)?;
    let resonance = atom.d2_zeeman_detuning(dark, HyperfineState::excited(5, -5)?, field)?;
    let other = atom.d2_zeeman_detuning(bright, HyperfineState::excited(5, 3)?, field)?;
    let on = scattering_rate(atom, -4, -1, 0.0, saturation)?;
    let off = scattering_rate(atom, 4, -1, other - resonance, saturation)?;
    Ok(on / off)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs() -> AtomicData {
        AtomicData::cesium()
    }

    #[test]
    fn columns_conserve_probability() {
        let r = pump_rates(&cs(), [0.5, 0.2, 0.3], 0.7).unwrap();
        for j in 0..LEVELS {
            assert!(r.matrix.column(j).sum().abs() < 1e-6, "column {j}");
        }
        assert!(pump_rates(&cs(), [0.5, 0.6, -0.1], 0.1).is_err());
        assert!(pump_rates(&cs(), [0.5, 0.5, 0.0], -0.1).is_err());
    }

    #[test]
    fn sigma_plus_pumps_to_stretched() {
        let r = pump_rates(&cs(), [1.0, 0.0, 0.0], 0.1).unwrap();
        let p = pump_steady_state(&r).unwrap();
        assert!((p.get(4) - 1.0).abs() < 1e-9, "{p:?}");
        let g = r.effective_ground().unwrap();
        let lossless: Vec<i32> = (-4..=4).filter(|&m| g[(ground_index(m), ground_index(m))].abs() < 1e-6).collect();
        assert_eq!(lossless, vec![4]);
    }

    #[test]
    fn pi_light_is_mirror_symmetric() {
        let r = pump_rates(&cs(), [0.0, 1.0, 0.0], 0.1).unwrap();
        let p = pump_steady_state(&r).unwrap();
        for m in 1..=4 {
            assert!((p.get(m) - p.get(-m)).abs() < 1e-9);
        }
    }

    #[test]
    fn no_light_has_no_unique_steady_state() {
        let r = pump_rates(&cs(), [1.0, 0.0, 0.0], 0.0).unwrap();
        assert!(matches!(pump_steady_state(&r), Err(Error::NonUniqueSteadyState(_))));
    }

    #[test]
    fn zero_duration_is_identity() {
        let r = pump_rates(&cs(), [0.6, 0.1, 0.3], 0.1).unwrap();
        let p0 = PopulationVector::pure(4, -2).unwrap();
        assert_eq!(pump_evolution(&r, &p0, 0.0).unwrap(), p0);
    }

    #[test]
    fn scattering_is_lorentzian() {
        let cs = cs();
        let on = scattering_rate(&cs, -4, -1, 0.0, 1e-4).unwrap();
        let gamma = cs.line(Line::D2).gamma();
        assert!(((on - 0.5 * gamma * 1e-4) / on).abs() < 2e-4);
        let half = scattering_rate(&cs, -4, -1, 0.5 * cs.line(Line::D2).linewidth_hz, 1e-4).unwrap();
        assert!((half / on - 0.5).abs() < 1e-4);
        assert!(matches!(scattering_rate(&cs, -4, 2, 0.0, 0.1), Err(Error::SelectionRule(_))));
    }

    #[test]
    fn push_out_is_selective() {
        assert!(push_out_selectivity(&cs(), 28.0, 0.1).unwrap() > 1e3);
    }
}
