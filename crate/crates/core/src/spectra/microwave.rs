use std::io::{BufRead, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::dynamics::{pi_pulse_fwhm, rabi_transfer, PulseSpec};
use crate::error::{Error, Result};
use crate::numerics::{DataPoint, FitResult, LeastSquares};

use super::FitReport;

/// Transferred fraction versus microwave detuning.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MwPoint {
    pub detuning: f64,
    pub fraction: f64,
}

pub const MW_CSV_HEADER: &str = "delta_Hz,probability";

/// Lines of a microwave spectrum probed by π pulses of one duration.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct MwModel {
    pub duration: f64,
    pub centers: Vec<f64>,
    pub amplitudes: Vec<f64>,
}

impl MwModel {
    pub fn new(duration: f64, centers: Vec<f64>, amplitudes: Vec<f64>) -> Result<Self> {
        PulseSpec::pi_pulse(duration)?;
        if centers.is_empty() || centers.len() != amplitudes.len() {
            return Err(Error::domain("need one amplitude per line and at least one line"));
        }
        Ok(Self { duration, centers, amplitudes })
    }

    pub fn evaluate(&self, detuning: f64) -> f64 {
        let pulse = PulseSpec::pi_pulse(self.duration).expect("checked at construction");
        self.centers
            .iter()
            .zip(&self.amplitudes)
            .map(|(c, a)| a * rabi_transfer(&pulse.with_detuning(detuning - c)))
            .sum()
    }
}

/// Binomial draw of `shots` atoms per detuning, each transferred with
/// probability `model.evaluate(Δ)` clamped to [0, 1]. ChaCha8 seeded with
/// `seed`.
pub fn simulate_mw_spectrum(model: &MwModel, detunings: &[f64], shots: u64, seed: u64) -> Result<Vec<MwPoint>> {
    if shots == 0 {
        return Err(Error::domain("need at least one shot per point"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    detunings
        .iter()
        .map(|&d| {
            let p = model.evaluate(d).clamp(0.0, 1.0);
            let k =
                Binomial::new(shots, p).map_err(|e| Error::domain(format!("binomial p = {p}: {e}")))?.sample(&mut rng);
            Ok(MwPoint { detuning: d, fraction: k as f64 / shots as f64 })
        })
        .collect()
}

pub fn write_mw_csv<W: Write>(out: &mut W, points: &[MwPoint]) -> Result<()> {
    let io = |e| Error::Io { path: "<mw csv>".into(), source: e };
    writeln!(out, "{MW_CSV_HEADER}").map_err(io)?;
    for p in points {
        writeln!(out, "{:e},{:e}", p.detuning, p.fraction).map_err(io)?;
    }
    Ok(())
}

pub fn read_mw_csv<R: BufRead>(input: R) -> Result<Vec<MwPoint>> {
    let mut out = Vec::new();
    let mut header = false;
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::Io { path: "<mw csv>".into(), source: e })?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !header {
            if line != MW_CSV_HEADER {
                return Err(Error::Data { line: i + 1, message: format!("expected header `{MW_CSV_HEADER}`") });
            }
            header = true;
            continue;
        }
        let bad = |m: &str| Error::Data { line: i + 1, message: m.to_string() };
        let (a, b) = line.split_once(',').ok_or_else(|| bad("expected two columns"))?;
        out.push(MwPoint {
            detuning: a.trim().parse().map_err(|_| bad("bad detuning"))?,
            fraction: b.trim().parse().map_err(|_| bad("bad fraction"))?,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct MwFit {
    pub model: MwModel,
    pub fit: FitResult,
    /// |c₁ − c₂| and its one-sigma uncertainty for two-line fits.
    pub splitting: Option<(f64, f64)>,
    /// FWHM of each fitted line, fixed by the pulse duration.
    pub fwhm: f64,
}

impl MwFit {
    pub fn report(&self) -> FitReport {
        let names: Vec<String> = (0..self.model.centers.len())
            .flat_map(|k| [format!("amplitude_{}", k + 1), format!("center_{}_Hz", k + 1)])
            .collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        FitReport::new(&refs, &self.fit)
    }
}

/// Local maxima of the data at least `separation` apart, highest first.
fn peaks(data: &[MwPoint], separation: f64) -> Vec<MwPoint> {
    let mut sorted: Vec<MwPoint> = data.to_vec();
    sorted.sort_by(|a, b| b.fraction.total_cmp(&a.fraction));
    let mut out: Vec<MwPoint> = Vec::new();
    for p in sorted {
        if out.iter().all(|q| (q.detuning - p.detuning).abs() > separation) {
            out.push(p);
        }
    }
    out
}

/// Fit one or two Fourier-limited lines with the Rabi frequency fixed to π/τ.
pub fn fit_mw_spectrum(data: &[MwPoint], duration: f64, components: usize) -> Result<MwFit> {
    if !(components == 1 || components == 2) {
        return Err(Error::domain(format!("components must be 1 or 2, got {components}")));
    }
    let fwhm = pi_pulse_fwhm(duration)?;
    if data.len() < 2 * components + 1 {
        return Err(Error::domain("too few points for the requested components"));
    }
    let pulse = PulseSpec::pi_pulse(duration)?;
    let found = peaks(data, 0.75 * fwhm);
    let top = found[0];
    let mut initial = vec![top.fraction.max(1e-3), top.detuning];
    if components == 2 {
        match found.get(1).filter(|p| p.fraction > 0.25 * top.fraction) {
            Some(p) => initial.extend([p.fraction, p.detuning]),
            // no resolved second peak: split the main one
            None => {
                initial =
                    vec![0.5 * top.fraction, top.detuning - 0.25 * fwhm, 0.5 * top.fraction, top.detuning + 0.25 * fwhm]
            }
        }
    }
    let (lo, hi) =
        (data[0].detuning.min(data[data.len() - 1].detuning), data[0].detuning.max(data[data.len() - 1].detuning));
    let bounds = (0..components).flat_map(|_| [(0.0, 2.0), (lo, hi)]).collect();
    let pts: Vec<DataPoint> = data.iter().map(|p| DataPoint::new(p.detuning, p.fraction, 1.0)).collect();
    let model =
        |p: &[f64], d: f64| p.chunks(2).map(|c| c[0] * rabi_transfer(&pulse.with_detuning(d - c[1]))).sum::<f64>();
    let mut fit = LeastSquares::default().with_bounds(bounds).fit(model, &initial, &pts)?;
    if !fit.converged {
        return Err(Error::DegenerateFit(format!("no convergence after {} iterations", fit.iterations)));
    }
    let mut splitting = None;
    if components == 2 {
        if fit.parameters[1] > fit.parameters[3] {
            fit.swap_parameters(0, 2);
            fit.swap_parameters(1, 3);
        }
        let s = fit.parameters[3] - fit.parameters[1];
        if s < 0.1 * fwhm {
            return Err(Error::DegenerateFit(format!(
                "line centers {:.1} Hz apart, below a tenth of the {fwhm:.1} Hz linewidth",
                s
            )));
        }
        if let Some(k) = [0, 2].into_iter().find(|&k| fit.parameters[k] < 3.0 * fit.sigma(k)) {
            return Err(Error::DegenerateFit(format!(
                "line {} amplitude {:.3} is not resolved from zero",
                k / 2 + 1,
                fit.parameters[k]
            )));
        }
        let c = &fit.covariance;
        splitting = Some((s, (c[(1, 1)] + c[(3, 3)] - 2.0 * c[(1, 3)]).max(0.0).sqrt()));
    }
    let centers = fit.parameters.chunks(2).map(|c| c[1]).collect();
    let amplitudes = fit.parameters.chunks(2).map(|c| c[0]).collect();
    Ok(MwFit { model: MwModel::new(duration, centers, amplitudes)?, fit, splitting, fwhm })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(half: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| -half + 2.0 * half * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn two_line_splitting_recovered() {
        let truth = MwModel::new(40e-6, vec![-30.35e3, 30.35e3], vec![0.8, 0.7]).unwrap();
        let data = simulate_mw_spectrum(&truth, &grid(90e3, 121), 400, 11).unwrap();
        let fit = fit_mw_spectrum(&data, 40e-6, 2).unwrap();
        let (s, sigma) = fit.splitting.unwrap();
        assert!((s - 60.7e3).abs() < 0.9e3, "{s} ± {sigma}");
        assert!(sigma > 0.0 && sigma < 0.9e3);
    }

    #[test]
    fn single_line_width() {
        let truth = MwModel::new(103e-6, vec![1.2e3], vec![0.9]).unwrap();
        let data = simulate_mw_spectrum(&truth, &grid(25e3, 101), 1000, 5).unwrap();
        let fit = fit_mw_spectrum(&data, 103e-6, 1).unwrap();
        assert!((fit.model.centers[0] - 1.2e3).abs() < 200.0);
        assert!((fit.fwhm - 7.76e3).abs() < 0.05 * 7.76e3);
    }

    #[test]
    fn collapsed_lines_are_degenerate() {
        let truth = MwModel::new(40e-6, vec![0.0], vec![0.9]).unwrap();
        let data = simulate_mw_spectrum(&truth, &grid(90e3, 121), 400, 2).unwrap();
        assert!(matches!(fit_mw_spectrum(&data, 40e-6, 2), Err(Error::DegenerateFit(_))));
        let clean: Vec<MwPoint> =
            grid(90e3, 121).into_iter().map(|d| MwPoint { detuning: d, fraction: truth.evaluate(d) }).collect();
        assert!(matches!(fit_mw_spectrum(&clean, 40e-6, 2), Err(Error::DegenerateFit(_))));
    }

    #[test]
    fn csv_round_trip() {
        let truth = MwModel::new(40e-6, vec![0.0], vec![0.9]).unwrap();
        let data = simulate_mw_spectrum(&truth, &grid(50e3, 11), 100, 2).unwrap();
        let mut buf = Vec::new();
        write_mw_csv(&mut buf, &data).unwrap();
        assert_eq!(read_mw_csv(&buf[..]).unwrap(), data);
    }
}
