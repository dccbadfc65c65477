use std::io::{BufRead, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::numerics::{DataPoint, FitResult, LeastSquares};

use super::FitReport;

/// Two Lorentzian absorption lines with a common width.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SpectrumModel {
    pub od_plus: f64,
    pub od_minus: f64,
    /// Line centers, Hz.
    pub delta_plus: f64,
    pub delta_minus: f64,
    /// FWHM, Hz.
    pub gamma: f64,
}

pub const SPECTRUM_PARAMETERS: [&str; 5] = ["OD_plus", "OD_minus", "delta_plus_Hz", "delta_minus_Hz", "gamma_Hz"];

impl SpectrumModel {
    pub fn new(od_plus: f64, od_minus: f64, delta_plus: f64, delta_minus: f64, gamma: f64) -> Result<Self> {
        let m = Self { od_plus, od_minus, delta_plus, delta_minus, gamma };
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<()> {
        if !(self.od_plus >= 0.0 && self.od_minus >= 0.0) {
            return Err(Error::domain(format!("optical depths must be non-negative: {self:?}")));
        }
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return Err(Error::domain(format!("linewidth must be positive, got {}", self.gamma)));
        }
        if !self.delta_plus.is_finite() || !self.delta_minus.is_finite() {
            return Err(Error::domain("line centers must be finite"));
        }
        Ok(())
    }

    fn from_slice(p: &[f64]) -> Self {
        Self { od_plus: p[0], od_minus: p[1], delta_plus: p[2], delta_minus: p[3], gamma: p[4] }
    }

    fn to_vec(self) -> Vec<f64> {
        vec![self.od_plus, self.od_minus, self.delta_plus, self.delta_minus, self.gamma]
    }

    /// −ln T at `detuning`.
    pub fn optical_depth(&self, detuning: f64) -> f64 {
        optical_depth(&self.to_vec(), detuning)
    }

    pub fn transmission(&self, detuning: f64) -> f64 {
        (-self.optical_depth(detuning)).exp()
    }

    pub fn splitting(&self) -> f64 {
        self.delta_plus - self.delta_minus
    }
}

fn optical_depth(p: &[f64], d: f64) -> f64 {
    let line = |od: f64, center: f64| od / (1.0 + 4.0 * (d - center).powi(2) / (p[4] * p[4]));
    line(p[0], p[2]) + line(p[1], p[3])
}

/// Convenience wrapper for [`SpectrumModel::transmission`].
pub fn transmission(model: &SpectrumModel, detuning: f64) -> f64 {
    model.transmission(detuning)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SpectrumPoint {
    pub detuning: f64,
    pub counts: u64,
    pub reference_counts: u64,
}

/// Photon counts per detuning bin, with and without atoms.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SpectrumData {
    pub points: Vec<SpectrumPoint>,
}

pub const SPECTRUM_CSV_HEADER: &str = "detuning_Hz,counts,reference_counts";

impl SpectrumData {
    pub fn new(points: Vec<SpectrumPoint>) -> Result<Self> {
        if let Some(w) = points.windows(2).find(|w| !(w[1].detuning > w[0].detuning)) {
            return Err(Error::domain(format!(
                "detunings must be strictly increasing ({} then {})",
                w[0].detuning, w[1].detuning
            )));
        }
        if points.iter().any(|p| !p.detuning.is_finite()) {
            return Err(Error::domain("non-finite detuning"));
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        let io = |e| Error::Io { path: "<spectrum csv>".into(), source: e };
        writeln!(out, "{SPECTRUM_CSV_HEADER}").map_err(io)?;
        for p in &self.points {
            writeln!(out, "{:e},{},{}", p.detuning, p.counts, p.reference_counts).map_err(io)?;
        }
        Ok(())
    }

    /// Parse CSV written by [`SpectrumData::write_csv`]; `#` lines are skipped.
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut points = Vec::new();
        let mut header = false;
        for (i, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::Io { path: "<spectrum csv>".into(), source: e })?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !header {
                if line != SPECTRUM_CSV_HEADER {
                    return Err(Error::Data {
                        line: i + 1,
                        message: format!("expected header `{SPECTRUM_CSV_HEADER}`"),
                    });
                }
                header = true;
                continue;
            }
            let bad = |m: &str| Error::Data { line: i + 1, message: m.to_string() };
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 3 {
                return Err(bad("expected three columns"));
            }
            points.push(SpectrumPoint {
                detuning: f[0].trim().parse().map_err(|_| bad("bad detuning"))?,
                counts: f[1].trim().parse().map_err(|_| bad("bad counts"))?,
                reference_counts: f[2].trim().parse().map_err(|_| bad("bad reference counts"))?,
            });
        }
        Self::new(points)
    }
}

/// Draw a synthetic record. Reference counts are Poisson with mean
/// `mean_reference`; transmitted counts are Poisson with mean
/// `mean_reference · T(Δ)`. Both come from one ChaCha8 stream seeded with
/// `seed`, drawn reference first, bin by bin.
pub fn simulate_spectrum(
    model: &SpectrumModel,
    detunings: &[f64],
    mean_reference: f64,
    seed: u64,
) -> Result<SpectrumData> {
    model.check()?;
    if !(mean_reference > 0.0) || !mean_reference.is_finite() {
        return Err(Error::domain(format!("mean reference counts must be positive, got {mean_reference}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |mean: f64, rng: &mut ChaCha8Rng| -> Result<u64> {
        if mean == 0.0 {
            return Ok(0);
        }
        let d = Poisson::new(mean).map_err(|e| Error::domain(format!("Poisson mean {mean}: {e}")))?;
        Ok(d.sample(rng) as u64)
    };
    let mut points = Vec::with_capacity(detunings.len());
    for &d in detunings {
        let reference_counts = draw(mean_reference, &mut rng)?;
        let counts = draw(mean_reference * model.transmission(d), &mut rng)?;
        points.push(SpectrumPoint { detuning: d, counts, reference_counts });
    }
    SpectrumData::new(points)
}

/// Count added to empty bins before taking logarithms.
pub const ZERO_COUNT_REGULARIZATION: f64 = 0.5;

pub const MIN_SPECTRUM_POINTS: usize = 25;

#[derive(Debug, Clone)]
pub struct SpectrumFit {
    pub model: SpectrumModel,
    pub fit: FitResult,
}

impl SpectrumFit {
    pub fn splitting(&self) -> (f64, f64) {
        let c = &self.fit.covariance;
        let var = c[(2, 2)] + c[(3, 3)] - 2.0 * c[(2, 3)];
        (self.model.splitting(), var.max(0.0).sqrt())
    }

    /// OD₋/OD₊ with its propagated one-sigma uncertainty.
    pub fn od_ratio(&self) -> (f64, f64) {
        let (a, b) = (self.model.od_minus, self.model.od_plus);
        let c = &self.fit.covariance;
        let r = a / b;
        let var =
            (c[(1, 1)] / (a * a).max(f64::MIN_POSITIVE) + c[(0, 0)] / (b * b) - 2.0 * c[(0, 1)] / (a * b)) * r * r;
        let var = if a == 0.0 { c[(1, 1)] / (b * b) } else { var };
        (r, var.max(0.0).sqrt())
    }

    pub fn report(&self) -> FitReport {
        FitReport::new(&SPECTRUM_PARAMETERS, &self.fit)
    }
}

fn observed(p: &SpectrumPoint) -> DataPoint {
    let reg = |n: u64| {
        if n == 0 {
            ZERO_COUNT_REGULARIZATION
        } else {
            n as f64
        }
    };
    let (nt, nr) = (reg(p.counts), reg(p.reference_counts));
    DataPoint::new(p.detuning, -(nt / nr).ln(), 1.0 / (1.0 / nt + 1.0 / nr))
}

/// Starting point from the data: the two largest optical-depth peaks.
pub fn estimate_spectrum(data: &SpectrumData) -> Result<SpectrumModel> {
    let pts: Vec<DataPoint> = data.points.iter().map(observed).collect();
    if pts.len() < 3 {
        return Err(Error::domain("too few points to estimate a spectrum"));
    }
    let span = pts[pts.len() - 1].x - pts[0].x;
    let step = span / (pts.len() - 1) as f64;
    let (i1, first) = pts.iter().enumerate().max_by(|a, b| a.1.y.total_cmp(&b.1.y)).expect("non-empty");
    let peak = first.y.max(1e-3);
    // half width from the points above half maximum around the first peak
    let mut lo = i1;
    while lo > 0 && pts[lo - 1].y > 0.5 * peak {
        lo -= 1;
    }
    let mut hi = i1;
    while hi + 1 < pts.len() && pts[hi + 1].y > 0.5 * peak {
        hi += 1;
    }
    let gamma = ((pts[hi].x - pts[lo].x) + step).max(2.0 * step);
    let exclusion = 1.5 * gamma;
    let second = pts
        .iter()
        .filter(|p| (p.x - first.x).abs() > exclusion)
        .max_by(|a, b| a.y.total_cmp(&b.y))
        .copied()
        .unwrap_or(DataPoint::new(first.x - exclusion, 0.0, 1.0));
    let (od1, od2) = (peak, second.y.max(0.0));
    let m = if first.x > second.x {
        SpectrumModel::new(od1, od2, first.x, second.x, gamma)?
    } else {
        SpectrumModel::new(od2, od1, second.x, first.x, gamma)?
    };
    Ok(m)
}

/// Weighted fit of −ln(counts/reference) to the two-line model.
pub fn fit_transmission(data: &SpectrumData, initial: Option<&SpectrumModel>) -> Result<SpectrumFit> {
    if data.len() < MIN_SPECTRUM_POINTS {
        return Err(Error::domain(format!("need at least {MIN_SPECTRUM_POINTS} points, got {}", data.len())));
    }
    let start = match initial {
        Some(m) => {
            m.check()?;
            *m
        }
        None => estimate_spectrum(data)?,
    };
    let pts: Vec<DataPoint> = data.points.iter().map(observed).collect();
    let (x0, x1) = (pts[0].x, pts[pts.len() - 1].x);
    let span = x1 - x0;
    let bounds = vec![(0.0, 1e3), (0.0, 1e3), (x0, x1), (x0, x1), (span * 1e-6, span)];
    let mut fit = LeastSquares::default().with_bounds(bounds).fit(optical_depth, &start.to_vec(), &pts)?;
    if !fit.converged {
        return Err(Error::DegenerateFit(format!("no convergence after {} iterations", fit.iterations)));
    }
    if fit.parameters[2] < fit.parameters[3] {
        fit.swap_parameters(2, 3);
        fit.swap_parameters(0, 1);
    }
    let model = SpectrumModel::from_slice(&fit.parameters);
    Ok(SpectrumFit { model, fit })
}
