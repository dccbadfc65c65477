//! Damped Gauss–Newton (Levenberg–Marquardt) weighted least squares.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// One observation: abscissa, measured value and its weight (inverse variance).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataPoint {
    pub x: f64,
    pub y: f64,
    pub weight: f64,
}

impl DataPoint {
    pub fn new(x: f64, y: f64, weight: f64) -> Self {
        Self { x, y, weight }
    }
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub parameters: Vec<f64>,
    /// Inverse damped normal matrix scaled by the residual variance.
    pub covariance: DMatrix<f64>,
    /// `sqrt(Σ w (y − f)²)` at the returned parameters.
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Weighted sum of squared residuals.
    pub chi2: f64,
    /// Degrees of freedom, `n − p`.
    pub ndof: usize,
    /// `residual_norm` after every accepted step, starting with the initial point.
    pub residual_history: Vec<f64>,
}

impl FitResult {
    /// One-sigma uncertainty of parameter `i`.
    pub fn sigma(&self, i: usize) -> f64 {
        self.covariance[(i, i)].max(0.0).sqrt()
    }

    pub fn sigmas(&self) -> Vec<f64> {
        (0..self.parameters.len()).map(|i| self.sigma(i)).collect()
    }

    pub fn correlation(&self) -> DMatrix<f64> {
        let n = self.parameters.len();
        DMatrix::from_fn(n, n, |i, j| {
            let d = self.sigma(i) * self.sigma(j);
            if d > 0.0 {
                self.covariance[(i, j)] / d
            } else if i == j {
                1.0
            } else {
                0.0
            }
        })
    }

    /// Swap parameters `i` and `j` together with their covariance rows/columns.
    pub(crate) fn swap_parameters(&mut self, i: usize, j: usize) {
        self.parameters.swap(i, j);
        self.covariance.swap_rows(i, j);
        self.covariance.swap_columns(i, j);
    }
}

/// Fit configuration. The defaults implement the documented schedule: initial
/// damping 1e-3, factor 10 up and down, at most 200 iterations.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub max_iterations: usize,
    pub initial_damping: f64,
    pub damping_factor: f64,
    pub max_damping: f64,
    pub tolerance: f64,
    /// Optional per-parameter box; proposed steps are clamped into it.
    pub bounds: Option<Vec<(f64, f64)>>,
}

impl Default for LeastSquares {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            initial_damping: 1e-3,
            damping_factor: 10.0,
            max_damping: 1e16,
            tolerance: 1e-10,
            bounds: None,
        }
    }
}

const JACOBIAN_REL_STEP: f64 = 1e-6;
const JACOBIAN_ABS_STEP: f64 = 1e-9;

/// Fit with default settings.
pub fn least_squares<M>(model: M, initial: &[f64], data: &[DataPoint]) -> Result<FitResult>
where
    M: Fn(&[f64], f64) -> f64,
{
    LeastSquares::default().fit(model, initial, data)
}

impl LeastSquares {
    pub fn with_bounds(mut self, bounds: Vec<(f64, f64)>) -> Self {
        self.bounds = Some(bounds);
        self
    }

    fn clamp(&self, p: &mut [f64]) {
        if let Some(bounds) = &self.bounds {
            for (v, &(lo, hi)) in p.iter_mut().zip(bounds) {
                *v = v.clamp(lo, hi);
            }
        }
    }

    pub fn fit<M>(&self, model: M, initial: &[f64], data: &[DataPoint]) -> Result<FitResult>
    where
        M: Fn(&[f64], f64) -> f64,
    {
        let n = data.len();
        let np = initial.len();
        if np == 0 {
            return Err(Error::domain("least_squares needs at least one parameter"));
        }
        if n < np {
            return Err(Error::domain(format!("least_squares needs at least {np} data points, got {n}")));
        }
        if let Some(bad) = data.iter().find(|d| !(d.weight > 0.0) || !d.weight.is_finite()) {
            return Err(Error::domain(format!("non-positive weight {} at x = {}", bad.weight, bad.x)));
        }
        if let Some(b) = &self.bounds {
            if b.len() != np {
                return Err(Error::domain("bounds length does not match parameter count"));
            }
        }
        let sqrt_w: Vec<f64> = data.iter().map(|d| d.weight.sqrt()).collect();

        let residuals = |p: &[f64]| -> Result<DVector<f64>> {
            let mut r = DVector::zeros(n);
            for (i, d) in data.iter().enumerate() {
                let f = model(p, d.x);
                if !f.is_finite() {
                    return Err(Error::Evaluation(format!("model({p:?}, {}) = {f}", d.x)));
                }
                r[i] = sqrt_w[i] * (d.y - f);
            }
            Ok(r)
        };
        // Jacobian of the weighted model (not of the residual), central differences.
        let jacobian = |p: &[f64]| -> Result<DMatrix<f64>> {
            let mut jac = DMatrix::zeros(n, np);
            let mut work = p.to_vec();
            for j in 0..np {
                let h = (JACOBIAN_REL_STEP * p[j].abs()).max(JACOBIAN_ABS_STEP);
                work[j] = p[j] + h;
                let plus: Vec<f64> = data.iter().map(|d| model(&work, d.x)).collect();
                work[j] = p[j] - h;
                let minus: Vec<f64> = data.iter().map(|d| model(&work, d.x)).collect();
                work[j] = p[j];
                for i in 0..n {
                    let v = sqrt_w[i] * (plus[i] - minus[i]) / (2.0 * h);
                    if !v.is_finite() {
                        return Err(Error::Evaluation(format!(
                            "non-finite Jacobian entry for parameter {j} at x = {}",
                            data[i].x
                        )));
                    }
                    jac[(i, j)] = v;
                }
            }
            Ok(jac)
        };

        let mut p = initial.to_vec();
        self.clamp(&mut p);
        let mut r = residuals(&p)?;
        let mut cost = r.norm_squared();
        let mut history = vec![cost.sqrt()];
        let mut lambda = self.initial_damping;
        let mut converged = cost == 0.0;
        let mut iterations = 0;

        let mut jac = jacobian(&p)?;
        let mut normal = jac.transpose() * &jac;
        let mut gradient = jac.transpose() * &r;

        while !converged && iterations < self.max_iterations {
            if let Some(j) = (0..np).find(|&j| normal[(j, j)] == 0.0) {
                return Err(Error::DegenerateFit(format!("parameter {j} does not influence the model")));
            }
            iterations += 1;
            let step = loop {
                let damped = damp(&normal, lambda);
                match damped.cholesky() {
                    Some(ch) => break Some(ch.solve(&gradient)),
                    None => {
                        lambda *= self.damping_factor;
                        if lambda > self.max_damping {
                            break None;
                        }
                    }
                }
            };
            let Some(step) = step else {
                return Err(Error::DegenerateFit("normal matrix singular at maximal damping".into()));
            };

            let mut trial: Vec<f64> = p.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            self.clamp(&mut trial);
            let actual_step: f64 = trial.iter().zip(&p).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            let p_norm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            let r_trial = residuals(&trial)?;
            let cost_trial = r_trial.norm_squared();

            if cost_trial < cost {
                let rel_decrease = (cost.sqrt() - cost_trial.sqrt()) / cost.sqrt();
                p = trial;
                r = r_trial;
                cost = cost_trial;
                history.push(cost.sqrt());
                lambda = (lambda / self.damping_factor).max(1e-15);
                if rel_decrease < self.tolerance
                    || actual_step < self.tolerance * (p_norm + self.tolerance)
                    || cost == 0.0
                {
                    converged = true;
                }
                jac = jacobian(&p)?;
                normal = jac.transpose() * &jac;
                gradient = jac.transpose() * &r;
            } else {
                lambda *= self.damping_factor;
                if actual_step < self.tolerance * (p_norm + self.tolerance) || lambda > self.max_damping {
                    // No descent is possible at working precision: we sit at the minimum.
                    converged = true;
                }
            }
        }

        let ndof = n - np;
        let variance = if ndof > 0 { cost / ndof as f64 } else { 1.0 };
        let damped = damp(&normal, lambda.min(self.initial_damping));
        let inverse = damped
            .clone()
            .cholesky()
            .map(|c| c.inverse())
            .or_else(|| damped.try_inverse())
            .ok_or_else(|| Error::DegenerateFit("normal matrix not invertible at solution".into()))?;
        let mut covariance = inverse * variance;
        // symmetrize away round-off
        covariance = (&covariance + covariance.transpose()) * 0.5;

        Ok(FitResult {
            parameters: p,
            covariance,
            residual_norm: cost.sqrt(),
            iterations,
            converged,
            chi2: cost,
            ndof,
            residual_history: history,
        })
    }
}

fn damp(normal: &DMatrix<f64>, lambda: f64) -> DMatrix<f64> {
    let mut m = normal.clone();
    let scale = normal.diagonal().max().max(f64::MIN_POSITIVE);
    for i in 0..m.nrows() {
        let d = normal[(i, i)].max(1e-12 * scale);
        m[(i, i)] += lambda * d;
    }
    m
}
