//! Probe transmission and microwave spectra: forward models, seeded
//! synthetic data and least-squares fits.

mod microwave;
mod transmission;

pub use microwave::{
    fit_mw_spectrum, read_mw_csv, simulate_mw_spectrum, write_mw_csv, MwFit, MwModel, MwPoint, MW_CSV_HEADER,
};
pub use transmission::{
    estimate_spectrum, fit_transmission, simulate_spectrum, transmission, SpectrumData, SpectrumFit, SpectrumModel,
    SpectrumPoint, MIN_SPECTRUM_POINTS, SPECTRUM_CSV_HEADER, SPECTRUM_PARAMETERS, ZERO_COUNT_REGULARIZATION,
};

use crate::numerics::FitResult;

/// Serializable summary of a fit.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FitReport {
    pub names: Vec<String>,
    pub values: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub correlation: Vec<Vec<f64>>,
    pub chi2: f64,
    pub ndof: usize,
}

impl FitReport {
    pub fn new(names: &[&str], fit: &FitResult) -> Self {
        let c = fit.correlation();
        Self {
            names: names.iter().map(|s| s.to_string()).collect(),
            values: fit.parameters.clone(),
            sigmas: fit.sigmas(),
            correlation: (0..c.nrows()).map(|i| c.row(i).iter().copied().collect()).collect(),
            chi2: fit.chi2,
            ndof: fit.ndof,
        }
    }
}
