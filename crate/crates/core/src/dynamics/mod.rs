//! Optical pumping on the closed F=4 → F'=5 transition, push-out selectivity
//! and Fourier-limited microwave lineshapes.

mod pumping;
mod rabi;

pub use pumping::{
    pump_evolution, pump_rates, pump_steady_state, pumping_time, push_out_selectivity, scattering_rate,
    PopulationVector, RateMatrix, EXCITED_LEVELS, GROUND_LEVELS,
};
pub use rabi::{pi_pulse_fwhm, rabi_transfer, PulseSpec};

use std::io::Write;

use crate::error::{Error, Result};

/// Pumping summary as written by the CLI.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PumpingReport {
    pub steady_state: Vec<f64>,
    pub pumping_time_1_e: f64,
}

pub const LINESHAPE_CSV_HEADER: &str = "delta_Hz,probability";

/// Write the transfer probability of `pulse` over `detunings` as CSV.
pub fn write_lineshape_csv<W: Write>(out: &mut W, pulse: &PulseSpec, detunings: &[f64]) -> Result<()> {
    let io = |e| Error::Io { path: "<lineshape csv>".into(), source: e };
    writeln!(out, "{LINESHAPE_CSV_HEADER}").map_err(io)?;
    for &d in detunings {
        writeln!(out, "{:e},{:e}", d, rabi_transfer(&pulse.with_detuning(d))).map_err(io)?;
    }
    Ok(())
}
