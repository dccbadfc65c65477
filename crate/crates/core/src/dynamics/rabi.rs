use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::find_root;

/// Square microwave pulse.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PulseSpec {
    /// Rabi frequency Ω, rad/s.
    pub rabi_frequency: f64,
    /// Duration τ, s.
    pub duration: f64,
    /// Detuning from resonance, Hz.
    pub detuning_hz: f64,
}

impl PulseSpec {
    pub fn new(rabi_frequency: f64, duration: f64, detuning_hz: f64) -> Result<Self> {
        if !(rabi_frequency > 0.0 && duration > 0.0) || !rabi_frequency.is_finite() || !duration.is_finite() {
            return Err(Error::domain(format!(
                "pulse needs positive Rabi frequency and duration, got {rabi_frequency}, {duration}"
            )));
        }
        if !detuning_hz.is_finite() {
            return Err(Error::domain("pulse detuning must be finite"));
        }
        Ok(Self { rabi_frequency, duration, detuning_hz })
    }

    /// Resonant π pulse of duration `duration`.
    pub fn pi_pulse(duration: f64) -> Result<Self> {
        let p = Self::new(PI / duration, duration, 0.0)?;
        debug_assert!((p.rabi_frequency * p.duration - PI).abs() < 1e-12);
        Ok(p)
    }

    pub fn with_detuning(self, detuning_hz: f64) -> Self {
        Self { detuning_hz, ..self }
    }
}

/// Transfer probability of a square pulse.
pub fn rabi_transfer(pulse: &PulseSpec) -> f64 {
    let omega2 = pulse.rabi_frequency * pulse.rabi_frequency;
    let delta = 2.0 * PI * pulse.detuning_hz;
    let general = omega2 + delta * delta;
    let s = (general.sqrt() * pulse.duration * 0.5).sin();
    omega2 / general * s * s
}

/// Full width at half maximum (Hz) of the π-pulse lineshape.
pub fn pi_pulse_fwhm(duration: f64) -> Result<f64> {
    let pulse = PulseSpec::pi_pulse(duration)?;
    // first zero of the lineshape
    let edge = 3f64.sqrt() * pulse.rabi_frequency / (2.0 * PI);
    let half = find_root(|d| rabi_transfer(&pulse.with_detuning(d)) - 0.5, 0.0, edge, 1e-12 * edge)?;
    Ok(2.0 * half)
}
