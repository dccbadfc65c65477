//! Cesium-133 atomic structure: hyperfine Zeeman levels, D-line transition
//! strengths and the two-line dynamic polarizability of 6S1/2.

pub mod angular;
mod data;
mod polarizability;
mod zeeman;

pub use data::{AtomicData, Line, LineData, Sellmeier, DATA_KEYS};
pub use polarizability::{NEAR_RESONANCE_LINEWIDTHS, TUNE_OUT_INTERVAL};
pub use zeeman::{HyperfineState, Manifold, EXCITED_ZEEMAN_MAX_GAUSS};
