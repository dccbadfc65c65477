//! Simulation and analysis toolkit for cold cesium atoms trapped in the
//! evanescent field of an optical nanofiber.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod atom;
pub mod cli;
pub mod config;
pub mod constants;
pub mod dynamics;
pub mod error;
pub mod fiber;
pub mod light_matter;
pub mod numerics;
pub mod spectra;

pub use error::{Error, Result};
