use std::path::PathBuf;

/// Errors raised anywhere in the toolkit.
///
/// Variants are grouped by the stage that can produce them so the CLI can map
/// configuration problems and numerical failures onto distinct exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("non-finite evaluation: {0}")]
    Evaluation(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("no guided HE11 mode at wavelength {wavelength:e} m")]
    NoMode { wavelength: f64 },

    #[error("selection rule violated: {0}")]
    SelectionRule(String),

    #[error("wavelength {wavelength:e} m is within {linewidths} linewidths of a resonance")]
    NearResonance { wavelength: f64, linewidths: f64 },

    #[error("outside validity range: {0}")]
    Validity(String),

    #[error("field vanishes at the requested point")]
    UndefinedPoint,

    #[error("no bound trap: {0}")]
    NoTrap(String),

    #[error("Hessian at the trap minimum is not positive definite (eigenvalues {0:?})")]
    Saddle([f64; 3]),

    #[error("steady state is not unique: {0}")]
    NonUniqueSteadyState(String),

    #[error("step size underflow at t = {time:e} s")]
    Stiffness { time: f64 },

    #[error("atomic data file line {line}: {message}")]
    Data { line: usize, message: String },

    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { key: key.into(), message: message.into() }
    }

    /// True for errors caused by user input rather than a numerical failure.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Error::Config { .. } | Error::Data { .. } | Error::Io { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
