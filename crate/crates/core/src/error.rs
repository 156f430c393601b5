use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {value} outside the admissible range [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("integration did not converge: {0}")]
    NonConvergence(String),

    #[error("solution blew up at {at}: |value| = {magnitude:e}")]
    BlowUp { at: f64, magnitude: f64 },

    #[error("quadrature refinement disagreement {difference:e} exceeds {tolerance:e}")]
    QuadratureFailure { difference: f64, tolerance: f64 },

    #[error("branch calibration is ambiguous: residual ratio {ratio:.3} < {required}")]
    Ambiguous { ratio: f64, required: f64 },

    #[error("at probe (x = {x}, t = {t}): {source}")]
    Probe {
        x: f64,
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag, used by the CLI's JSON error report.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::OutOfRange { .. } => "out_of_range",
            Error::NonConvergence(_) => "non_convergence",
            Error::BlowUp { .. } => "blow_up",
            Error::QuadratureFailure { .. } => "quadrature_failure",
            Error::Ambiguous { .. } => "ambiguous",
            Error::Probe { source, .. } => source.kind(),
            Error::Io { .. } => "io",
            Error::Parse(_) => "parse",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
