use thiserror::Error;

use crate::integrator::SimState;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument fell outside the region where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("step size underflow at tau = {tau:.6e} (h = {step:.3e})", tau = .last.tau)]
    StepUnderflow { last: SimState, step: f64 },

    #[error("step budget of {limit} exhausted at tau = {tau:.6e}", tau = .last.tau)]
    TooManySteps { last: SimState, limit: usize },

    #[error("worldline has no {0} event")]
    MissingEvent(&'static str),

    #[error("not enough samples: {0}")]
    InsufficientSamples(String),

    #[error("degenerate field: {0}")]
    DegenerateField(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            message: err.to_string(),
        }
    }

    /// True for failures of the numerical integration itself (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::StepUnderflow { .. } | Error::TooManySteps { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
