use thiserror::Error;

/// Errors raised by model construction, the decision procedures and the
/// simulation/estimation drivers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error(
        "sensor attack budget violates 2σ < p (σ = {sigma}, p = {p}): at most {max} of {p} sensors may be attacked",
        max = (.p.saturating_sub(1)) / 2
    )]
    SparsityBound { sigma: usize, p: usize },

    #[error("invalid attack budget: {0}")]
    InvalidBudget(String),

    #[error("{location}: {message}")]
    Model { location: String, message: String },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("system is autonomous (m = 0); use the autonomous distinguishability test instead")]
    Autonomous,

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("wrong horizon: expected {expected} samples, got {got}")]
    WrongHorizon { expected: usize, got: usize },

    #[error("no consistent mode: the trace cannot be explained by any mode within the attack budgets")]
    NoConsistentMode,

    #[error("step size must be positive, got {0}")]
    NonpositiveStep(String),

    #[error("{0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn model(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Model {
            location: location.into(),
            message: message.into(),
        }
    }
}
