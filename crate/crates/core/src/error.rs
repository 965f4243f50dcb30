//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A constructor argument is outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    /// A theorem precondition does not hold for the supplied configuration.
    /// `condition` names the failed inequality so callers can tell which
    /// requirement to fix.
    #[error("precondition `{condition}` failed: {detail}")]
    Precondition { condition: &'static str, detail: String },

    /// The subgradient oracle returned a non-finite value or gradient.
    #[error("oracle failure at subgradient evaluation {eval}: {detail}")]
    OracleFailure { eval: u64, detail: String },

    /// The oracle violated its contract (e.g. a zero subgradient at a
    /// certifiably non-optimal point in the normalized method).
    #[error("oracle contract breach: {0}")]
    OracleContract(String),

    /// An operation that needs exact distance instrumentation was called on
    /// an uninstrumented trace or problem.
    #[error("missing distance instrumentation: {0}")]
    MissingInstrumentation(String),

    /// Vector or matrix dimensions do not agree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Malformed input data (e.g. a sparse dataset line that does not parse).
    #[error("{0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParam { name, reason: reason.into() }
    }

    pub(crate) fn precondition(condition: &'static str, detail: impl Into<String>) -> Self {
        Error::Precondition { condition, detail: detail.into() }
    }
}
