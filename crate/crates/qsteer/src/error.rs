use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an input value failed. The message names the
    /// offending field.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The exact piecewise propagator cannot handle this schedule
    /// (e.g. overlapping multi-channel pulses); use the numeric path.
    #[error("unsupported schedule: {0}")]
    UnsupportedSchedule(String),

    /// Numerical integration failed (non-finite field values, etc).
    #[error("integration error: {0}")]
    Integration(String),
}

pub type Result<T> = std::result::Result<T, Error>;
