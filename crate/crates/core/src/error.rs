use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    /// Exhaustive enumeration refused because `2^K` is too large.
    #[error("capacity exceeded: K = {k} exceeds the enumeration limit {limit}")]
    Capacity { k: usize, limit: usize },

    #[error("numerical integration did not reach tolerance: estimate {value:e}, error {error:e}")]
    Integration { value: f64, error: f64 },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
