use thiserror::Error;

/// Errors raised by the library. Numerical non-convergence is never an error;
/// it is reported on the estimate itself.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exponent must satisfy p >= 1, got {0}")]
    InvalidExponent(f64),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("dimension mismatch for {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("negative entry {value} at index {index}")]
    NegativeEntry { index: usize, value: f64 },

    #[error("non-finite entry at index {0}")]
    NonFinite(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("enumeration cap exceeded: {what} of size {size} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("matrix is not a summability matrix")]
    NotSummability,

    #[error("invalid block indices gamma={gamma}, lambda={lambda} for {rows} rows")]
    InvalidBlock {
        gamma: usize,
        lambda: usize,
        rows: usize,
    },

    #[error("unknown claim `{0}`")]
    UnknownClaim(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("report output failed: {0}")]
    Report(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
