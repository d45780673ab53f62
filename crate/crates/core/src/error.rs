use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("malformed rational literal `{0}`")]
    ParseRational(String),

    #[error("degenerate family: {0}")]
    DegenerateFamily(String),

    #[error("independence violation: 1, f_1, ..., f_m have rank {rank}, expected {expected}")]
    IndependenceViolation { rank: usize, expected: usize },

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature did not converge: partial estimate {estimate}, error estimate {error}")]
    NonConvergence { estimate: f64, error: f64 },

    #[error("insufficient p-adic precision: {0}")]
    Precision(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
