use thiserror::Error;

use crate::dimacs::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: u32, right: u32 },

    #[error("n = {n} exceeds the configured guard of {max} (set CLIFSAT_MAX_N to raise it)")]
    GuardExceeded { n: u32, max: u32 },

    #[error("dense matrix oracle supports n <= {max}, got n = {n}")]
    OracleTooLarge { n: u32, max: u32 },

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("{what} index {index} out of range 1..={max}")]
    IndexOutOfRange {
        what: &'static str,
        index: u32,
        max: u32,
    },

    #[error("malformed idempotent: {0}")]
    MalformedIdempotent(String),

    #[error("clause {clause} violates the nonempty-problem hypothesis: {reason}")]
    Precondition { clause: usize, reason: &'static str },

    #[error("formula has no clauses; the symmetry test needs a nonempty problem")]
    EmptyProblem,

    #[error("matrix is singular or ill-conditioned (condition number {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("tolerance violated: {what} residual {residual:e} > {tolerance:e}")]
    Tolerance {
        what: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("coefficient {0} does not fit the dense oracle's integer type")]
    CoefficientOverflow(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}
