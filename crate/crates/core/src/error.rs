use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lambert_w domain error: {0}")]
    Domain(String),

    #[error("root finding did not converge: {0}")]
    Convergence(String),

    #[error("invalid interval ({left}, {right}): {reason}")]
    InvalidInterval {
        left: f64,
        right: f64,
        reason: &'static str,
    },

    #[error("invalid privacy parameters: {0}")]
    InvalidParams(String),

    #[error("constraints cover the whole real line; no feasible responses remain")]
    EmptyFeasibleSpace,

    #[error("location {0} lies strictly inside a constraint")]
    InfeasibleLocation(f64),

    #[error("distance must be non-negative, got {0}")]
    NegativeDistance(f64),

    #[error("normalization is degenerate: removed mass {removed} leaves nothing to normalize")]
    DegenerateMass { removed: f64 },

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("operation not available for {0} configurations")]
    UnsupportedClass(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
