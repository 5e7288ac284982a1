use thiserror::Error;

/// Errors raised by the solver stack.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("singular Caputo derivative at t = {t}: exponent {exponent} is negative")]
    Singularity { t: f64, exponent: f64 },
    #[error("non-finite value from {what} at {location}")]
    NonFinite { what: String, location: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("linear solve failed: {0}")]
    LinearSolve(String),
    #[error("unknown example `{0}` (valid ids: ex1, ex2, ex3, ex4)")]
    UnknownExample(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("expression error: {0}")]
    Expr(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
