use thiserror::Error;

/// Errors produced by the clustering library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Arguments or data violate an operation's preconditions.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Two inputs that must agree in dimension or length do not.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    /// The eigensolver exhausted its matrix-vector budget.
    #[error(
        "eigensolver did not converge after {matvecs} matrix-vector products \
         (worst residual {worst_residual:.3e}, tolerance {tolerance:.1e})"
    )]
    NoConvergence {
        matvecs: usize,
        worst_residual: f64,
        tolerance: f64,
    },
    /// The synthetic generator could not satisfy its separation constraint.
    #[error("infeasible dataset spec: {0}")]
    Infeasible(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
