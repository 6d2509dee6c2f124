use thiserror::Error;

/// Errors raised by the library. Every variant is a validation or guard
/// failure; none of them indicate internal corruption.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{value} is not square-free")]
    NotSquareFree { value: u64 },

    #[error("{value} is not prime")]
    NotPrime { value: u64 },

    #[error("{0} is a perfect square")]
    PerfectSquare(String),

    #[error("input {value} is beyond the factorization scale of this library")]
    OutOfScale { value: String },

    #[error("budget exceeded: estimated {estimate:.3e} elements, cap is {cap:.3e}")]
    Budget { estimate: f64, cap: f64 },

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("construction failed: {0}")]
    Construction(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Whether this error came from a size guard rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. } | Error::OutOfScale { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
