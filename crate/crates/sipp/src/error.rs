use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated a precondition (wrong sign, out of range, NaN, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Evaluation requested outside a table's certified domain.
    #[error("argument {value} outside supported range [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    /// An iterative scheme failed to reach its tolerance.
    #[error("did not converge: {0}")]
    NonConvergence(String),

    /// A structural invariant of the input data was violated.
    #[error("structural error: {0}")]
    Structural(String),

    /// A computation was refused because it would exceed a resource guard.
    #[error("resource guard: {0}")]
    ResourceGuard(String),

    /// A value fell below the numeric floor where division is meaningful.
    #[error("numeric floor: {0}")]
    NumericFloor(String),

    /// Integer overflow in exact arithmetic.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
