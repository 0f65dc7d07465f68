use thiserror::Error;

/// Errors raised by the simulation toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max |M - M^dag| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max |U^dag U - 1| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid pure state: {0}")]
    InvalidState(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
