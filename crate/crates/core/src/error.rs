use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree {0} outside the supported range {min}..={max}", min = crate::weyl::MIN_DEGREE, max = crate::weyl::MAX_DEGREE)]
    Degree(usize),

    #[error("sum length must be at least 1")]
    EmptySum,

    #[error("phase point has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("weight sequence has length {got}, expected {expected}")]
    WeightLength { expected: usize, got: usize },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} of size {size} exceeds the configured cap {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },

    #[error("numeric overflow: {0}")]
    Overflow(String),

    #[error("failed to build worker pool: {0}")]
    ThreadPool(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
