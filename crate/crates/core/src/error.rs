use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("state is not normalized: squared norm {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("matrix is not unitary: max |U†U - 1| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("{what} = {value} is outside {domain}")]
    OutOfDomain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("matrix size {size} exceeds the limit of {limit} for {algorithm}")]
    TooLarge {
        size: usize,
        limit: usize,
        algorithm: &'static str,
    },

    #[error("need at least {need} {what}, got {got}")]
    TooFew {
        what: &'static str,
        need: usize,
        got: usize,
    },

    #[error("invalid Gram matrix: {0}")]
    InvalidGram(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature did not converge: estimated error {error:e} after {intervals} intervals")]
    QuadratureNotConverged { error: f64, intervals: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
