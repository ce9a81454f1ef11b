use thiserror::Error;

/// Errors produced by the checkers, the LP engine and the input layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("lower bound exceeds upper bound at entry ({row}, {col})")]
    LowerExceedsUpper { row: usize, col: usize },

    #[error("non-finite value in input")]
    NonFinite,

    #[error("index set is empty")]
    EmptyIndexSet,

    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid sign entry {0}")]
    InvalidSign(i8),

    #[error("matrix has a negative entry at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },

    #[error("{what} needs n <= {cap}, got n = {n}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },

    #[error("LP engine failure: {0}")]
    Engine(String),

    #[error("no fast path applies to {0}")]
    NoFastPath(String),

    #[error("property {0} has no strong checker")]
    Unsupported(String),

    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
