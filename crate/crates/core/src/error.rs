use thiserror::Error;

/// Errors produced by the orthkit solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("zero vector has no support functional")]
    ZeroVector,
    #[error("the map is identically zero")]
    ZeroMap,
    #[error("no canonical semi-inner-product on l_inf")]
    InfiniteExponent,
    #[error("operation requires Euclidean (p = 2) spaces")]
    NonHilbert,
    #[error("operation requires a linear map (k = 1), got k = {0}")]
    NotLinear(usize),
    #[error("grid of {size} points exceeds cap {cap}")]
    GridTooLarge { size: u128, cap: u128 },
    #[error("shape mismatch between maps: {0}")]
    ShapeMismatch(String),
    #[error("empty input")]
    EmptyInput,
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
