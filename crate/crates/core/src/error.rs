use thiserror::Error;

/// Errors produced by the library.
///
/// Variants that name an invariant (`InvariantViolation`, `DecompositionNotFound`)
/// indicate a bug rather than bad input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("unsupported field size: {0}")]
    UnsupportedSize(String),
    #[error("division by zero")]
    DivideByZero,
    #[error("points are equal")]
    EqualPoints,
    #[error("invalid coordinates: {0}")]
    InvalidCoordinates(String),
    #[error("point set domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("set is not contained in the curve")]
    NotSubsetOfCurve,
    #[error("set is not a subset")]
    NotSubset,
    #[error("empty set")]
    EmptySet,
    #[error("size {0} is not achievable under the add-back constraints")]
    UnachievableSize(usize),
    #[error("search is limited to q <= 3 (got q = {0})")]
    TooLarge(u32),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("arc decomposition not found: {0}")]
    DecompositionNotFound(String),
    #[error("cover impossible: {0}")]
    CoverImpossible(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
