use thiserror::Error;

/// Errors raised by ring construction, linear algebra and coding operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("element is not a unit")]
    NotUnit,

    #[error("polynomial is not primitive")]
    NotPrimitive,

    #[error("polynomial is zero")]
    ZeroPolynomial,

    #[error("points are not linearly independent over the subring")]
    DependentPoints,

    #[error("support entries are not linearly independent over the subring")]
    DependentSupport,

    #[error("invalid code dimension k = {k} for length n = {n}")]
    InvalidDimension { k: usize, n: usize },

    #[error("degree {degree} exceeds bound {bound}")]
    DegreeTooLarge { degree: usize, bound: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("linear system has no solution")]
    NoSolution,

    #[error("rank profile {0} is not realizable")]
    UnrealizableProfile(String),

    #[error("error sampling failed after {0} attempts")]
    SamplingExhausted(usize),

    #[error("Hensel lifting: {0}")]
    Hensel(String),

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
