//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by the combinatorial and algebraic operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("simple reflection s_{index} acts outside the support of W_{n}")]
    IndexOutOfSupport { index: usize, n: usize },

    #[error("{0} is not a minimum-length coset representative for the given parabolic set")]
    NotCosetRep(String),

    #[error("{0} is not a {1}-Grassmannian element")]
    NotGrassmannian(String, usize),

    #[error("{0}")]
    DoesNotFit(String),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("divided difference {op}_{index} left a non-divisible remainder")]
    NonDivisible { op: &'static str, index: usize },

    #[error("variable z_{index} is not allowed here (only z_1..z_{max} may occur)")]
    UnsupportedVariable { index: usize, max: usize },

    #[error("degree {0} is not allowed here")]
    InvalidDegree(i64),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("{0} is not a pseudo k-Grassmannian element for the given parabolic set")]
    NotPseudoGrassmannian(String),

    #[error("invalid parabolic set: {0}")]
    InvalidParabolic(String),

    #[error("invalid signed permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("cache error: {0}")]
    Cache(String),
}

/// Shorthand result type.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}
