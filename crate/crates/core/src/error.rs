use thiserror::Error;

use crate::dsl::{EvalError, ParseError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("unsupported dimension {0}: expected a power of two")]
    UnsupportedDimension(usize),
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("sequence is not unitary: gradient crush at event {0}")]
    NonUnitarySequence(usize),
    #[error("corrupted spin state: {0}")]
    CorruptedState(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
