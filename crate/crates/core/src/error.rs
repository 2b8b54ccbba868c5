use thiserror::Error;

use crate::model::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("site {site} out of range for a chain of {n} spins")]
    SiteOutOfRange { site: usize, n: usize },

    #[error("dimension mismatch: expected {expected} spins, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{n} spins exceeds the dense {what} cap of {cap}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },

    #[error("invalid character {0:?} in basis-state string")]
    InvalidBasisChar(char),

    #[error("operator does not factor into single-spin terms (second singular value {sigma2:.3e})")]
    NotFactorizable { sigma2: f64 },

    #[error("no mirror period found for n = {n} within {max_k} steps")]
    NoPeriodFound { n: usize, max_k: usize },

    #[error("no word of length <= {max_len} reaches the target")]
    WordNotFound { max_len: usize },

    #[error("pulse sequence is malformed: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    MalformedSequence(Vec<Violation>),

    #[error("circuit needs {needed} logical qubits but the layout holds {capacity}")]
    CapacityExceeded { needed: usize, capacity: usize },

    #[error("primitive cannot be inverted under global control: {0}")]
    NotReversible(String),

    #[error("oracle function is neither constant nor balanced: {0}")]
    NotConstantOrBalanced(String),
}

pub type Result<T> = std::result::Result<T, Error>;
