//! Error type shared by all modules.

use crate::rat::Rat;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not positive definite (leading principal minor {minor} is not positive)")]
    NotPositiveDefinite { minor: usize },
    #[error("lattice is not integral")]
    NotIntegral,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("glue index {index} out of range for {family} of rank {rank}")]
    IndexOutOfRange {
        family: String,
        rank: usize,
        index: i64,
    },
    #[error("glued lattice is not integral: Q of the glue vector is {q}")]
    NonIntegralResult { q: Rat },
    #[error("malformed glue specification: {0}")]
    MalformedSpec(String),
    #[error("enumeration bound too large for node budget of {budget} nodes")]
    BoundTooLargeForBudget { budget: u64 },
    #[error("embedding search exceeded node budget of {budget} nodes")]
    SearchBudgetExceeded { budget: u64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("rank {0} not supported by this operation")]
    RankUnsupported(usize),
    #[error("counterexample found: {0}")]
    CounterexampleFound(String),
    #[error("invalid JSON lattice: {0}")]
    InvalidJson(String),
}

pub type Result<T> = std::result::Result<T, Error>;
