use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("equation has no nonzero coefficients")]
    EmptyEquation,
    #[error("coefficients sum to {0}, an invariant equation needs 0")]
    NotInvariant(i128),
    #[error("generator {0} is not positive")]
    NonPositiveGenerator(i64),
    #[error("{what} supports at most {limit} entries, got {got}")]
    TooLarge {
        what: &'static str,
        limit: usize,
        got: usize,
    },
    #[error("assignment has {got} values, equation has {expected} variables")]
    ArityMismatch { expected: usize, got: usize },
    #[error("assignment does not satisfy the equation")]
    NotASolution,
    #[error("search budget of {budget} nodes exhausted")]
    BudgetExhausted { budget: u64 },
    #[error("exact arithmetic guard exceeded: {0}")]
    Overflow(String),
    #[error("invalid ground set: {0}")]
    InvalidSet(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("equation is not primitive")]
    NotPrimitive,
    #[error("digit set is not certified: {0}")]
    Uncertified(String),
    #[error("no-carry condition fails: {s} * {max_digit} >= base {base}")]
    Carry { s: u64, max_digit: u64, base: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
