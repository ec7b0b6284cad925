use thiserror::Error;

/// Which configurable budget ran out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Budget {
    Subgroups,
    SolverNodes,
}

impl std::fmt::Display for Budget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Budget::Subgroups => f.write_str("subgroup count"),
            Budget::SolverNodes => f.write_str("solver node"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group specification: {0}")]
    InvalidSpec(String),

    #[error("group order {order} exceeds the order limit {limit}")]
    OrderLimitExceeded { order: usize, limit: usize },

    #[error("{what} budget of {limit} exceeded")]
    BudgetExceeded { what: Budget, limit: u64 },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("inclusion-exclusion over {0} sets exceeds the limit of 20")]
    TooManySets(usize),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("cover universe of {0} points exceeds the mask capacity")]
    UniverseTooLarge(usize),
}

impl Error {
    /// True for errors caused by configured limits rather than bad input.
    pub fn is_limit(&self) -> bool {
        matches!(self, Error::OrderLimitExceeded { .. } | Error::BudgetExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
