use std::fmt;

use crate::model::Kind;

/// Errors raised by constructors, solvers and the oracle.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("interval [{first},{last}] is out of range for a path of {m} goods")]
    InvalidInterval { first: usize, last: usize, m: usize },
    #[error("unknown agent {0}")]
    UnknownAgent(String),
    #[error("invalid ordering: {0}")]
    InvalidOrder(String),
    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),
    #[error("alpha {0} is outside [0, 1]")]
    InvalidAlpha(String),
    #[error("expected a {expected} instance, got {found}")]
    KindMismatch { expected: Kind, found: Kind },
    #[error("valuations are not binary: {0}")]
    NotBinary(NonBinary),
    #[error("agent {agent} approves neither a prefix nor a suffix of the path")]
    NotExtremal { agent: String },
    #[error("oracle budget exceeded: {required} states needed, limit is {limit}")]
    BudgetExceeded { required: u128, limit: u64 },
    #[error("LNES structure violation: {0}")]
    StructureViolation(String),
    #[error("assignment does not satisfy the LNES formula")]
    NotSatisfying,
    #[error("allocation is not non-wasteful")]
    NotNonWasteful,
    #[error("allocation does not fit the gadget layout: {0}")]
    MalformedLayout(String),
}

/// Location of the first non-binary value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonBinary {
    Value { agent: String, good: usize, value: i64 },
    Table { agent: String },
}

impl fmt::Display for NonBinary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonBinary::Value { agent, good, value } => {
                write!(f, "agent {agent} values good {good} at {value}")
            }
            NonBinary::Table { agent } => write!(f, "agent {agent} has an interval table"),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
