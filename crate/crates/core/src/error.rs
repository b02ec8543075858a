use thiserror::Error;

/// Errors raised by profile construction, ordering evaluation and proof-chain builders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("profile must contain at least one individual")]
    EmptyProfile,
    #[error("replication factor must be at least 1")]
    ZeroReplication,
    #[error("not a permutation of 0..{n}: {reason}")]
    NotAPermutation { n: usize, reason: String },
    #[error("ratio must lie strictly between 0 and 1, got {0}")]
    RatioOutOfRange(String),
    #[error("{value} is outside the domain of g ({g})")]
    Domain { g: String, value: String },
    #[error("no population weight defined for n = {0}")]
    MissingLambda(u64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("ordering is not defined by a value function: {0}")]
    NotValueBased(&'static str),
    #[error("profile with {0} entries is too large to materialise")]
    TooLarge(u64),
    #[error("proposition guard not met: {0}")]
    Guard(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }

    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
