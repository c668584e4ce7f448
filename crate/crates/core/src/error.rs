use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),

    #[error("the algebra has no unit, but the operation requires one")]
    MissingUnit,

    #[error("operator is not of first order: {witness}")]
    NotFirstOrder { witness: String },

    #[error("hypothesis `{condition}` is violated: {witness}")]
    HypothesisViolation { condition: String, witness: String },

    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    #[error("malformed input: {0}")]
    MalformedInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn hypothesis(condition: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::HypothesisViolation {
            condition: condition.into(),
            witness: witness.into(),
        }
    }
}
