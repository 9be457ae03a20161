use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A pmf or channel failed validation; `row` names the offending row.
    #[error("invalid pmf at {row}: {reason}")]
    InvalidPmf { row: String, reason: String },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("cardinality bound exceeded: {what} has {size} symbols, at most {cap} allowed")]
    Cardinality { what: &'static str, size: usize, cap: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("resource limit: {0}")]
    ResourceLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
