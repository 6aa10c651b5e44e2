use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("out of range: {0}")]
    Range(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error("membership failure: {0}")]
    Membership(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
