use hardy_core::HardyError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HankelError {
    #[error(transparent)]
    Hardy(#[from] HardyError),
    #[error("invalid operator parameters: {0}")]
    Parameters(String),
    #[error("field under-resolved: {0}")]
    UnderResolved(String),
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    #[error("speed c must be nonzero")]
    ZeroSpeed,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, HankelError>;
