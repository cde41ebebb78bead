use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HardyError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch: expected L={expected_l}, N={expected_n}; got L={got_l}, N={got_n}")]
    GridMismatch {
        expected_l: f64,
        expected_n: usize,
        got_l: f64,
        got_n: usize,
    },
    #[error("pole {0} is not in the open lower half-plane")]
    PoleNotInLowerHalfPlane(String),
    #[error("invalid rational symbol: {0}")]
    InvalidSymbol(String),
    #[error("non-finite amplitude at mode {0}")]
    NonFinite(usize),
    #[error("unknown norm kind `{0}`")]
    UnknownNorm(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, HardyError>;
