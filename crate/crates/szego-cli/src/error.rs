use hankel_lab::HankelError;
use hardy_core::HardyError;
use szego_dynamics::DynamicsError;
use szego_variational::VariationalError;
use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("io error on {path}: {msg}")]
    Io { path: String, msg: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, e: impl std::fmt::Display) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), msg: e.to_string() }
    }
}

impl From<HardyError> for CliError {
    fn from(e: HardyError) -> Self {
        match e {
            HardyError::NonFinite(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::Hardy(h) => h.into(),
            DynamicsError::Config(_) => CliError::Config(e.to_string()),
            DynamicsError::Io { path, msg } => CliError::Io { path, msg },
            DynamicsError::BlowUp { .. } | DynamicsError::Unstable { .. } | DynamicsError::Monitor { .. } => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

impl From<HankelError> for CliError {
    fn from(e: HankelError) -> Self {
        match e {
            HankelError::Hardy(h) => h.into(),
            HankelError::Decomposition(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<VariationalError> for CliError {
    fn from(e: VariationalError) -> Self {
        match e {
            VariationalError::Hardy(h) => h.into(),
            VariationalError::Dynamics(d) => d.into(),
            _ => CliError::Config(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
