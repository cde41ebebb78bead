use hardy_core::HardyError;
use szego_dynamics::DynamicsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VariationalError {
    #[error(transparent)]
    Hardy(#[from] HardyError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("invalid cylinder: {0}")]
    InvalidCylinder(String),
    #[error("infeasible constraint targets: {0}")]
    Infeasible(String),
    #[error("field is zero")]
    ZeroField,
}

pub type Result<T> = std::result::Result<T, VariationalError>;
