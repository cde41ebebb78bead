use thiserror::Error;

use hardy_core::HardyError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error(transparent)]
    Hardy(#[from] HardyError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("blow-up at t={t}: max|u|={max_modulus:e}")]
    BlowUp { t: f64, max_modulus: f64 },
    #[error("blow-up guard: dt*max|u0|^2 = {product:.3e} exceeds {limit} (dt={dt:e}, max|u0|={max_modulus:.3e})")]
    Unstable { dt: f64, max_modulus: f64, product: f64, limit: f64 },
    #[error("monitor `{name}` failed at t={t}: {msg}")]
    Monitor { name: String, t: f64, msg: String },
    #[error("io error on {path}: {msg}")]
    Io { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, DynamicsError>;
