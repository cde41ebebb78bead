pub mod minimize;
pub mod simulate;
pub mod spectrum;
pub mod stability;
pub mod verify;

use crate::error::{CliError, Result};

/// Result of a command that ran to completion.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub pass: bool,
    /// Human-readable report for stdout.
    pub report: String,
}

/// Runs `f` on a dedicated pool when a worker count is given.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(CliError::Usage("--workers must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

pub(crate) fn check_schema(found: u32, expected: u32) -> Result<()> {
    if found != expected {
        return Err(CliError::Config(format!("schema_version {found} is not supported (expected {expected})")));
    }
    Ok(())
}
