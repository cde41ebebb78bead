//! Command-line drivers: configuration, manifests, atomic outputs and the
//! individual experiment commands.

pub mod cli;
pub mod commands;
pub mod error;
pub mod manifest;
pub mod output;

pub use cli::{run, run_from, Cli, Command};
pub use commands::Outcome;
pub use error::{CliError, EXIT_CHECK_FAILED, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE};
pub use manifest::{apply_override, ExperimentManifest, VERSION};
