use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::{self, Outcome};
use crate::error::{Result, EXIT_CHECK_FAILED, EXIT_OK};
use crate::manifest::{apply_override, load_config, ExperimentManifest, VERSION};

#[derive(Debug, Parser)]
#[command(name = "szego", version, about = "Experiments for the cubic Szego equation on the line")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON configuration file; built-in defaults when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized corpora and initial data.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for sweeps and corpus checks.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Config override `key.path=value`; repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE", global = true)]
    pub overrides: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Integrate the flow and log conserved quantities.
    Simulate,
    /// Run every identity check and print a pass/fail table.
    Verify,
    /// Distance to the soliton cylinder along perturbed trajectories.
    Stability,
    /// Minimize the momentum at fixed mass and energy.
    Minimize,
    /// Spectrum of the operator D - T/c and leading Takagi values.
    Spectrum,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Verify => "verify",
            Command::Stability => "stability",
            Command::Minimize => "minimize",
            Command::Spectrum => "spectrum",
        }
    }
}

pub fn manifest(cli: &Cli) -> Result<ExperimentManifest> {
    let path = cli.config.as_deref();
    let mut config = match cli.command {
        Command::Simulate => load_config(path, &commands::simulate::default_config())?,
        Command::Verify => load_config(path, &commands::verify::VerifyConfig::default())?,
        Command::Stability => load_config(path, &commands::stability::StabilityConfig::default())?,
        Command::Minimize => load_config(path, &commands::minimize::MinimizeConfig::default())?,
        Command::Spectrum => load_config(path, &commands::spectrum::SpectrumConfig::default())?,
    };
    for o in &cli.overrides {
        apply_override(&mut config, o)?;
    }
    Ok(ExperimentManifest {
        command: cli.command.name().into(),
        config_path: cli.config.clone(),
        out_dir: cli.out.clone().unwrap_or_else(|| PathBuf::from("out").join(cli.command.name())),
        seed: cli.seed.unwrap_or(0),
        version: VERSION.into(),
        config,
    })
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let m = manifest(cli)?;
    match cli.command {
        Command::Simulate => commands::simulate::run(&m, cli.seed.is_some()),
        Command::Verify => commands::with_workers(cli.workers, || commands::verify::run(&m))?,
        Command::Stability => commands::stability::run(&m, cli.workers),
        Command::Minimize => commands::minimize::run(&m),
        Command::Spectrum => commands::spectrum::run(&m),
    }
}

/// Runs a parsed command line and returns the process exit code. Wall time goes
/// to stderr only so data files stay reproducible.
pub fn run(cli: &Cli) -> i32 {
    let start = std::time::Instant::now();
    let code = match execute(cli) {
        Ok(outcome) => {
            print!("{}", outcome.report);
            if outcome.pass {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    eprintln!("{} finished in {:.2?}", cli.command.name(), start.elapsed());
    code
}

/// Parses `args` (including the program name) and runs; usage errors map to exit 2.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { crate::error::EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
