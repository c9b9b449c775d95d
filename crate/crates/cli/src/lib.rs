//! Library side of the `surface-modes` binary: argument handling, the four
//! commands and CSV/JSON serialization.

pub mod commands;
pub mod config;
pub mod output;

use std::io::Write;

use thiserror::Error;

pub use commands::{cmd_eigenvalues, cmd_localize, cmd_profile, cmd_verify, CommandOutput};
pub use config::{Cli, Command, CommonArgs, Format, MRange, ProfileArgs, RunConfig};

pub const THREADS_ENV: &str = "SURFACE_MODES_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Failure(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Failure(_) | CliError::Io(_) => 1,
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let threads: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|t| *t > 0)
            .ok_or_else(|| CliError::Config(format!("{THREADS_ENV} must be a positive integer, got '{raw}'")))?;
        builder = builder.num_threads(threads);
    }
    builder.build().map_err(|e| CliError::Config(e.to_string()))
}

/// Runs one command, writes its output, and reports failures as an error
/// after the output is written.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let pool = thread_pool()?;
    let (config, output) = pool.install(|| -> Result<_, CliError> {
        Ok(match &cli.command {
            Command::Eigenvalues(args) => {
                let config = RunConfig::from_args(args)?;
                let out = cmd_eigenvalues(&config)?;
                (config, out)
            }
            Command::Localize(args) => {
                let config = RunConfig::from_args(args)?;
                let out = cmd_localize(&config)?;
                (config, out)
            }
            Command::Verify(args) => {
                let config = RunConfig::from_args(args)?;
                let out = cmd_verify(&config)?;
                (config, out)
            }
            Command::Profile(args) => {
                let mut config = RunConfig::from_args(&args.common)?;
                config.samples = Some(args.samples);
                let out = cmd_profile(&config, args.samples)?;
                (config, out)
            }
        })
    })?;
    let bytes = output.table.render(config.format, &config.to_json())?;
    match &config.out {
        Some(path) => std::fs::write(path, &bytes)?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    if output.failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failure(output.failures.join("\n")))
    }
}
