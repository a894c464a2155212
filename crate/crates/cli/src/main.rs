mod config;
mod count;
mod output;
mod scan;
mod verify;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command, RunConfig};
use dwork_core::finite_field::{build_field_with, FieldOptions};
use dwork_core::{Error, FieldContext};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or an over-budget request: exit 2.
    Config(String),
    /// A rounding gate that no retry could clear: exit 3.
    Precision(String),
    /// Mismatches, failed checks or internal inconsistencies: exit 1.
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Precision(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) | CliError::Precision(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::RoundingGate { .. } => CliError::Precision(e.to_string()),
            Error::Inconsistent(_) => CliError::Failed(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<config::ConfigError> for CliError {
    fn from(e: config::ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

pub fn build_fields(cfg: &RunConfig) -> Result<Vec<FieldContext>, CliError> {
    let opts = FieldOptions { bound: None, cache_dir: cfg.cache_dir.clone() };
    cfg.fields
        .iter()
        .map(|f| build_field_with(f.p, f.e, &opts).map_err(CliError::from))
        .collect()
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.command {
        Command::Count(a) => RunConfig::for_count(a)?,
        Command::Verify(a) => RunConfig::for_verify(a)?,
        Command::Scan(a) => RunConfig::for_scan(a)?,
    };
    if let Some(jobs) = cfg.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    match cli.command {
        Command::Count(_) => count::run(&cfg),
        Command::Verify(_) => verify::run(&cfg),
        Command::Scan(_) => scan::run(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
