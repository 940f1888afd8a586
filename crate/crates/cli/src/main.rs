// `!(a < b)` is how NaN gets rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lioup::spectra::SpectraError;
use thiserror::Error;

use crate::config::RunConfig;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Schema(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] SpectraError),
    #[error("cannot write output: {0}")]
    Output(String),
    #[error("{0} acceptance check(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::ChecksFailed(_) => 1,
            CliError::Schema(_) => 2,
            CliError::Numerical(_) | CliError::Output(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "lioup",
    version,
    about = "Hybrid Liouvillian spectra and exceptional points"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; machine parallelism when absent.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Eigenvalues, classes, splittings and degeneracies at one point (JSON).
    Spectrum,
    /// Continuity-tracked branches along a parameter grid (CSV).
    Sweep,
    /// Locate and certify exceptional points in a parameter box (JSON).
    FindEp,
    /// Run the acceptance checks; exit 0 iff all pass.
    Validate,
    /// Density-matrix evolution under the full Liouvillian (CSV).
    Evolve,
}

fn load(path: Option<&Path>) -> Result<RunConfig, CliError> {
    let path = path.ok_or_else(|| CliError::Schema("--config <path> is required".into()))?;
    RunConfig::load(path)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Spectrum => {
            let doc = commands::spectrum(&load(cli.config.as_deref())?)?;
            output::emit_json(out, &doc)
        }
        Command::Sweep => {
            let (table, meta) = commands::sweep_cmd(&load(cli.config.as_deref())?)?;
            output::emit_table(out, &table, &meta)
        }
        Command::FindEp => {
            let doc = commands::find_ep_cmd(&load(cli.config.as_deref())?)?;
            output::emit_json(out, &doc)
        }
        Command::Evolve => {
            let (table, meta) = commands::evolve_cmd(&load(cli.config.as_deref())?)?;
            output::emit_table(out, &table, &meta)
        }
        Command::Validate => {
            let results = commands::validate_all();
            for r in &results {
                println!("{}", r.line());
            }
            if let Some(path) = out {
                output::emit_json(
                    Some(path),
                    &serde_json::to_value(&results).map_err(|e| CliError::Output(e.to_string()))?,
                )?;
            }
            match results.iter().filter(|r| !r.passed).count() {
                0 => Ok(()),
                n => Err(CliError::ChecksFailed(n)),
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(&cli)),
            Err(e) => Err(CliError::Schema(format!("--threads: {e}"))),
        },
        None => run(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lioup: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
