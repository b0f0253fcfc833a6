//! `fobie`: spectrum tables, verification, scattering solves and
//! wavenumber sweeps for the unit sphere.
//!
//! Exit codes: 0 success, 1 failed check or computation, 2 usage error.

mod commands;
mod config;
mod error;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use config::{Cli, RunConfig};
use error::CliError;

/// Sizes the worker pool from `FOBIE_THREADS`, if set.
fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("FOBIE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("FOBIE_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Failure(format!("cannot size thread pool: {e}")))
}

fn run(cli: Cli) -> Result<bool, CliError> {
    init_threads()?;
    let cfg = RunConfig::merge(cli.flags)?;
    let outcome = commands::run(cli.command, &cfg)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, &outcome.document)
            .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display())))?,
        None => std::io::stdout()
            .write_all(outcome.document.as_bytes())
            .map_err(|e| CliError::Failure(format!("cannot write to stdout: {e}")))?,
    }
    eprintln!("{}", outcome.summary);
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help and version requests print normally and exit 0.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("fobie: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
