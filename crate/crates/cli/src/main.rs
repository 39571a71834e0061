mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::config::{Cli, RunConfig, THREADS_ENV};
use crate::error::{CliError, Result};

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{THREADS_ENV} = {value:?} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot size the worker pool: {e}")))
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    let cfg = RunConfig::resolve(cli.command, cli.opts)?;
    let (table, failure) = commands::run(&cfg);
    output::emit(&cfg, &table?)?;
    failure.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
