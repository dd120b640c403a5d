//! `relaxkit` command-line front end.
//!
//! Exit codes: 0 success, 2 invalid flags or input, 3 numeric failure,
//! 4 fit did not converge, 5 verification failure.

mod args;
mod commands;
mod output;

use clap::Parser;
use relaxkit::Error;

use args::{Cli, Command};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0} verification check(s) failed")]
    VerifyFailed(usize),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::VerifyFailed(_) => 5,
            CliError::Core(e) => match e {
                Error::Domain(_) | Error::Parse { .. } | Error::EmptyDataset | Error::Io(_) => 2,
                Error::NonConvergence(_) => 4,
                _ => 3,
            },
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("RELAXKIT_THREADS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("RELAXKIT_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure {n} threads: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let g = &cli.global;
    match cli.command {
        Command::Eval { quantity, rate } => commands::eval(g, quantity, rate),
        Command::Fit { input, domain, auto } => commands::fit_cmd(g, &input, domain.into(), auto),
        Command::Synth { domain, noise } => commands::synth(g, domain.into(), noise),
        Command::Verify { suite } => commands::verify(g, suite),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
