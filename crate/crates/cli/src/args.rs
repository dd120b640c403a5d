//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use relaxkit::fitio::{DataDomain, Grid};
use relaxkit::models::ModelKind;
use relaxkit::verify::Suite;

#[derive(Debug, Parser)]
#[command(name = "relaxkit", version, about = "Evaluate, verify and fit non-Debye dielectric relaxation models")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Relaxation law.
    #[arg(long, global = true, value_parser = parse_kind)]
    pub model: Option<ModelKind>,
    /// Width exponent α in (0, 1]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Asymmetry exponent β > 0
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Relaxation time τ (default 1)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    /// Static permittivity ε₀ (default 1).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub eps0: Option<f64>,
    /// High-frequency permittivity ε∞ (default 0).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub epsinf: Option<f64>,
    /// start:stop:points[:log|:lin]
    #[arg(long, global = true, value_parser = parse_grid)]
    pub grid: Option<Grid>,
    /// Write to this file (atomically) instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Output format; `fit` defaults to JSON, everything else to CSV.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Tolerance override for every `verify` check.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed of the noise generator used by `synth`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Restrict β to (0, 1].
    #[arg(long, global = true)]
    pub strict_experimental: bool,
    /// Allow β > 1/α (densities with negative lobes).
    #[arg(long, global = true)]
    pub allow_negative: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainArg {
    Frequency,
    Time,
}

impl From<DomainArg> for DataDomain {
    fn from(d: DomainArg) -> Self {
        match d {
            DomainArg::Frequency => DataDomain::Frequency,
            DomainArg::Time => DataDomain::Time,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Spectral,
    Permittivity,
    Response,
    Relaxation,
    Pdf,
    #[value(name = "kernelM")]
    KernelM,
    #[value(name = "kernelK")]
    KernelK,
    Psi,
    Fig1,
    Fig2,
    Fig3,
    Fig4a,
    Fig4b,
    Fig5a,
    Fig5b,
    Fig6,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate a quantity of the chosen law on a grid.
    Eval {
        #[arg(value_enum)]
        quantity: Quantity,
        /// Rate constant B of the memory kernels.
        #[arg(long, default_value_t = 1.0)]
        rate: f64,
    },
    /// Fit a law to a CSV dataset.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = DomainArg::Frequency)]
        domain: DomainArg,
        /// Fit every applicable law and keep the best by AICc.
        #[arg(long)]
        auto: bool,
    },
    /// Write a synthetic dataset.
    Synth {
        #[arg(long, value_enum, default_value_t = DomainArg::Frequency)]
        domain: DomainArg,
        /// Relative Gaussian noise level.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
    },
    /// Run the self-verification suites.
    Verify {
        #[arg(value_parser = parse_suite, default_value = "all")]
        suite: Suite,
    },
}

fn parse_kind(s: &str) -> Result<ModelKind, String> {
    s.parse().map_err(|e: relaxkit::Error| e.to_string())
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    s.parse().map_err(|e: relaxkit::Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: relaxkit::Error| e.to_string())
}
