//! Command-line front end for `bunchlab`.
//!
//! Every subcommand is a pure function of its flags, input files and seed,
//! so repeated runs produce byte-identical output.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod input;
mod output;

pub use commands::density::DensityArgs;
pub use commands::gaussian::{GaussianArgs, ScanAxis};
pub use commands::multi::MultiArgs;
pub use commands::pair::PairArgs;
pub use commands::sample::SampleArgs;

/// Bunching of identical bosons from initial-state overlaps.
#[derive(Debug, Parser)]
#[command(name = "bunchlab", version, propagate_version = true)]
pub struct Cli {
    /// Write the primary output here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Output format. Reports default to text; tables default to csv.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Two two-mode states cos θ e^{iμ}|u⟩ + sin θ e^{−iμ}|d⟩ sent through a
    /// two-mode unitary: overlap, β = 2/(1+|I|²) and per-outcome probabilities.
    Pair(PairArgs),
    /// Counter-propagating Gaussian packets at ±x₀ with wavenumbers ∓k:
    /// β = 2/(1 + exp(−4x₀²/σ² − k²σ²)), optionally scanned over x or t.
    Gaussian(GaussianArgs),
    /// Q particles from a state file: N = per(G), β = Q!/N.
    Multi(MultiArgs),
    /// Monte Carlo histogram of β over random two-mode states.
    Sample(SampleArgs),
    /// Analytic density of β when both states share a phase,
    /// ρ(β) = (4/π)/(β²√(1 − (4/β − 3)²)), with its endpoint asymptotics.
    Density(DensityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// Parses `args` (including the program name) and runs the subcommand,
/// writing to `stdout` unless `--out` is given.
pub fn run_from<I, T>(args: I, stdout: &mut dyn Write) -> anyhow::Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    run(&cli, stdout)
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> anyhow::Result<()> {
    let ctx = output::Context {
        out: cli.out.clone(),
        format: cli.format,
    };
    match &cli.command {
        Command::Pair(args) => commands::pair::run(args, &ctx, stdout),
        Command::Gaussian(args) => commands::gaussian::run(args, &ctx, stdout),
        Command::Multi(args) => commands::multi::run(args, &ctx, stdout),
        Command::Sample(args) => commands::sample::run(args, &ctx, stdout),
        Command::Density(args) => commands::density::run(args, &ctx, stdout),
    }
}

/// Collapses an error chain into one line.
pub fn error_line(err: &anyhow::Error) -> String {
    let line = format!("{err:#}");
    line.split_whitespace().collect::<Vec<_>>().join(" ")
}
