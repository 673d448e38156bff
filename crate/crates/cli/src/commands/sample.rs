use std::io::Write;
use std::path::PathBuf;

use anyhow::{ensure, Context as _};
use bunchlab_core::ensemble::{sample_beta_with, HistogramSpec, Scenario, DEFAULT_BINS};
use clap::Args;
use serde::Serialize;

use crate::output::{json_line, write_file, Context};
use crate::Format;

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Which angles are drawn uniformly from [0, 2π): general (θ₁, μ₁, θ₂, μ₂),
    /// equal_phase (θ₁, θ₂; β = 2/(1 + cos²(θ₁−θ₂))) or equal_amplitude
    /// (θ, μ₁, μ₂; β = 1/(1 − sin²2θ sin²(μ₁−μ₂)/2)).
    #[arg(long, value_parser = parse_scenario)]
    pub scenario: Scenario,
    /// Number of draws.
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    /// Random seed. The output depends only on (scenario, n, seed, bins).
    #[arg(long, env = "BUNCHLAB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Number of equal-width histogram bins on [1, 2].
    #[arg(long, default_value_t = DEFAULT_BINS)]
    pub bins: usize,
    /// Worker threads. Does not change the output.
    #[arg(long)]
    pub threads: Option<usize>,
}

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    s.parse().map_err(|e: bunchlab_core::Error| e.to_string())
}

#[derive(Serialize)]
struct Sidecar<'a> {
    scenario: Scenario,
    seed: u64,
    n_samples: u64,
    bins: usize,
    mean: f64,
    std: f64,
    version: &'a str,
}

/// Writes the histogram CSV to `--out` (or standard output) and the
/// statistics sidecar next to it with a `.json` extension (or to standard
/// error when the CSV goes to standard output).
pub fn run(args: &SampleArgs, ctx: &Context, stdout: &mut dyn Write) -> anyhow::Result<()> {
    ctx.format(Format::Csv, &[Format::Csv])?;
    ensure!(args.n >= 1, "--n must be at least 1");
    ensure!(
        args.bins >= 2,
        "--bins must be at least 2, got {}",
        args.bins
    );
    let spec = HistogramSpec::uniform(args.bins)?;
    let draw = || sample_beta_with(args.scenario, args.n, args.seed, &spec);
    let run = match args.threads {
        Some(threads) => {
            ensure!(threads >= 1, "--threads must be at least 1");
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .context("cannot start worker threads")?
                .install(draw)?
        }
        None => draw()?,
    };

    let sidecar = Sidecar {
        scenario: args.scenario,
        seed: args.seed,
        n_samples: run.stats.n,
        bins: args.bins,
        mean: run.stats.mean,
        std: run.stats.std,
        version: env!("CARGO_PKG_VERSION"),
    };
    ctx.emit(stdout, |w| run.histogram.write_csv(w))?;
    match &ctx.out {
        Some(path) => write_file(&sidecar_path(path), |w| json_line(w, &sidecar)),
        None => json_line(&mut std::io::stderr().lock(), &sidecar)
            .context("cannot write to standard error"),
    }
}

pub fn sidecar_path(csv: &std::path::Path) -> PathBuf {
    csv.with_extension("json")
}
