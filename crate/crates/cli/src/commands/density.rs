use std::io::Write;

use anyhow::ensure;
use bunchlab_core::ensemble::{density_edge_approx, density_equal_phase, write_density_csv, Edge};
use clap::{ArgGroup, Args};
use serde::Serialize;

use crate::output::{json_line, Context};
use crate::Format;

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("grid").required(true).args(["from", "beta"])))]
pub struct DensityArgs {
    /// First grid point, strictly inside (1, 2).
    #[arg(long, requires = "to", allow_hyphen_values = true)]
    pub from: Option<f64>,
    /// Last grid point, strictly inside (1, 2).
    #[arg(long, requires = "from", allow_hyphen_values = true)]
    pub to: Option<f64>,
    /// Number of evenly spaced grid points from --from to --to.
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Explicit grid points; may be repeated or comma-separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["from", "to"])]
    pub beta: Vec<f64>,
}

#[derive(Serialize)]
struct Row {
    beta: f64,
    rho: f64,
    rho_near1: f64,
    rho_near2: f64,
}

/// Columns: the exact density, `(1/π)√(2/(β−1))` near 1 and
/// `1/(π√(2(2−β)))` near 2.
pub fn run(args: &DensityArgs, ctx: &Context, stdout: &mut dyn Write) -> anyhow::Result<()> {
    let format = ctx.format(Format::Csv, &[Format::Csv, Format::Json])?;
    let grid = grid(args)?;
    match format {
        Format::Json => {
            let rows = grid
                .iter()
                .map(|&beta| {
                    Ok(Row {
                        beta,
                        rho: density_equal_phase(beta)?,
                        rho_near1: density_edge_approx(beta, Edge::NearOne)?,
                        rho_near2: density_edge_approx(beta, Edge::NearTwo)?,
                    })
                })
                .collect::<bunchlab_core::Result<Vec<_>>>()?;
            ctx.emit(stdout, |w| json_line(w, &rows))
        }
        _ => {
            // validate before touching --out
            let mut buf = Vec::new();
            write_density_csv(&grid, &mut buf)?;
            ctx.emit(stdout, |w| w.write_all(&buf))
        }
    }
}

fn grid(args: &DensityArgs) -> anyhow::Result<Vec<f64>> {
    if !args.beta.is_empty() {
        return Ok(args.beta.clone());
    }
    let (from, to) = (args.from.unwrap_or_default(), args.to.unwrap_or_default());
    ensure!(args.points >= 1, "--points must be at least 1");
    if args.points == 1 {
        return Ok(vec![from]);
    }
    Ok((0..args.points)
        .map(|i| {
            if i + 1 == args.points {
                to
            } else {
                from + (to - from) * i as f64 / (args.points - 1) as f64
            }
        })
        .collect())
}
