use std::io::Write;

use anyhow::{bail, ensure};
use bunchlab_core::gaussian::{
    beta_gaussian, beta_optimal_width, counter_propagating, crossing_time, overlap_gaussian,
    spatial_densities, GaussianPacket,
};
use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::output::{json_line, opt_real, real, text_real, Context};
use crate::Format;

#[derive(Debug, Args)]
pub struct GaussianArgs {
    /// Half the initial separation: packets start at +x₀ and −x₀.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: f64,
    /// Wavenumber magnitude: the packet at +x₀ carries −k, the one at −x₀ carries +k.
    #[arg(long, allow_hyphen_values = true)]
    pub k: f64,
    /// Initial width σ, with |ψ(x,0)|² ∝ exp(−2(x−x₀)²/σ²).
    #[arg(
        long,
        required_unless_present = "optimal_width",
        conflicts_with = "optimal_width",
        allow_hyphen_values = true
    )]
    pub sigma: Option<f64>,
    /// Use the width σ = √(2x₀/k) that minimizes β, giving β = 2/(1 + e^{−4kx₀}).
    #[arg(long)]
    pub optimal_width: bool,
    /// ħ/m, which sets the group velocity (ħ/m)k and the spreading rate.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub hbar_over_m: f64,
    /// Emit p_B(x,t) = 2|ψ₁ψ₂|²/(1+I²), p_D(x,t) = |ψ₁ψ₂|² and their ratio
    /// along x (at --time) or along t (at --position).
    #[arg(long, value_enum)]
    pub scan: Option<ScanAxis>,
    /// Time for an x scan.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub time: f64,
    /// Position for a t scan.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub position: f64,
    /// Start of the scan range. Defaults to 4 widths beyond the outer packet
    /// for x, and 0 for t.
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<f64>,
    /// End of the scan range. Defaults to 4 widths beyond the outer packet
    /// for x, and twice the crossing time x₀/((ħ/m)k) for t.
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<f64>,
    /// Number of scan points.
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanAxis {
    X,
    T,
}

#[derive(Serialize)]
struct Report {
    x0: f64,
    k: f64,
    sigma: f64,
    hbar_over_m: f64,
    optimal_width: bool,
    overlap: f64,
    beta: f64,
    crossing_time: Option<f64>,
}

pub fn run(args: &GaussianArgs, ctx: &Context, stdout: &mut dyn Write) -> anyhow::Result<()> {
    for (flag, v) in [
        ("x0", args.x0),
        ("k", args.k),
        ("hbar-over-m", args.hbar_over_m),
    ] {
        ensure!(v.is_finite(), "--{flag} must be a finite number, got {v}");
    }
    ensure!(
        args.hbar_over_m > 0.0,
        "--hbar-over-m must be positive, got {}",
        args.hbar_over_m
    );
    let (sigma, beta) = match args.sigma {
        Some(sigma) => {
            ensure!(
                sigma.is_finite() && sigma > 0.0,
                "--sigma must be positive, got {sigma}"
            );
            (sigma, beta_gaussian(args.x0, args.k, sigma)?)
        }
        None => {
            ensure!(
                args.x0 > 0.0 && args.k > 0.0,
                "--optimal-width needs --x0 and --k both positive"
            );
            let opt = beta_optimal_width(args.x0, args.k)?;
            (opt.sigma, opt.beta)
        }
    };
    let (g1, g2) = counter_propagating(args.x0, args.k, sigma)?;
    let g1 = GaussianPacket::with_hbar_over_m(g1.center, g1.wavenumber, sigma, args.hbar_over_m)?;
    let g2 = GaussianPacket::with_hbar_over_m(g2.center, g2.wavenumber, sigma, args.hbar_over_m)?;
    let report = Report {
        x0: args.x0,
        k: args.k,
        sigma,
        hbar_over_m: args.hbar_over_m,
        optimal_width: args.optimal_width,
        overlap: overlap_gaussian(&g1, &g2)?,
        beta,
        crossing_time: crossing_time(args.x0, args.k, args.hbar_over_m).ok(),
    };

    if let Some(axis) = args.scan {
        ctx.format(Format::Csv, &[Format::Csv])?;
        let rows = scan(args, axis, &g1, &g2, report.crossing_time)?;
        return ctx.emit(stdout, |w| {
            writeln!(w, "x,t,p_boson,p_dist,ratio")?;
            for (x, t, d) in &rows {
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    real(*x),
                    real(*t),
                    real(d.p_boson_density),
                    real(d.p_dist_density),
                    opt_real(d.ratio())
                )?;
            }
            Ok(())
        });
    }

    let format = ctx.format(Format::Text, &[Format::Text, Format::Csv, Format::Json])?;
    ctx.emit(stdout, |w| match format {
        Format::Json => json_line(w, &report),
        Format::Csv => {
            writeln!(w, "x0,k,sigma,hbar_over_m,overlap,beta")?;
            writeln!(
                w,
                "{},{},{},{},{},{}",
                real(report.x0),
                real(report.k),
                real(report.sigma),
                real(report.hbar_over_m),
                real(report.overlap),
                real(report.beta)
            )
        }
        Format::Text => {
            writeln!(w, "sigma   {}", text_real(report.sigma))?;
            writeln!(w, "overlap {}", text_real(report.overlap))?;
            writeln!(w, "beta    {}", text_real(report.beta))?;
            if let Some(t0) = report.crossing_time {
                writeln!(w, "t0      {}", text_real(t0))?;
            }
            Ok(())
        }
    })
}

type ScanRow = (f64, f64, bunchlab_core::SpatialDensityPair);

fn scan(
    args: &GaussianArgs,
    axis: ScanAxis,
    g1: &GaussianPacket,
    g2: &GaussianPacket,
    t0: Option<f64>,
) -> anyhow::Result<Vec<ScanRow>> {
    ensure!(
        args.points >= 2,
        "--points must be at least 2, got {}",
        args.points
    );
    let (lo, hi) = match axis {
        ScanAxis::X => {
            let t = args.time;
            let w = g1.width_at(t);
            let left = g1.center_at(t).min(g2.center_at(t)) - 4.0 * w;
            let right = g1.center_at(t).max(g2.center_at(t)) + 4.0 * w;
            (args.from.unwrap_or(left), args.to.unwrap_or(right))
        }
        ScanAxis::T => {
            let end = match (args.to, t0) {
                (Some(to), _) => to,
                (None, Some(t0)) if t0 > 0.0 => 2.0 * t0,
                _ => bail!("--to is required for a t scan when the packets do not move apart"),
            };
            (args.from.unwrap_or(0.0), end)
        }
    };
    ensure!(
        lo.is_finite() && hi.is_finite() && lo < hi,
        "scan range must satisfy from < to"
    );
    (0..args.points)
        .map(|i| {
            let s = lo + (hi - lo) * i as f64 / (args.points - 1) as f64;
            let (x, t) = match axis {
                ScanAxis::X => (s, args.time),
                ScanAxis::T => (args.position, s),
            };
            Ok((x, t, spatial_densities(g1, g2, x, t)?))
        })
        .collect()
}
