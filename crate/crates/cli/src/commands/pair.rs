use std::io::Write;
use std::path::PathBuf;

use anyhow::Context as _;
use bunchlab_core::pair::{
    bunching_parameter, outcome_probabilities, unordered_outcomes, PairProbabilities,
};
use bunchlab_core::states::{
    beam_splitter, overlap_sq_two_mode, two_mode_state, TwoModeParams, UnitaryMatrix,
};
use bunchlab_core::PairOutcome;
use clap::Args;
use serde::Serialize;

use crate::input::{parse_unitary, read_source};
use crate::output::{json_line, opt_real, real, text_real, Context};
use crate::Format;

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Amplitude angle θ₁ of the first state.
    #[arg(long, allow_hyphen_values = true)]
    pub theta1: f64,
    /// Phase angle μ₁ of the first state.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mu1: f64,
    /// Amplitude angle θ₂ of the second state.
    #[arg(long, allow_hyphen_values = true)]
    pub theta2: f64,
    /// Phase angle μ₂ of the second state.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mu2: f64,
    /// Read the angles in degrees instead of radians.
    #[arg(long)]
    pub degrees: bool,
    /// 2×2 unitary applied to both states before detection, as JSON rows of
    /// [re, im] pairs. Defaults to the splitter (1/√2)[[1, i], [i, 1]].
    #[arg(long, value_name = "FILE")]
    pub unitary: Option<PathBuf>,
}

#[derive(Serialize)]
struct OutcomeRow {
    m: usize,
    p: usize,
    p_boson: f64,
    p_dist: f64,
    ratio: Option<f64>,
}

#[derive(Serialize)]
struct Report {
    theta1: f64,
    mu1: f64,
    theta2: f64,
    mu2: f64,
    overlap_sq: f64,
    beta: f64,
    unitary: String,
    outcomes: Vec<OutcomeRow>,
}

pub fn run(args: &PairArgs, ctx: &Context, stdout: &mut dyn Write) -> anyhow::Result<()> {
    let format = ctx.format(Format::Text, &[Format::Text, Format::Csv, Format::Json])?;
    let angle = |v: f64, flag: &str| -> anyhow::Result<f64> {
        anyhow::ensure!(v.is_finite(), "--{flag} must be a finite number, got {v}");
        Ok(if args.degrees { v.to_radians() } else { v })
    };
    let p1 = TwoModeParams::new(angle(args.theta1, "theta1")?, angle(args.mu1, "mu1")?)?;
    let p2 = TwoModeParams::new(angle(args.theta2, "theta2")?, angle(args.mu2, "mu2")?)?;

    let (u, unitary_name) = match &args.unitary {
        Some(path) => {
            let (name, text) = read_source(path)?;
            let u = parse_unitary(&name, &text)?;
            anyhow::ensure!(
                u.dim() == 2,
                "{name}: expected a 2x2 unitary, got {0}x{0}",
                u.dim()
            );
            (u, name)
        }
        None => (beam_splitter(), "beam_splitter".to_string()),
    };
    let report = build(p1, p2, &u, unitary_name)?;

    ctx.emit(stdout, |w| match format {
        Format::Json => json_line(w, &report),
        Format::Csv => write_table(w, &report.outcomes),
        Format::Text => {
            writeln!(w, "overlap_sq {}", text_real(report.overlap_sq))?;
            writeln!(w, "beta       {}", text_real(report.beta))?;
            writeln!(w, "unitary    {}", report.unitary)?;
            writeln!(w)?;
            write_table(w, &report.outcomes)
        }
    })
}

fn build(
    p1: TwoModeParams,
    p2: TwoModeParams,
    u: &UnitaryMatrix,
    unitary: String,
) -> anyhow::Result<Report> {
    let s1 = u.apply(&two_mode_state(p1))?;
    let s2 = u.apply(&two_mode_state(p2))?;
    let overlap_sq = overlap_sq_two_mode(p1, p2);
    let outcomes = unordered_outcomes(2)
        .map(|o: PairOutcome| {
            let PairProbabilities {
                p_boson,
                p_dist,
                ratio,
            } = outcome_probabilities(&s1, &s2, o)?;
            Ok(OutcomeRow {
                m: o.m,
                p: o.p,
                p_boson,
                p_dist,
                ratio,
            })
        })
        .collect::<bunchlab_core::Result<Vec<_>>>()
        .context("outcome probabilities")?;
    Ok(Report {
        theta1: p1.theta,
        mu1: p1.mu,
        theta2: p2.theta,
        mu2: p2.mu,
        overlap_sq,
        beta: bunching_parameter(&s1, &s2)?,
        unitary,
        outcomes,
    })
}

fn write_table(w: &mut dyn Write, rows: &[OutcomeRow]) -> std::io::Result<()> {
    writeln!(w, "m,p,p_boson,p_dist,ratio")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.m,
            r.p,
            real(r.p_boson),
            real(r.p_dist),
            opt_real(r.ratio)
        )?;
    }
    Ok(())
}
