use std::io::Write;
use std::path::PathBuf;

use anyhow::ensure;
use bunchlab_core::multi::{beta_from_gram, gram_matrix, permanent_naive, NAIVE_MAX};
use clap::Args;
use serde::Serialize;

use crate::input::{parse_states, read_source};
use crate::output::{json_line, real, text_real, Context};
use crate::Format;

#[derive(Debug, Args)]
pub struct MultiArgs {
    /// JSON array of states, each an array of [re, im] amplitude pairs of
    /// equal length. Use - for standard input.
    pub states: PathBuf,
    /// Also evaluate per(G) by direct permutation sum (Q ≤ 10) and report
    /// the relative discrepancy from Ryser's formula.
    #[arg(long)]
    pub oracle: bool,
    /// Rescale each state to unit norm instead of rejecting it.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Serialize)]
struct Report {
    q: usize,
    dim: usize,
    n: f64,
    q_factorial: String,
    beta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_n: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_discrepancy: Option<f64>,
}

pub fn run(args: &MultiArgs, ctx: &Context, stdout: &mut dyn Write) -> anyhow::Result<()> {
    let format = ctx.format(Format::Text, &[Format::Text, Format::Csv, Format::Json])?;
    let (name, text) = read_source(&args.states)?;
    let states = parse_states(&name, &text, args.normalize)?;
    let gram = gram_matrix(&states).map_err(|e| anyhow::anyhow!("{name}: {e}"))?;
    let res = beta_from_gram(&gram)?;

    let (oracle_n, oracle_discrepancy) = if args.oracle {
        ensure!(
            res.q <= NAIVE_MAX,
            "--oracle supports at most {NAIVE_MAX} states, got {}",
            res.q
        );
        let naive = permanent_naive(gram.matrix())?;
        let ryser = bunchlab_core::Complex64::new(res.n_const, res.n_imag);
        (Some(naive.re), Some((naive - ryser).norm() / naive.norm()))
    } else {
        (None, None)
    };
    let report = Report {
        q: res.q,
        dim: states[0].dim(),
        n: res.n_const,
        q_factorial: res.q_factorial.to_string(),
        beta: res.beta,
        oracle_n,
        oracle_discrepancy,
    };

    ctx.emit(stdout, |w| match format {
        Format::Json => json_line(w, &report),
        Format::Csv => {
            write!(w, "q,dim,n,q_factorial,beta")?;
            if report.oracle_n.is_some() {
                write!(w, ",oracle_n,oracle_discrepancy")?;
            }
            writeln!(w)?;
            write!(
                w,
                "{},{},{},{},{}",
                report.q,
                report.dim,
                real(report.n),
                report.q_factorial,
                real(report.beta)
            )?;
            if let (Some(n), Some(d)) = (report.oracle_n, report.oracle_discrepancy) {
                write!(w, ",{},{}", real(n), real(d))?;
            }
            writeln!(w)
        }
        Format::Text => {
            writeln!(w, "q           {}", report.q)?;
            writeln!(w, "n           {}", text_real(report.n))?;
            writeln!(w, "q_factorial {}", report.q_factorial)?;
            writeln!(w, "beta        {}", text_real(report.beta))?;
            if let (Some(n), Some(d)) = (report.oracle_n, report.oracle_discrepancy) {
                writeln!(w, "oracle_n    {}", text_real(n))?;
                writeln!(w, "discrepancy {d:e}")?;
            }
            Ok(())
        }
    })
}
