use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _};
use bunchlab_core::ensemble::fmt_real;

use crate::Format;

pub struct Context {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Context {
    /// The requested format, or `default`; fails for formats not in `allowed`.
    pub fn format(&self, default: Format, allowed: &[Format]) -> anyhow::Result<Format> {
        let f = self.format.unwrap_or(default);
        if !allowed.contains(&f) {
            bail!(
                "--format {} is not available here (use {})",
                name(f),
                allowed
                    .iter()
                    .map(|&a| name(a))
                    .collect::<Vec<_>>()
                    .join(" or ")
            );
        }
        Ok(f)
    }

    /// Runs `write` against `--out` (created or truncated) or `stdout`.
    pub fn emit<F>(&self, stdout: &mut dyn Write, write: F) -> anyhow::Result<()>
    where
        F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
    {
        match &self.out {
            Some(path) => write_file(path, write),
            None => {
                write(stdout).context("cannot write to standard output")?;
                stdout.flush().context("cannot write to standard output")
            }
        }
    }
}

pub fn write_file<F>(path: &Path, write: F) -> anyhow::Result<()>
where
    F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
{
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut w = BufWriter::new(file);
    write(&mut w)
        .and_then(|()| w.flush())
        .with_context(|| format!("cannot write {}", path.display()))
}

fn name(f: Format) -> &'static str {
    match f {
        Format::Text => "text",
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

pub fn real(x: f64) -> String {
    fmt_real(x)
}

/// Shortest round-trip form, in scientific notation outside `[1e-4, 1e6)`.
pub fn text_real(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e6).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// A ratio cell: empty where undefined.
pub fn opt_real(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_default()
}

pub fn json_line<T: serde::Serialize>(w: &mut dyn Write, value: &T) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)
}
