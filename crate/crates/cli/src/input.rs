//! JSON inputs: state lists and unitary matrices, both written as nested
//! arrays of `[re, im]` pairs.

use std::fs;
use std::io::Read;
use std::path::Path;

use anyhow::{anyhow, bail, Context};
use bunchlab_core::states::{PureState, UnitaryMatrix, NORM_TOLERANCE};
use bunchlab_core::Complex64;

type Amplitudes = Vec<[f64; 2]>;

pub fn read_source(path: &Path) -> anyhow::Result<(String, String)> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .context("cannot read standard input")?;
        return Ok(("<stdin>".into(), text));
    }
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok((path.display().to_string(), text))
}

/// 1-based line of each top-level array element.
fn element_lines(text: &str) -> Vec<usize> {
    let mut lines = Vec::new();
    let mut depth = 0usize;
    let mut line = 1;
    for c in text.chars() {
        match c {
            '\n' => line += 1,
            '[' => {
                depth += 1;
                if depth == 2 {
                    lines.push(line);
                }
            }
            ']' => depth = depth.saturating_sub(1),
            _ => {}
        }
    }
    lines
}

fn to_complex(amps: &[[f64; 2]]) -> Vec<Complex64> {
    amps.iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect()
}

/// Parses a state file. With `normalize`, each state is rescaled to unit
/// norm; otherwise states off by more than the norm tolerance are rejected.
pub fn parse_states(name: &str, text: &str, normalize: bool) -> anyhow::Result<Vec<PureState>> {
    let raw: Vec<Amplitudes> = serde_json::from_str(text).map_err(|e| {
        anyhow!(
            "{name}:{}:{}: expected a JSON array of states, each an array of [re, im] pairs ({e})",
            e.line(),
            e.column()
        )
    })?;
    let lines = element_lines(text);
    let at = |i: usize| format!("{name}:{}", lines.get(i).copied().unwrap_or(1));
    if raw.len() < 2 {
        bail!("{name}: need at least 2 states, found {}", raw.len());
    }
    let dim = raw[0].len();
    let mut states = Vec::with_capacity(raw.len());
    for (i, amps) in raw.iter().enumerate() {
        if amps.is_empty() {
            bail!("{}: state {i} has no amplitudes", at(i));
        }
        if amps.len() != dim {
            bail!(
                "{}: state {i} has {} amplitudes but state 0 has {dim}",
                at(i),
                amps.len()
            );
        }
        if amps.iter().flatten().any(|v| !v.is_finite()) {
            bail!("{}: state {i} has a non-finite amplitude", at(i));
        }
        let v = to_complex(amps);
        let state = if normalize {
            PureState::normalized(v).map_err(|e| anyhow!("{}: state {i}: {e}", at(i)))?
        } else {
            let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            PureState::new(v).map_err(|_| {
                anyhow!(
                    "{}: state {i} is not normalized (squared norm {norm_sq}, tolerance {NORM_TOLERANCE:e}); pass --normalize to rescale",
                    at(i)
                )
            })?
        };
        states.push(state);
    }
    Ok(states)
}

/// Parses a square matrix given as rows and checks that it is unitary.
pub fn parse_unitary(name: &str, text: &str) -> anyhow::Result<UnitaryMatrix> {
    let rows: Vec<Amplitudes> = serde_json::from_str(text).map_err(|e| {
        anyhow!(
            "{name}:{}:{}: expected a JSON array of rows, each an array of [re, im] pairs ({e})",
            e.line(),
            e.column()
        )
    })?;
    let rows: Vec<Vec<Complex64>> = rows.iter().map(|r| to_complex(r)).collect();
    UnitaryMatrix::from_rows(rows).map_err(|e| anyhow!("{name}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_lines_follow_layout() {
        let text = "[\n  [[1, 0]],\n\n  [[0, 1]]\n]\n";
        assert_eq!(element_lines(text), vec![2, 4]);
    }

    #[test]
    fn reports_line_of_bad_state() {
        let text = "[\n  [[1, 0], [0, 0]],\n  [[1, 0], [1, 0]]\n]";
        let err = parse_states("s.json", text, false).unwrap_err().to_string();
        assert!(
            err.starts_with("s.json:3: state 1 is not normalized"),
            "{err}"
        );
        let ok = parse_states("s.json", text, true).unwrap();
        assert!((ok[1].norm_sq() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reports_ragged_states() {
        let text = "[[[1,0]],\n[[1,0],[0,0]]]";
        let err = parse_states("s.json", text, false).unwrap_err().to_string();
        assert!(err.contains("s.json:2: state 1 has 2 amplitudes"), "{err}");
    }

    #[test]
    fn reports_syntax_position() {
        let err = parse_states("s.json", "[[[1,0]],\n[[1,0]", false)
            .unwrap_err()
            .to_string();
        assert!(err.starts_with("s.json:2:"), "{err}");
    }

    #[test]
    fn unitary_round_trip() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let text = format!("[[[{h},0],[0,{h}]],[[0,{h}],[{h},0]]]");
        let u = parse_unitary("u.json", &text).unwrap();
        assert_eq!(u.dim(), 2);
        assert!(parse_unitary("u.json", "[[[1,0],[1,0]],[[0,0],[1,0]]]").is_err());
    }
}
