//! Finite-dimensional pure states, overlaps and unitaries.
//!
//! A [`PureState`] is a normalized amplitude vector `⟨k|ψ⟩` over an
//! orthonormal basis `|0⟩, |1⟩, …`. Two-mode states use the basis
//! `|u⟩ = |0⟩`, `|d⟩ = |1⟩` (the upper and lower ports of a beam splitter,
//! or spin up/down; the algebra is the same).
//!
//! States are only ever compared through `|⟨a|b⟩|`, so a global phase is
//! never observable through this API.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum allowed `|Σ|a_k|² − 1|` for a state.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Maximum allowed entrywise `|U†U − 1|` for a user-supplied unitary.
pub const UNITARY_TOLERANCE: f64 = 1e-9;

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Wraps `amplitudes`, which must already be normalized.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_amplitudes(&amplitudes)?;
        let norm_sq = squared_norm(&amplitudes);
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { amplitudes })
    }

    /// Divides `amplitudes` by their norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        check_amplitudes(&amplitudes)?;
        let norm = squared_norm(&amplitudes).sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm_sq: 0.0 });
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self { amplitudes })
    }

    /// The basis state `|k⟩` in `dim` dimensions.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty("state"));
        }
        if k >= dim {
            return Err(Error::IndexOutOfRange { index: k, dim });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// A state drawn uniformly from the unit sphere of `C^dim`.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty("state"));
        }
        let amplitudes = (0..dim).map(|_| complex_normal(rng)).collect();
        Self::normalized(amplitudes)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `⟨k|ψ⟩`
    pub fn amplitude(&self, k: usize) -> Result<Complex64> {
        self.amplitudes
            .get(k)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index: k,
                dim: self.dim(),
            })
    }

    pub fn norm_sq(&self) -> f64 {
        squared_norm(&self.amplitudes)
    }
}

fn check_amplitudes(amplitudes: &[Complex64]) -> Result<()> {
    if amplitudes.is_empty() {
        return Err(Error::Empty("state"));
    }
    if amplitudes
        .iter()
        .any(|a| !a.re.is_finite() || !a.im.is_finite())
    {
        return Err(Error::NonFinite("state amplitudes"));
    }
    Ok(())
}

fn squared_norm(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum()
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// The inner product `⟨a|b⟩ = Σ_m ⟨a|m⟩⟨m|b⟩`.
pub fn overlap(a: &PureState, b: &PureState) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Angles of the two-mode state `cos θ·e^{iμ}|u⟩ + sin θ·e^{−iμ}|d⟩`.
///
/// Any finite angles are accepted; the trigonometric functions take care of
/// periodicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoModeParams {
    pub theta: f64,
    pub mu: f64,
}

impl TwoModeParams {
    pub fn new(theta: f64, mu: f64) -> Result<Self> {
        if !theta.is_finite() || !mu.is_finite() {
            return Err(Error::NonFinite("two-mode angles"));
        }
        Ok(Self { theta, mu })
    }
}

/// Builds `cos θ·e^{iμ}|u⟩ + sin θ·e^{−iμ}|d⟩`.
pub fn two_mode_state(p: TwoModeParams) -> PureState {
    let (s, c) = p.theta.sin_cos();
    PureState {
        amplitudes: vec![
            Complex64::from_polar(c, p.mu),
            Complex64::from_polar(s, -p.mu),
        ],
    }
}

/// Closed form of `|⟨ψ₁|ψ₂⟩|²` for two two-mode states:
/// `cos²(θ₁−θ₂) − sin 2θ₁ · sin 2θ₂ · sin²(μ₁−μ₂)`, clamped to `[0, 1]`.
pub fn overlap_sq_two_mode(p1: TwoModeParams, p2: TwoModeParams) -> f64 {
    let c = (p1.theta - p2.theta).cos();
    let s = (p1.mu - p2.mu).sin();
    let v = c * c - (2.0 * p1.theta).sin() * (2.0 * p2.theta).sin() * s * s;
    v.clamp(0.0, 1.0)
}

/// Draws `θ` then `μ`, each uniform on `[0, 2π)`.
///
/// This is uniform in the angles, not Haar-uniform over the Bloch sphere.
pub fn random_two_mode<R: Rng + ?Sized>(rng: &mut R) -> TwoModeParams {
    let theta = uniform_angle(rng);
    let mu = uniform_angle(rng);
    TwoModeParams { theta, mu }
}

/// A uniform draw from `[0, 2π)`.
pub fn uniform_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // random::<f64>() < 1 - 2^-53, and that times 2π still rounds below 2π.
    rng.random::<f64>() * TAU
}

/// A square matrix `U` with `U†U = 1`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl UnitaryMatrix {
    /// Validates unitarity to within [`UNITARY_TOLERANCE`].
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty("matrix"));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: entries.len(),
                right: dim * dim,
            });
        }
        if entries
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::NonFinite("matrix entries"));
        }
        let u = Self { dim, entries };
        let deviation = u.unitarity_deviation();
        if deviation > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(u)
    }

    /// Builds from nested rows.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            let bad = rows.iter().find(|r| r.len() != dim).map_or(0, Vec::len);
            return Err(Error::DimensionMismatch {
                left: bad,
                right: dim,
            });
        }
        Self::new(dim, rows.into_iter().flatten().collect())
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Self { dim, entries }
    }

    /// Haar-random unitary via Gram–Schmidt on a complex Gaussian matrix.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty("matrix"));
        }
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
        while cols.len() < dim {
            let mut v: Vec<Complex64> = (0..dim).map(|_| complex_normal(rng)).collect();
            // two passes of modified Gram-Schmidt keep the columns orthogonal to ~1e-16
            for _ in 0..2 {
                for c in &cols {
                    let proj: Complex64 = c.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                    for (vi, ci) in v.iter_mut().zip(c) {
                        *vi -= proj * ci;
                    }
                }
            }
            let norm = squared_norm(&v).sqrt();
            if norm < 1e-8 {
                continue;
            }
            v.iter_mut().for_each(|x| *x /= norm);
            cols.push(v);
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                entries[i * dim + j] = *x;
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Largest entry of `|U†U − 1|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.get(k, i).conj() * self.get(k, j);
                }
                if i == j {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// `U|s⟩`
    pub fn apply(&self, s: &PureState) -> Result<PureState> {
        if s.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: s.dim(),
            });
        }
        let amplitudes = (0..self.dim)
            .map(|i| {
                self.entries[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(&s.amplitudes)
                    .map(|(u, a)| u * a)
                    .sum()
            })
            .collect();
        Ok(PureState { amplitudes })
    }

    /// `U·V`
    pub fn compose(&self, other: &UnitaryMatrix) -> Result<UnitaryMatrix> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum();
            }
        }
        Ok(UnitaryMatrix { dim: n, entries })
    }
}

impl fmt::Display for UnitaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| format!("{}", self.get(i, j)))
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Applies `u` to `s`.
pub fn apply_unitary(u: &UnitaryMatrix, s: &PureState) -> Result<PureState> {
    u.apply(s)
}

/// The symmetric 50:50 splitter `(1/√2)[[1, i], [i, 1]]`.
pub fn beam_splitter() -> UnitaryMatrix {
    let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let t = Complex64::new(0.0, FRAC_1_SQRT_2);
    UnitaryMatrix {
        dim: 2,
        entries: vec![r, t, t, r],
    }
}
