//! Two-particle joint probabilities and the bunching parameter.
//!
//! For two particles prepared in `|ψ₁⟩` and `|ψ₂⟩` and detected in basis
//! states `m` and `p`, the symmetrized (boson) joint state has norm
//! `N = 1 + |⟨ψ₁|ψ₂⟩|²`. The ratio of the boson to the distinguishable
//! probability of finding both particles in the same state is
//! `β = 2 / N`, independent of `m` and of any common unitary evolution.
//!
//! Outcomes are unordered: `(m, p)` and `(p, m)` name the same event, and
//! summing over all unordered outcomes gives 1.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::{overlap, overlap_sq_two_mode, PureState, TwoModeParams};

/// Below this distinguishable probability the pointwise ratio is not reported.
pub const MIN_RATIO_DENOMINATOR: f64 = 1e-30;

/// One particle detected in `m`, the other in `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairOutcome {
    pub m: usize,
    pub p: usize,
}

impl PairOutcome {
    pub fn new(m: usize, p: usize) -> Self {
        Self { m, p }
    }

    pub fn same(m: usize) -> Self {
        Self { m, p: m }
    }

    pub fn is_same(&self) -> bool {
        self.m == self.p
    }

    fn check(&self, dim: usize) -> Result<()> {
        for index in [self.m, self.p] {
            if index >= dim {
                return Err(Error::IndexOutOfRange { index, dim });
            }
        }
        Ok(())
    }
}

/// All unordered outcomes `m ≤ p` for a `dim`-dimensional single-particle space.
pub fn unordered_outcomes(dim: usize) -> impl Iterator<Item = PairOutcome> {
    (0..dim).flat_map(move |m| (m..dim).map(move |p| PairOutcome { m, p }))
}

/// Probabilities of one outcome for bosons and for distinguishable particles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairProbabilities {
    pub p_boson: f64,
    pub p_dist: f64,
    /// `p_boson / p_dist`, or `None` where `p_dist` vanishes.
    pub ratio: Option<f64>,
}

fn check_dims(a: &PureState, b: &PureState) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

/// `N = 1 + |⟨ψ₁|ψ₂⟩|²`, in `[1, 2]`.
pub fn normalization_constant(psi1: &PureState, psi2: &PureState) -> Result<f64> {
    Ok(1.0 + overlap(psi1, psi2)?.norm_sqr().min(1.0))
}

fn amplitude_products(
    psi1: &PureState,
    psi2: &PureState,
    out: PairOutcome,
) -> Result<(Complex64, Complex64)> {
    check_dims(psi1, psi2)?;
    out.check(psi1.dim())?;
    let a = psi1.amplitudes();
    let b = psi2.amplitudes();
    Ok((a[out.m] * b[out.p], a[out.p] * b[out.m]))
}

/// Boson probability of the unordered outcome `{m, p}`.
pub fn joint_prob_boson(psi1: &PureState, psi2: &PureState, out: PairOutcome) -> Result<f64> {
    let (direct, exchanged) = amplitude_products(psi1, psi2, out)?;
    let n = normalization_constant(psi1, psi2)?;
    let p = if out.is_same() {
        2.0 * direct.norm_sqr()
    } else {
        (direct + exchanged).norm_sqr()
    };
    Ok(p / n)
}

/// Distinguishable-particle probability of the unordered outcome `{m, p}`.
pub fn joint_prob_distinguishable(
    psi1: &PureState,
    psi2: &PureState,
    out: PairOutcome,
) -> Result<f64> {
    let (direct, exchanged) = amplitude_products(psi1, psi2, out)?;
    Ok(if out.is_same() {
        direct.norm_sqr()
    } else {
        direct.norm_sqr() + exchanged.norm_sqr()
    })
}

/// Both probabilities of `out`, with the pointwise ratio where defined.
pub fn outcome_probabilities(
    psi1: &PureState,
    psi2: &PureState,
    out: PairOutcome,
) -> Result<PairProbabilities> {
    let p_boson = joint_prob_boson(psi1, psi2, out)?;
    let p_dist = joint_prob_distinguishable(psi1, psi2, out)?;
    let ratio = (p_dist > MIN_RATIO_DENOMINATOR).then(|| p_boson / p_dist);
    Ok(PairProbabilities {
        p_boson,
        p_dist,
        ratio,
    })
}

/// `β = 2 / (1 + |⟨ψ₁|ψ₂⟩|²)`.
pub fn bunching_parameter(psi1: &PureState, psi2: &PureState) -> Result<f64> {
    Ok(2.0 / normalization_constant(psi1, psi2)?)
}

/// `β` for two two-mode states, from the closed-form overlap.
pub fn beta_two_mode(p1: TwoModeParams, p2: TwoModeParams) -> f64 {
    2.0 / (1.0 + overlap_sq_two_mode(p1, p2))
}
