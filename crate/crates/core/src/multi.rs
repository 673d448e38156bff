//! Bunching of `Q` bosons: Gram matrices, permanents and the enhancement factor.
//!
//! For `Q` single-particle states the symmetrized joint state has norm
//! `N = per(G)`, where `G[a][b] = ⟨ψ_a|ψ_b⟩` is the Gram matrix. The ratio
//! of the boson to the distinguishable probability of finding all particles
//! in the same state is `β = Q!/N`: exactly `Q!` for mutually orthogonal
//! states, down to `1` when all states coincide.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::states::{overlap, PureState};

/// Largest size accepted by [`permanent_naive`].
pub const NAIVE_MAX: usize = 10;
/// Largest size accepted by [`permanent_ryser`].
pub const RYSER_MAX: usize = 30;
/// `Q!` is exact in `u128` up to here.
pub const FACTORIAL_MAX: usize = 34;

const GRAM_TOLERANCE: f64 = 1e-12;
const PSD_TOLERANCE: f64 = 1e-10;
// Below this many rows the Gray-code walk runs on one thread.
const PARALLEL_MIN_ROWS: usize = 16;
const CHUNK_BITS: u32 = 12;

/// A dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                left: data.len(),
                right: n * n,
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("matrix entries"));
        }
        Ok(Self { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let data = (0..n * n).map(|idx| f(idx / n, idx % n)).collect();
        Self { n, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| {
            Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)
        })
    }

    pub fn ones(n: usize) -> Self {
        Self::from_fn(n, |_, _| Complex64::new(1.0, 0.0))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.data[row * self.n..(row + 1) * self.n]
    }
}

/// `G[a][b] = ⟨ψ_a|ψ_b⟩`: Hermitian, unit diagonal, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    matrix: ComplexMatrix,
}

impl GramMatrix {
    /// Validates a user-supplied overlap matrix.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.size();
        if n == 0 {
            return Err(Error::Empty("Gram matrix"));
        }
        for i in 0..n {
            if (matrix.get(i, i) - 1.0).norm() > GRAM_TOLERANCE {
                return Err(Error::InvalidGram(format!(
                    "diagonal entry {i} is {}, not 1",
                    matrix.get(i, i)
                )));
            }
            for j in i + 1..n {
                if (matrix.get(i, j) - matrix.get(j, i).conj()).norm() > GRAM_TOLERANCE {
                    return Err(Error::InvalidGram(format!("not Hermitian at ({i}, {j})")));
                }
            }
        }
        if !is_psd(&matrix, PSD_TOLERANCE) {
            return Err(Error::InvalidGram(format!(
                "not positive semidefinite within {PSD_TOLERANCE:e}"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn q(&self) -> usize {
        self.matrix.size()
    }

    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        self.matrix.get(a, b)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Cholesky of `M + tol·1`; succeeds iff every eigenvalue exceeds `−tol`.
fn is_psd(m: &ComplexMatrix, tol: f64) -> bool {
    let n = m.size();
    let mut l = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        let mut d = m.get(j, j).re + tol;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if d <= 0.0 {
            return false;
        }
        let d = d.sqrt();
        l[j * n + j] = Complex64::new(d, 0.0);
        for i in j + 1..n {
            let mut s = m.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / d;
        }
    }
    true
}

/// Overlap matrix of `states`.
pub fn gram_matrix(states: &[PureState]) -> Result<GramMatrix> {
    if states.len() < 2 {
        return Err(Error::TooFew {
            what: "states",
            need: 2,
            got: states.len(),
        });
    }
    let dim = states[0].dim();
    if let Some(s) = states.iter().find(|s| s.dim() != dim) {
        return Err(Error::DimensionMismatch {
            left: dim,
            right: s.dim(),
        });
    }
    let q = states.len();
    let mut data = vec![Complex64::new(0.0, 0.0); q * q];
    for a in 0..q {
        data[a * q + a] = Complex64::new(1.0, 0.0);
        for b in a + 1..q {
            let v = overlap(&states[a], &states[b])?;
            data[a * q + b] = v;
            data[b * q + a] = v.conj();
        }
    }
    Ok(GramMatrix {
        matrix: ComplexMatrix { n: q, data },
    })
}

/// `Σ_σ Π_n M[n][σ(n)]` over all permutations (Heap's algorithm).
pub fn permanent_naive(m: &ComplexMatrix) -> Result<Complex64> {
    let n = m.size();
    if n > NAIVE_MAX {
        return Err(Error::TooLarge {
            size: n,
            limit: NAIVE_MAX,
            algorithm: "naive permanent",
        });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let term = |perm: &[usize]| -> Complex64 {
        perm.iter()
            .enumerate()
            .map(|(row, &col)| m.get(row, col))
            .product()
    };
    let mut total = term(&perm);
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            total += term(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(total)
}

/// Ryser's inclusion–exclusion formula in the Nijenhuis–Wilf form, walking
/// the subsets of the first `n − 1` columns in Gray-code order.
///
/// With `x_i = a_{i,n−1} − ½ Σ_j a_ij`,
/// `per(A) = 2·(−1)^{n−1} Σ_S (−1)^{|S|} Π_i (x_i + Σ_{j∈S} a_ij)`.
/// Large matrices split the `2^{n−1}` subsets into fixed chunks summed in
/// order, so the result does not depend on the thread count.
pub fn permanent_ryser(m: &ComplexMatrix) -> Result<Complex64> {
    let n = m.size();
    if n > RYSER_MAX {
        return Err(Error::TooLarge {
            size: n,
            limit: RYSER_MAX,
            algorithm: "Ryser permanent",
        });
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let base: Vec<Complex64> = (0..n)
        .map(|i| m.get(i, n - 1) - 0.5 * m.row(i).iter().sum::<Complex64>())
        .collect();
    let total_subsets: u64 = 1 << (n - 1);

    let sum = if n < PARALLEL_MIN_ROWS {
        gray_walk(m, &base, 0, total_subsets)
    } else {
        let chunk = 1u64 << CHUNK_BITS.min(n as u32 - 1);
        let chunks = (total_subsets / chunk) as usize;
        let parts: Vec<Complex64> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let c = c as u64;
                gray_walk(m, &base, c * chunk, (c + 1) * chunk)
            })
            .collect();
        parts.into_iter().sum()
    };
    let sign = if (n - 1) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(2.0 * sign * sum)
}

/// `Σ (−1)^{|S|} Π_i x_i(S)` for Gray-code indices `start..end`.
fn gray_walk(m: &ComplexMatrix, base: &[Complex64], start: u64, end: u64) -> Complex64 {
    let n = base.len();
    let mut x = base.to_vec();
    let mut subset = start ^ (start >> 1);
    for j in 0..n - 1 {
        if subset >> j & 1 == 1 {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi += m.get(i, j);
            }
        }
    }
    let parity = |s: u64| if s.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    let mut acc = parity(subset) * x.iter().product::<Complex64>();
    for k in start + 1..end {
        let j = k.trailing_zeros() as usize;
        let bit = 1u64 << j;
        subset ^= bit;
        if subset & bit != 0 {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi += m.get(i, j);
            }
        } else {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi -= m.get(i, j);
            }
        }
        let p: Complex64 = x.iter().product();
        // Gray code flips exactly one bit per step, so the parity alternates
        if k % 2 == 0 {
            acc += p;
        } else {
            acc -= p;
        }
    }
    acc
}

/// `Q!` exactly.
pub fn factorial(q: usize) -> Result<u128> {
    if q > FACTORIAL_MAX {
        return Err(Error::TooLarge {
            size: q,
            limit: FACTORIAL_MAX,
            algorithm: "exact factorial",
        });
    }
    Ok((1..=q as u128).product())
}

/// `N = per(G)` for the Gram matrix of `states`.
pub fn normalization_q(states: &[PureState]) -> Result<f64> {
    let g = gram_matrix(states)?;
    Ok(permanent_ryser(g.matrix())?.re)
}

/// Normalization and enhancement factor of `Q` bosons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnhancementResult {
    pub q: usize,
    /// `N = per(G)`, at least 1.
    pub n_const: f64,
    /// Imaginary part of `per(G)`; zero up to rounding.
    pub n_imag: f64,
    pub q_factorial: u128,
    /// `Q!/N`, in `[1, Q!]`. Loses integer exactness above `Q = 20`.
    pub beta: f64,
}

/// `β = Q!/per(G)`.
pub fn beta_q(states: &[PureState]) -> Result<EnhancementResult> {
    let g = gram_matrix(states)?;
    beta_from_gram(&g)
}

/// `β = Q!/per(G)` for a given Gram matrix.
pub fn beta_from_gram(g: &GramMatrix) -> Result<EnhancementResult> {
    let q = g.q();
    let per = permanent_ryser(g.matrix())?;
    let q_factorial = factorial(q)?;
    Ok(EnhancementResult {
        q,
        n_const: per.re,
        n_imag: per.im,
        q_factorial,
        beta: q_factorial as f64 / per.re,
    })
}

/// Particle statistics for [`p_same_state_q`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParticleKind {
    Boson,
    Distinguishable,
}

/// Probability that all `Q` particles are found in basis state `m`:
/// `Π|⟨m|ψ_n⟩|²`, times `Q!/N` for bosons.
pub fn p_same_state_q(states: &[PureState], m: usize, kind: ParticleKind) -> Result<f64> {
    let g = gram_matrix(states)?;
    let dim = states[0].dim();
    if m >= dim {
        return Err(Error::IndexOutOfRange { index: m, dim });
    }
    let p_dist: f64 = states
        .iter()
        .map(|s| s.amplitudes()[m].norm_sqr())
        .product();
    Ok(match kind {
        ParticleKind::Distinguishable => p_dist,
        ParticleKind::Boson => beta_from_gram(&g)?.beta * p_dist,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{beam_splitter, two_mode_state, TwoModeParams};
    use std::f64::consts::FRAC_PI_4;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn basis_set(q: usize) -> Vec<PureState> {
        (0..q).map(|k| PureState::basis(q, k).unwrap()).collect()
    }

    #[test]
    fn gram_examples() {
        let g = gram_matrix(&basis_set(4)).unwrap();
        assert_eq!(g.matrix(), &ComplexMatrix::identity(4));

        let s = two_mode_state(TwoModeParams {
            theta: 0.4,
            mu: 0.9,
        });
        let g = gram_matrix(&vec![s.clone(); 3]).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert!((g.get(a, b) - 1.0).norm() < 1e-15);
            }
        }

        let t = two_mode_state(TwoModeParams {
            theta: 1.1,
            mu: -0.3,
        });
        let i = overlap(&s, &t).unwrap();
        let g = gram_matrix(&[s, t]).unwrap();
        assert_eq!(g.get(0, 1), i);
        assert_eq!(g.get(1, 0), i.conj());
        assert_eq!(g.get(0, 0), c(1.0, 0.0));
    }

    #[test]
    fn gram_rejects_bad_input() {
        assert!(matches!(
            gram_matrix(&basis_set(1)),
            Err(Error::TooFew { .. })
        ));
        let a = PureState::basis(2, 0).unwrap();
        let b = PureState::basis(3, 0).unwrap();
        assert!(matches!(
            gram_matrix(&[a, b]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn gram_validation() {
        let ok = ComplexMatrix::new(2, vec![c(1.0, 0.0), c(0.3, 0.4), c(0.3, -0.4), c(1.0, 0.0)])
            .unwrap();
        assert!(GramMatrix::new(ok).is_ok());
        let not_herm =
            ComplexMatrix::new(2, vec![c(1.0, 0.0), c(0.3, 0.4), c(0.3, 0.4), c(1.0, 0.0)])
                .unwrap();
        assert!(GramMatrix::new(not_herm).is_err());
        let diag = ComplexMatrix::new(2, vec![c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
            .unwrap();
        assert!(GramMatrix::new(diag).is_err());
        // |off-diagonal| > 1 cannot come from unit vectors
        let indefinite =
            ComplexMatrix::new(2, vec![c(1.0, 0.0), c(1.5, 0.0), c(1.5, 0.0), c(1.0, 0.0)])
                .unwrap();
        assert!(GramMatrix::new(indefinite).is_err());
        // singular but PSD
        assert!(GramMatrix::new(ComplexMatrix::ones(4)).is_ok());
    }

    #[test]
    fn naive_examples() {
        assert_eq!(
            permanent_naive(&ComplexMatrix::identity(4)).unwrap(),
            c(1.0, 0.0)
        );
        assert_eq!(
            permanent_naive(&ComplexMatrix::ones(3)).unwrap(),
            c(6.0, 0.0)
        );
        let i = c(0.3, -0.5);
        let m = ComplexMatrix::new(2, vec![c(1.0, 0.0), i, i.conj(), c(1.0, 0.0)]).unwrap();
        let p = permanent_naive(&m).unwrap();
        assert!((p - (1.0 + i.norm_sqr())).norm() < 1e-15);
        assert!(matches!(
            permanent_naive(&ComplexMatrix::identity(11)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn naive_hand_computed_3x3() {
        // per [[1,2,3],[4,5,6],[7,8,9]] = 450
        let m = ComplexMatrix::from_fn(3, |i, j| c((3 * i + j + 1) as f64, 0.0));
        assert_eq!(permanent_naive(&m).unwrap(), c(450.0, 0.0));
        assert_eq!(permanent_ryser(&m).unwrap(), c(450.0, 0.0));
    }

    #[test]
    fn ryser_examples() {
        assert_eq!(
            permanent_ryser(&ComplexMatrix::identity(8)).unwrap(),
            c(1.0, 0.0)
        );
        assert_eq!(
            permanent_ryser(&ComplexMatrix::ones(5)).unwrap(),
            c(120.0, 0.0)
        );
        assert_eq!(
            permanent_ryser(&ComplexMatrix::identity(1)).unwrap(),
            c(1.0, 0.0)
        );
        let m = ComplexMatrix::new(1, vec![c(0.2, 0.7)]).unwrap();
        assert_eq!(permanent_ryser(&m).unwrap(), c(0.2, 0.7));
        assert!(matches!(
            permanent_ryser(&ComplexMatrix::identity(31)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn ryser_parallel_path_all_ones() {
        // 16! = 20922789888000, exactly representable
        let p = permanent_ryser(&ComplexMatrix::ones(16)).unwrap();
        assert_eq!(p.re, 20_922_789_888_000.0);
        assert_eq!(
            permanent_ryser(&ComplexMatrix::identity(18)).unwrap(),
            c(1.0, 0.0)
        );
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0).unwrap(), 1);
        assert_eq!(factorial(5).unwrap(), 120);
        assert_eq!(factorial(20).unwrap(), 2_432_902_008_176_640_000);
        assert_eq!(
            factorial(30).unwrap(),
            265_252_859_812_191_058_636_308_480_000_000
        );
        assert!(factorial(35).is_err());
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(normalization_q(&basis_set(5)).unwrap(), 1.0);
        let s = PureState::basis(3, 1).unwrap();
        assert_eq!(normalization_q(&vec![s; 4]).unwrap(), 24.0);
        let a = two_mode_state(TwoModeParams {
            theta: 0.0,
            mu: 0.0,
        });
        let b = two_mode_state(TwoModeParams {
            theta: FRAC_PI_4,
            mu: 0.0,
        });
        assert!((normalization_q(&[a, b]).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn beta_examples() {
        let r = beta_q(&basis_set(3)).unwrap();
        assert_eq!(r.beta, 6.0);
        assert_eq!(r.q_factorial, 6);

        let s = PureState::basis(2, 0).unwrap();
        assert_eq!(beta_q(&vec![s; 4]).unwrap().beta, 1.0);

        let a = two_mode_state(TwoModeParams {
            theta: 0.0,
            mu: 0.0,
        });
        let b = two_mode_state(TwoModeParams {
            theta: FRAC_PI_4,
            mu: 0.0,
        });
        assert!((beta_q(&[a, b]).unwrap().beta - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn same_state_probabilities() {
        let bs = beam_splitter();
        let r = bs.apply(&PureState::basis(2, 0).unwrap()).unwrap();
        let l = bs.apply(&PureState::basis(2, 1).unwrap()).unwrap();
        let pb = p_same_state_q(&[r.clone(), l.clone()], 0, ParticleKind::Boson).unwrap();
        assert!((pb - 0.5).abs() < 1e-15);
        let pb = p_same_state_q(&[r.clone(), r.clone()], 0, ParticleKind::Boson).unwrap();
        assert!((pb - 0.25).abs() < 1e-15);

        let s = two_mode_state(TwoModeParams {
            theta: 0.3,
            mu: 0.2,
        });
        let t = two_mode_state(TwoModeParams {
            theta: 1.2,
            mu: -0.7,
        });
        let pd = p_same_state_q(
            &[s.clone(), t.clone(), r.clone()],
            1,
            ParticleKind::Distinguishable,
        )
        .unwrap();
        let expected = s.amplitudes()[1].norm_sqr()
            * t.amplitudes()[1].norm_sqr()
            * r.amplitudes()[1].norm_sqr();
        assert!((pd - expected).abs() < 1e-16);
        assert!(p_same_state_q(&[s, t], 2, ParticleKind::Boson).is_err());
    }
}
