//! Distributions of the bunching parameter over randomly chosen two-mode states.
//!
//! Every free angle is drawn uniformly from `[0, 2π)`. Three scenarios are
//! supported:
//!
//! * [`Scenario::General`]: `θ₁, μ₁, θ₂, μ₂` all free,
//!   `β = 2/(1 + cos²(θ₁−θ₂) − sin 2θ₁ sin 2θ₂ sin²(μ₁−μ₂))`.
//! * [`Scenario::EqualPhase`]: `μ₁ = μ₂`, `β = 2/(1 + cos²(θ₁−θ₂))`.
//! * [`Scenario::EqualAmplitude`]: `θ₁ = θ₂ = θ`,
//!   `β = 1/(1 − sin²(2θ) sin²(μ₂−μ₁)/2)`.
//!
//! Sampling is split into fixed-size chunks. Chunk `c` draws from a ChaCha8
//! stream seeded with the master seed and stream number `c`, and chunk
//! results are merged in chunk order, so the output is a pure function of
//! `(scenario, n, seed)` whatever the size of the rayon pool.
//!
//! For the equal-phase scenario the density of `β` is known in closed form,
//! see [`density_equal_phase`].

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pair::beta_two_mode;
use crate::states::{random_two_mode, uniform_angle};

/// Samples drawn from one ChaCha stream.
pub const CHUNK_SIZE: u64 = 1 << 16;

/// Default number of uniform bins on `[1, 2]`.
pub const DEFAULT_BINS: usize = 200;

/// Which angles are random.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    General,
    EqualPhase,
    EqualAmplitude,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [
        Scenario::General,
        Scenario::EqualPhase,
        Scenario::EqualAmplitude,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::General => "general",
            Scenario::EqualPhase => "equal_phase",
            Scenario::EqualAmplitude => "equal_amplitude",
        }
    }

    /// One draw of `β`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Scenario::General => {
                let p1 = random_two_mode(rng);
                let p2 = random_two_mode(rng);
                beta_two_mode(p1, p2)
            }
            Scenario::EqualPhase => {
                let t1 = uniform_angle(rng);
                let t2 = uniform_angle(rng);
                beta_equal_phase(t1 - t2)
            }
            Scenario::EqualAmplitude => {
                let theta = uniform_angle(rng);
                let mu1 = uniform_angle(rng);
                let mu2 = uniform_angle(rng);
                beta_equal_amplitude(theta, mu2 - mu1)
            }
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "general" => Ok(Scenario::General),
            "equal_phase" => Ok(Scenario::EqualPhase),
            "equal_amplitude" => Ok(Scenario::EqualAmplitude),
            _ => Err(Error::InvalidArgument(format!(
                "unknown scenario {s:?} (expected general, equal_phase or equal_amplitude)"
            ))),
        }
    }
}

/// `β = 2/(1 + cos²Δθ)` for states sharing a phase.
pub fn beta_equal_phase(delta_theta: f64) -> f64 {
    let c = delta_theta.cos();
    2.0 / (1.0 + c * c)
}

/// `β = 1/(1 − sin²(2θ) sin²(Δμ)/2)` for states sharing an amplitude.
pub fn beta_equal_amplitude(theta: f64, delta_mu: f64) -> f64 {
    let s2 = (2.0 * theta).sin();
    let sm = delta_mu.sin();
    1.0 / (1.0 - 0.5 * s2 * s2 * sm * sm)
}

/// Bin edges for a [`BetaHistogram`].
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramSpec {
    edges: Vec<f64>,
}

impl HistogramSpec {
    /// `bins` uniform bins on `[1, 2]`.
    pub fn uniform(bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::TooFew {
                what: "bins",
                need: 1,
                got: 0,
            });
        }
        let edges = (0..=bins).map(|i| 1.0 + i as f64 / bins as f64).collect();
        Ok(Self { edges })
    }

    /// `bins` uniform bins on `[lo, hi]` plus the two edge bins `[1, lo]`
    /// and `[hi, 2]`.
    pub fn interior(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::TooFew {
                what: "bins",
                need: 1,
                got: 0,
            });
        }
        if !(1.0 < lo && lo < hi && hi < 2.0) {
            return Err(Error::InvalidArgument(format!(
                "interior range [{lo}, {hi}] must satisfy 1 < lo < hi < 2"
            )));
        }
        let mut edges = vec![1.0];
        let w = (hi - lo) / bins as f64;
        edges.extend((0..=bins).map(|i| if i == bins { hi } else { lo + w * i as f64 }));
        edges.push(2.0);
        Self::from_edges(edges)
    }

    /// Arbitrary strictly increasing edges with `first ≤ 1` and `last ≥ 2`.
    pub fn from_edges(edges: Vec<f64>) -> Result<Self> {
        if edges.len() < 2 {
            return Err(Error::TooFew {
                what: "bin edges",
                need: 2,
                got: edges.len(),
            });
        }
        if edges
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::InvalidArgument(
                "bin edges must be strictly increasing".into(),
            ));
        }
        if edges[0] > 1.0 || edges[edges.len() - 1] < 2.0 {
            return Err(Error::InvalidArgument("bin edges must span [1, 2]".into()));
        }
        Ok(Self { edges })
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn bins(&self) -> usize {
        self.edges.len() - 1
    }

    /// Bin holding `x`. Bins are `[lᵢ, rᵢ)` except the last, which is closed;
    /// values outside the edges are clamped into the end bins.
    pub fn bin_of(&self, x: f64) -> usize {
        let idx = self.edges.partition_point(|&e| e <= x);
        idx.saturating_sub(1).min(self.bins() - 1)
    }
}

impl Default for HistogramSpec {
    fn default() -> Self {
        Self::uniform(DEFAULT_BINS).expect("nonzero bins")
    }
}

/// Binned sample of `β`.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaHistogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub n_samples: u64,
    pub seed: u64,
    pub scenario: Scenario,
}

impl BetaHistogram {
    /// `count / (n · width)` per bin.
    pub fn densities(&self) -> Vec<f64> {
        self.counts
            .iter()
            .zip(self.bin_edges.windows(2))
            .map(|(&c, w)| c as f64 / (self.n_samples as f64 * (w[1] - w[0])))
            .collect()
    }

    /// CSV with header `bin_left,bin_right,count,density`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "bin_left,bin_right,count,density")?;
        for ((edges, count), density) in self
            .bin_edges
            .windows(2)
            .zip(&self.counts)
            .zip(self.densities())
        {
            writeln!(
                w,
                "{},{},{},{}",
                fmt_real(edges[0]),
                fmt_real(edges[1]),
                count,
                fmt_real(density)
            )?;
        }
        Ok(())
    }
}

/// 17 significant digits, which round-trips any `f64`.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Mean and population standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean: f64,
    pub std: f64,
    pub n: u64,
}

/// Statistics of raw samples (two-pass).
pub fn summarize(samples: &[f64]) -> Result<SummaryStats> {
    if samples.len() < 2 {
        return Err(Error::TooFew {
            what: "samples",
            need: 2,
            got: samples.len(),
        });
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    Ok(SummaryStats {
        mean,
        std: var.sqrt(),
        n: samples.len() as u64,
    })
}

/// Approximate statistics from bin centers, for histograms without raw samples.
pub fn summarize_histogram(h: &BetaHistogram) -> Result<SummaryStats> {
    if h.n_samples < 2 {
        return Err(Error::TooFew {
            what: "samples",
            need: 2,
            got: h.n_samples as usize,
        });
    }
    let n = h.n_samples as f64;
    let centers: Vec<f64> = h
        .bin_edges
        .windows(2)
        .map(|w| 0.5 * (w[0] + w[1]))
        .collect();
    let mean = centers
        .iter()
        .zip(&h.counts)
        .map(|(c, &k)| c * k as f64)
        .sum::<f64>()
        / n;
    let var = centers
        .iter()
        .zip(&h.counts)
        .map(|(c, &k)| (c - mean).powi(2) * k as f64)
        .sum::<f64>()
        / n;
    Ok(SummaryStats {
        mean,
        std: var.sqrt(),
        n: h.n_samples,
    })
}

/// Running mean and second central moment.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let mean = self.mean + d * other.n as f64 / n as f64;
        let m2 = self.m2 + other.m2 + d * d * (self.n as f64 * other.n as f64 / n as f64);
        Moments { n, mean, m2 }
    }
}

/// Histogram together with statistics of the raw samples behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRun {
    pub histogram: BetaHistogram,
    pub stats: SummaryStats,
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn chunk_bounds(n: u64) -> impl IndexedParallelIterator<Item = (u64, u64)> {
    let chunks = n.div_ceil(CHUNK_SIZE) as usize;
    (0..chunks).into_par_iter().map(move |c| {
        let c = c as u64;
        (c, CHUNK_SIZE.min(n - c * CHUNK_SIZE))
    })
}

/// Draws `n` values of `β` into the default 200-bin histogram.
pub fn sample_beta(scenario: Scenario, n: u64, seed: u64) -> Result<SampleRun> {
    sample_beta_with(scenario, n, seed, &HistogramSpec::default())
}

/// Draws `n` values of `β` into the bins of `spec`, in parallel on the
/// current rayon pool.
pub fn sample_beta_with(
    scenario: Scenario,
    n: u64,
    seed: u64,
    spec: &HistogramSpec,
) -> Result<SampleRun> {
    if n == 0 {
        return Err(Error::TooFew {
            what: "samples",
            need: 1,
            got: 0,
        });
    }
    let parts: Vec<(Vec<u64>, Moments)> = chunk_bounds(n)
        .map(|(chunk, len)| {
            let mut rng = chunk_rng(seed, chunk);
            let mut counts = vec![0u64; spec.bins()];
            let mut moments = Moments::default();
            for _ in 0..len {
                let beta = scenario.sample(&mut rng);
                counts[spec.bin_of(beta)] += 1;
                moments.push(beta);
            }
            (counts, moments)
        })
        .collect();

    let mut counts = vec![0u64; spec.bins()];
    let mut moments = Moments::default();
    for (part, m) in parts {
        for (total, c) in counts.iter_mut().zip(part) {
            *total += c;
        }
        moments = moments.merge(m);
    }
    Ok(SampleRun {
        histogram: BetaHistogram {
            bin_edges: spec.edges().to_vec(),
            counts,
            n_samples: n,
            seed,
            scenario,
        },
        stats: SummaryStats {
            mean: moments.mean,
            std: (moments.m2 / moments.n as f64).sqrt(),
            n,
        },
    })
}

/// The raw stream of `β` values that [`sample_beta`] bins, in order.
pub fn sample_values(scenario: Scenario, n: u64, seed: u64) -> Vec<f64> {
    let parts: Vec<Vec<f64>> = chunk_bounds(n)
        .map(|(chunk, len)| {
            let mut rng = chunk_rng(seed, chunk);
            (0..len).map(|_| scenario.sample(&mut rng)).collect()
        })
        .collect();
    parts.concat()
}

fn check_open_unit(beta: f64) -> Result<()> {
    if beta > 1.0 && beta < 2.0 {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            what: "beta",
            value: beta,
            domain:
                "the open interval (1, 2); the density has integrable singularities at both ends",
        })
    }
}

/// Density of `β` in the equal-phase scenario,
/// `ρ(β) = (4/π) / (β² √(1 − (4/β − 3)²))`.
///
/// Evaluated through the factorization `1 − (4/β − 3)² = 8(β−1)(2−β)/β²`,
/// i.e. `ρ(β) = (√2/π) / (β √((β−1)(2−β)))`, which keeps full relative
/// precision near both singular endpoints.
pub fn density_equal_phase(beta: f64) -> Result<f64> {
    check_open_unit(beta)?;
    Ok(SQRT_2 / PI / (beta * ((beta - 1.0) * (2.0 - beta)).sqrt()))
}

/// Which endpoint an asymptotic form applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    NearOne,
    NearTwo,
}

/// Leading behavior of [`density_equal_phase`] at an endpoint:
/// `(1/π)√(2/(β−1))` near 1 and `1/(π√(2(2−β)))` near 2.
pub fn density_edge_approx(beta: f64, edge: Edge) -> Result<f64> {
    check_open_unit(beta)?;
    Ok(match edge {
        Edge::NearOne => (2.0 / (beta - 1.0)).sqrt() / PI,
        Edge::NearTwo => 1.0 / (PI * (2.0 * (2.0 - beta)).sqrt()),
    })
}

/// `ρ(1+δ)/ρ(2−δ)`, which tends to 2 as `δ → 0`.
pub fn edge_ratio(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::OutOfDomain {
            what: "delta",
            value: delta,
            domain: "(0, 0.5)",
        });
    }
    Ok(density_equal_phase(1.0 + delta)? / density_equal_phase(2.0 - delta)?)
}

/// Writes `beta,rho,rho_near1,rho_near2` rows for each grid point.
pub fn write_density_csv<W: Write>(grid: &[f64], mut w: W) -> Result<(), DensityCsvError> {
    let mut rows = Vec::with_capacity(grid.len());
    for &b in grid {
        rows.push((
            b,
            density_equal_phase(b)?,
            density_edge_approx(b, Edge::NearOne)?,
            density_edge_approx(b, Edge::NearTwo)?,
        ));
    }
    writeln!(w, "beta,rho,rho_near1,rho_near2")?;
    for (b, rho, n1, n2) in rows {
        writeln!(
            w,
            "{},{},{},{}",
            fmt_real(b),
            fmt_real(rho),
            fmt_real(n1),
            fmt_real(n2)
        )?;
    }
    Ok(())
}

/// Failure while producing a density CSV.
#[derive(Debug, thiserror::Error)]
pub enum DensityCsvError {
    #[error(transparent)]
    Domain(#[from] Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}
