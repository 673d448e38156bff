//! Acceptance suite: each criterion runs at its pinned tolerance and
//! runtime budget and prints one `[PASS]` or `[FAIL]` line.

use std::f64::consts::{E, SQRT_2, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use bunchlab_core::ensemble::{
    density_edge_approx, density_equal_phase, edge_ratio, sample_beta, sample_beta_with, Edge,
    HistogramSpec, Scenario,
};
use bunchlab_core::gaussian::{
    beta_gaussian, beta_optimal_width, counter_propagating, crossing_time, overlap_closed_form,
    overlap_gaussian, overlap_invariance_check, overlap_quadrature, spatial_densities,
};
use bunchlab_core::multi::{beta_q, factorial, gram_matrix, permanent_naive, permanent_ryser};
use bunchlab_core::pair::{bunching_parameter, joint_prob_boson, joint_prob_distinguishable};
use bunchlab_core::quad::{integrate, QuadConfig};
use bunchlab_core::states::{
    beam_splitter, overlap, overlap_sq_two_mode, two_mode_state, PureState, UnitaryMatrix,
};
use bunchlab_core::{Complex64, PairOutcome, TwoModeParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    check: fn() -> Outcome,
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_params<R: Rng>(r: &mut R) -> TwoModeParams {
    TwoModeParams {
        theta: r.random::<f64>() * TAU,
        mu: r.random::<f64>() * TAU,
    }
}

fn beam_splitter_values() -> Outcome {
    let bs = beam_splitter();
    let up = PureState::basis(2, 0).unwrap();
    let down = PureState::basis(2, 1).unwrap();
    let r = bs.apply(&up).unwrap();
    let l = bs.apply(&down).unwrap();
    let same = PairOutcome::same(0);
    let checks = [
        (
            "p_B orthogonal",
            joint_prob_boson(&r, &l, same).unwrap(),
            0.5,
        ),
        (
            "p_D orthogonal",
            joint_prob_distinguishable(&r, &l, same).unwrap(),
            0.25,
        ),
        ("β orthogonal", bunching_parameter(&r, &l).unwrap(), 2.0),
        (
            "p_B identical",
            joint_prob_boson(&r, &r, same).unwrap(),
            0.25,
        ),
        ("β identical", bunching_parameter(&r, &r).unwrap(), 1.0),
    ];
    let mut worst = 0.0f64;
    for (what, got, want) in checks {
        let dev = (got - want).abs();
        ensure(dev < 1e-12, || format!("{what} = {got}, expected {want}"))?;
        worst = worst.max(dev);
    }
    Ok(format!("max deviation {worst:.1e}"))
}

fn hamiltonian_independence() -> Outcome {
    let mut r = rng(2);
    let mut worst = 0.0f64;
    for pair in 0..100 {
        let dim = 2 + pair % 7;
        let a = PureState::random(dim, &mut r).unwrap();
        let b = PureState::random(dim, &mut r).unwrap();
        let before = bunching_parameter(&a, &b).unwrap();
        for _ in 0..20 {
            let u = UnitaryMatrix::random(dim, &mut r).unwrap();
            let after = bunching_parameter(&u.apply(&a).unwrap(), &u.apply(&b).unwrap()).unwrap();
            worst = worst.max((after - before).abs());
        }
    }
    ensure(worst < 1e-12, || format!("max |Δβ| = {worst:e}"))?;
    Ok(format!("2000 evolutions, max |Δβ| {worst:.1e}"))
}

fn closed_form_validation() -> Outcome {
    let mut r = rng(3);
    let (mut worst_i, mut worst_b) = (0.0f64, 0.0f64);
    for _ in 0..100_000 {
        let (p1, p2) = (random_params(&mut r), random_params(&mut r));
        let (s1, s2) = (two_mode_state(p1), two_mode_state(p2));
        let direct = overlap(&s1, &s2).unwrap().norm_sqr();
        worst_i = worst_i.max((overlap_sq_two_mode(p1, p2) - direct).abs());
        let closed = bunchlab_core::pair::beta_two_mode(p1, p2);
        worst_b = worst_b.max((closed - bunching_parameter(&s1, &s2).unwrap()).abs());
    }
    ensure(worst_i < 1e-12 && worst_b < 1e-12, || {
        format!("max overlap dev {worst_i:e}, max β dev {worst_b:e}")
    })?;
    Ok(format!(
        "10^5 pairs, max |ΔI²| {worst_i:.1e}, max |Δβ| {worst_b:.1e}"
    ))
}

fn monte_carlo_statistics() -> Outcome {
    let cases = [
        (Scenario::General, (1.38, 1.40), (0.29, 0.31)),
        (
            Scenario::EqualPhase,
            (SQRT_2 - 0.005, SQRT_2 + 0.005),
            (0.33, 0.35),
        ),
        (Scenario::EqualAmplitude, (1.17, 1.19), (0.23, 0.25)),
    ];
    let mut summary = Vec::new();
    for (scenario, mean, std) in cases {
        let s = sample_beta(scenario, 1_000_000, 1).unwrap().stats;
        ensure(s.mean >= mean.0 && s.mean <= mean.1, || {
            format!(
                "{scenario} mean {} outside [{}, {}]",
                s.mean, mean.0, mean.1
            )
        })?;
        ensure(s.std >= std.0 && s.std <= std.1, || {
            format!("{scenario} std {} outside [{}, {}]", s.std, std.0, std.1)
        })?;
        summary.push(format!("{scenario} {:.4}±{:.4}", s.mean, s.std));
    }
    Ok(summary.join(", "))
}

/// `∫ρ` over `[lo, hi]` with `β = 1.5 − cos(u)/2`.
fn density_mass(lo: f64, hi: f64) -> f64 {
    let u = |b: f64| (3.0 - 2.0 * b).clamp(-1.0, 1.0).acos();
    let cfg = QuadConfig {
        abs_tol: 1e-11,
        ..QuadConfig::default()
    };
    integrate(
        |s: f64| density_equal_phase(1.5 - 0.5 * s.cos()).unwrap() * 0.5 * s.sin(),
        u(lo),
        u(hi),
        cfg,
    )
    .unwrap()
    .value
}

fn analytic_density() -> Outcome {
    let total = density_mass(1.0, 2.0);
    ensure((total - 1.0).abs() < 1e-6, || format!("∫ρ = {total}"))?;

    let n = 10_000_000u64;
    let spec = HistogramSpec::interior(1.001, 1.999, 200).unwrap();
    let h = sample_beta_with(Scenario::EqualPhase, n, 5, &spec)
        .unwrap()
        .histogram;
    let mut worst = 0.0f64;
    // the first and last bins are the excluded edge slivers
    for (i, w) in h.bin_edges.windows(2).enumerate().skip(1).take(200) {
        let expected = n as f64 * density_mass(w[0], w[1]);
        let z = (h.counts[i] as f64 - expected) / expected.sqrt();
        worst = worst.max(z.abs());
    }
    ensure(worst < 5.0, || format!("worst bin {worst:.2} Poisson σ"))?;

    let near1 =
        density_edge_approx(1.001, Edge::NearOne).unwrap() / density_equal_phase(1.001).unwrap();
    let near2 =
        density_edge_approx(1.999, Edge::NearTwo).unwrap() / density_equal_phase(1.999).unwrap();
    ensure(
        (near1 - 1.0).abs() < 0.01 && (near2 - 1.0).abs() < 0.01,
        || format!("edge forms off by {near1} and {near2}"),
    )?;
    let ratio = edge_ratio(1e-4).unwrap();
    ensure((ratio - 2.0).abs() < 1e-3, || format!("edge ratio {ratio}"))?;
    Ok(format!(
        "∫ρ−1 = {:.1e}, worst bin {worst:.2}σ, edge ratio {ratio:.6}",
        total - 1.0
    ))
}

fn gaussian_overlaps() -> Outcome {
    let sigma = 1.0;
    let mut worst = 0.0f64;
    for r in [0.0, 1.0, 2.0, 3.0] {
        for ks in [0.0, 1.0, 2.0, 3.0] {
            let (a, b) = counter_propagating(r * sigma, ks / sigma, sigma).unwrap();
            let closed = overlap_closed_form(&a, &b).unwrap();
            let quad = overlap_quadrature(&a, &b, 0.0).unwrap();
            worst = worst.max((closed - quad).norm());
        }
    }
    ensure(worst < 1e-10, || {
        format!("closed form vs quadrature {worst:e}")
    })?;

    for (x0, k) in [(1.0, 1.0), (2.0, 0.25), (0.5, 3.0)] {
        let opt = beta_optimal_width(x0, k).unwrap();
        let (lo, hi) = (0.1 * opt.sigma, 3.0 * opt.sigma);
        let step = (hi - lo) / 999.0;
        let best = (0..1000)
            .map(|i| lo + step * i as f64)
            .min_by(|p, q| {
                beta_gaussian(x0, k, *p)
                    .unwrap()
                    .total_cmp(&beta_gaussian(x0, k, *q).unwrap())
            })
            .unwrap();
        ensure((best - opt.sigma).abs() <= step, || {
            format!("scan minimum at σ = {best}, expected {}", opt.sigma)
        })?;
    }

    let b = beta_gaussian(0.0, 1.0, 1.0).unwrap();
    let want = 2.0 / (1.0 + 1.0 / E);
    ensure((b - want).abs() < 1e-12, || {
        format!("β(kσ=1) = {b}, expected {want}")
    })?;
    Ok(format!(
        "max closed-form dev {worst:.1e}; σ-scan minima on optimum"
    ))
}

fn spatio_temporal_constancy() -> Outcome {
    let sigma = 1.0;
    let (x0, k) = (2.0 * sigma, 1.0 / sigma);
    let (a, b) = counter_propagating(x0, k, sigma).unwrap();
    let i0 = overlap_gaussian(&a, &b).unwrap();
    let expected = 2.0 / (1.0 + i0 * i0);
    let t0 = crossing_time(x0, k, 1.0).unwrap();
    let (mut worst_ratio, mut worst_overlap, mut points) = (0.0f64, 0.0f64, 0);
    for t in [0.0, 0.5 * t0, t0, 2.0 * t0, 10.0 * t0] {
        let w = a.width_at(t);
        let lo = a.center_at(t).min(b.center_at(t)) - 3.0 * w;
        let hi = a.center_at(t).max(b.center_at(t)) + 3.0 * w;
        for j in 0..50 {
            let x = lo + (hi - lo) * j as f64 / 49.0;
            if let Some(ratio) = spatial_densities(&a, &b, x, t).unwrap().ratio() {
                worst_ratio = worst_ratio.max((ratio - expected).abs());
                points += 1;
            }
        }
        let it = overlap_invariance_check(&a, &b, t).unwrap();
        worst_overlap = worst_overlap.max((it - i0).abs());
    }
    ensure(worst_ratio < 1e-9, || {
        format!("ratio deviation {worst_ratio:e}")
    })?;
    ensure(worst_overlap < 1e-8, || {
        format!("overlap drift {worst_overlap:e}")
    })?;
    Ok(format!(
        "{points} points, max ratio dev {worst_ratio:.1e}, max overlap drift {worst_overlap:.1e}"
    ))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// `(1/Q!) Σ_P Σ_P' Π_n ⟨ψ_{P(n)}|ψ_{P'(n)}⟩`.
fn literal_norm(states: &[PureState]) -> Complex64 {
    let perms = permutations(states.len());
    let mut total = Complex64::new(0.0, 0.0);
    for p in &perms {
        for pp in &perms {
            total += (0..states.len())
                .map(|n| overlap(&states[p[n]], &states[pp[n]]).unwrap())
                .product::<Complex64>();
        }
    }
    total / perms.len() as f64
}

fn q_particle_enhancement() -> Outcome {
    for q in 2..=12 {
        let states: Vec<_> = (0..q).map(|k| PureState::basis(q, k).unwrap()).collect();
        let beta = beta_q(&states).unwrap().beta;
        let qf = factorial(q).unwrap() as f64;
        ensure(beta == qf, || {
            format!("orthonormal Q={q}: β = {beta}, expected {qf}")
        })?;
    }
    let mut r = rng(8);
    for q in 2..=12 {
        let s = PureState::random(4, &mut r).unwrap();
        let beta = beta_q(&vec![s; q]).unwrap().beta;
        ensure((beta - 1.0).abs() < 1e-12, || {
            format!("identical Q={q}: β = {beta}")
        })?;
    }
    let (mut worst_perm, mut worst_literal) = (0.0f64, 0.0f64);
    for i in 0..1000 {
        let q = 2 + i % 7;
        let dim = r.random_range(2..=8);
        let states: Vec<_> = (0..q)
            .map(|_| PureState::random(dim, &mut r).unwrap())
            .collect();
        let res = beta_q(&states).unwrap();
        let qf = res.q_factorial as f64;
        ensure(res.beta >= 1.0 && res.beta <= qf, || {
            format!("Q={q}: β = {} outside [1, {qf}]", res.beta)
        })?;
        let g = gram_matrix(&states).unwrap();
        let ryser = permanent_ryser(g.matrix()).unwrap();
        let naive = permanent_naive(g.matrix()).unwrap();
        worst_perm = worst_perm.max((ryser - naive).norm() / naive.norm());
        if q <= 5 {
            let literal = literal_norm(&states);
            worst_literal = worst_literal.max((literal - ryser).norm() / literal.norm());
        }
    }
    ensure(worst_perm < 1e-10, || {
        format!("Ryser vs naive {worst_perm:e}")
    })?;
    ensure(worst_literal < 1e-10, || {
        format!("literal sum vs permanent {worst_literal:e}")
    })?;
    Ok(format!(
        "Ryser vs naive {worst_perm:.1e}, literal sum vs permanent {worst_literal:.1e}"
    ))
}

fn cross_module_consistency() -> Outcome {
    let mut r = rng(9);
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let dim = 2 + i % 7;
        let a = PureState::random(dim, &mut r).unwrap();
        let b = PureState::random(dim, &mut r).unwrap();
        let multi = beta_q(&[a.clone(), b.clone()]).unwrap().beta;
        let pair = bunching_parameter(&a, &b).unwrap();
        let formula = 2.0 / (1.0 + overlap(&a, &b).unwrap().norm_sqr());
        worst = worst.max((multi - pair).abs()).max((multi - formula).abs());
    }
    ensure(worst < 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("1000 pairs, max deviation {worst:.1e}"))
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("bunchlab-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let run = |threads: &str, name: &str| -> Result<Vec<u8>, String> {
        let path = dir.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_bunchlab"))
            .args([
                "sample",
                "--scenario",
                "general",
                "--n",
                "1000000",
                "--seed",
                "42",
            ])
            .args(["--threads", threads, "--out"])
            .arg(&path)
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.success(), || format!("sample exited with {status}"))?;
        std::fs::read(&path).map_err(|e| e.to_string())
    };
    let first = run("1", "a.csv")?;
    let second = run("1", "b.csv")?;
    let wide = run("8", "c.csv")?;
    let _ = std::fs::remove_dir_all(&dir);
    ensure(first == second, || "two runs differ".into())?;
    ensure(first == wide, || {
        "--threads 1 and --threads 8 differ".into()
    })?;
    Ok(format!("{} identical bytes across 3 runs", first.len()))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "beam splitter exact values",
            budget: Duration::from_millis(1),
            check: beam_splitter_values,
        },
        Criterion {
            id: 2,
            name: "invariance under common unitary evolution",
            budget: Duration::from_secs(1),
            check: hamiltonian_independence,
        },
        Criterion {
            id: 3,
            name: "two-mode closed forms",
            budget: Duration::from_secs(1),
            check: closed_form_validation,
        },
        Criterion {
            id: 4,
            name: "Monte Carlo ensemble statistics",
            budget: Duration::from_secs(10),
            check: monte_carlo_statistics,
        },
        Criterion {
            id: 5,
            name: "equal-phase analytic density",
            budget: Duration::from_secs(60),
            check: analytic_density,
        },
        Criterion {
            id: 6,
            name: "Gaussian packet overlaps",
            budget: Duration::from_secs(5),
            check: gaussian_overlaps,
        },
        Criterion {
            id: 7,
            name: "spatio-temporal constancy of the ratio",
            budget: Duration::from_secs(10),
            check: spatio_temporal_constancy,
        },
        Criterion {
            id: 8,
            name: "Q-particle enhancement",
            budget: Duration::from_secs(30),
            check: q_particle_enhancement,
        },
        Criterion {
            id: 9,
            name: "two-particle cross-module consistency",
            budget: Duration::from_secs(1),
            check: cross_module_consistency,
        },
        Criterion {
            id: 10,
            name: "sampling determinism",
            budget: Duration::from_secs(10),
            check: determinism,
        },
    ];

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result =
            catch_unwind(AssertUnwindSafe(c.check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed <= c.budget {
                Ok(detail)
            } else {
                Err(format!(
                    "{detail}; took {elapsed:.2?}, budget {:.2?}",
                    c.budget
                ))
            }
        });
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {:>2}. {} ({elapsed:.2?}): {detail}", c.id, c.name);
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
