//! Gaussian wavepackets on a line under free evolution.
//!
//! A packet with center `x₀`, wavenumber `k` and width `σ` starts as
//!
//! ```text
//! ψ(x, 0) = σ^{-1/2} (2/π)^{1/4} exp(−((x − x₀)/σ)² + i k x)
//! ```
//!
//! and evolves under `i ∂ψ/∂t = −(ħ/2m) ∂²ψ/∂x²`. The counter-propagating
//! pair used throughout has one packet at `+x₀` moving left (wavenumber
//! `−k`) and one at `−x₀` moving right (`+k`); see [`counter_propagating`].
//!
//! Both packets evolve under the same propagator, so their overlap, and
//! with it the ratio of boson to distinguishable coincidence densities, is
//! the same at every `(x, t)`.

use std::f64::consts::{FRAC_2_PI, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadConfig};

/// Quadrature reaches this many widths past the outermost packet center.
pub const QUADRATURE_HALF_WIDTHS: f64 = 12.0;

/// A free Gaussian wavepacket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    /// Center at `t = 0`.
    pub center: f64,
    /// Signed wavenumber; the packet moves with velocity `(ħ/m)·k`.
    pub wavenumber: f64,
    /// Width `σ` at `t = 0`; `|ψ|²` has standard deviation `σ/2`.
    pub sigma: f64,
    /// `ħ/m` in length²/time.
    pub hbar_over_m: f64,
}

impl GaussianPacket {
    pub fn new(center: f64, wavenumber: f64, sigma: f64) -> Result<Self> {
        Self::with_hbar_over_m(center, wavenumber, sigma, 1.0)
    }

    pub fn with_hbar_over_m(
        center: f64,
        wavenumber: f64,
        sigma: f64,
        hbar_over_m: f64,
    ) -> Result<Self> {
        if ![center, wavenumber, sigma, hbar_over_m]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(Error::NonFinite("packet parameters"));
        }
        if sigma <= 0.0 {
            return Err(Error::OutOfDomain {
                what: "sigma",
                value: sigma,
                domain: "(0, ∞)",
            });
        }
        if hbar_over_m <= 0.0 {
            return Err(Error::OutOfDomain {
                what: "hbar_over_m",
                value: hbar_over_m,
                domain: "(0, ∞)",
            });
        }
        Ok(Self {
            center,
            wavenumber,
            sigma,
            hbar_over_m,
        })
    }

    /// Center of the envelope at time `t`.
    pub fn center_at(&self, t: f64) -> f64 {
        self.center + self.hbar_over_m * self.wavenumber * t
    }

    /// Width `σ(t) = σ √(1 + (2ħt/mσ²)²)`.
    pub fn width_at(&self, t: f64) -> f64 {
        self.sigma * (1.0 + self.spread(t).powi(2)).sqrt()
    }

    fn spread(&self, t: f64) -> f64 {
        2.0 * self.hbar_over_m * t / (self.sigma * self.sigma)
    }

    /// `ψ(x, t)`.
    pub fn amplitude_at(&self, x: f64, t: f64) -> Complex64 {
        let prefactor = FRAC_2_PI.sqrt().sqrt() / self.sigma.sqrt();
        let k = self.wavenumber;
        let h = self.hbar_over_m;
        let denom = Complex64::new(1.0, self.spread(t));
        let dx = x - self.center_at(t);
        let envelope = -(dx * dx) / (self.sigma * self.sigma) / denom;
        let phase = Complex64::new(0.0, k * x - 0.5 * h * k * k * t);
        prefactor * (envelope + phase).exp() / denom.sqrt()
    }
}

/// The packet pair at `±x₀` moving toward each other (for `x₀, k > 0`):
/// the first at `+x₀` with wavenumber `−k`, the second at `−x₀` with `+k`.
pub fn counter_propagating(
    x0: f64,
    k: f64,
    sigma: f64,
) -> Result<(GaussianPacket, GaussianPacket)> {
    Ok((
        GaussianPacket::new(x0, -k, sigma)?,
        GaussianPacket::new(-x0, k, sigma)?,
    ))
}

/// Time for the pair from [`counter_propagating`] to reach the origin, `x₀/((ħ/m)k)`.
pub fn crossing_time(x0: f64, k: f64, hbar_over_m: f64) -> Result<f64> {
    let v = hbar_over_m * k;
    if v == 0.0 || !v.is_finite() || !x0.is_finite() {
        return Err(Error::InvalidArgument(
            "crossing time needs a nonzero finite velocity".into(),
        ));
    }
    Ok((x0 / v).abs())
}

/// `|I| = exp(−2x₀²/σ² − k²σ²/2)` for the symmetric counter-propagating pair.
pub fn symmetric_overlap(x0: f64, k: f64, sigma: f64) -> Result<f64> {
    check_geometry(x0, k, sigma)?;
    let r = x0 / sigma;
    let ks = k * sigma;
    Ok((-2.0 * r * r - 0.5 * ks * ks).exp())
}

fn check_geometry(x0: f64, k: f64, sigma: f64) -> Result<()> {
    if ![x0, k, sigma].iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("packet parameters"));
    }
    if sigma <= 0.0 {
        return Err(Error::OutOfDomain {
            what: "sigma",
            value: sigma,
            domain: "(0, ∞)",
        });
    }
    Ok(())
}

/// Closed-form `⟨g₁|g₂⟩ = ∫ψ₁*ψ₂ dx` for equal widths, `None` otherwise.
pub fn overlap_closed_form(g1: &GaussianPacket, g2: &GaussianPacket) -> Option<Complex64> {
    if g1.sigma != g2.sigma {
        return None;
    }
    let s = g1.sigma;
    let d = g1.center - g2.center;
    let dk = g2.wavenumber - g1.wavenumber;
    let mid = 0.5 * (g1.center + g2.center);
    let modulus = (-d * d / (2.0 * s * s) - dk * dk * s * s / 8.0).exp();
    Some(Complex64::from_polar(modulus, dk * mid))
}

fn quadrature_range(packets: &[&GaussianPacket], t: f64) -> (f64, f64) {
    let w = packets
        .iter()
        .map(|g| g.width_at(t))
        .fold(0.0_f64, f64::max);
    let lo = packets
        .iter()
        .map(|g| g.center_at(t))
        .fold(f64::INFINITY, f64::min);
    let hi = packets
        .iter()
        .map(|g| g.center_at(t))
        .fold(f64::NEG_INFINITY, f64::max);
    (
        lo - QUADRATURE_HALF_WIDTHS * w,
        hi + QUADRATURE_HALF_WIDTHS * w,
    )
}

/// `∫ψ₁*(x, t) ψ₂(x, t) dx` by adaptive quadrature.
pub fn overlap_quadrature(g1: &GaussianPacket, g2: &GaussianPacket, t: f64) -> Result<Complex64> {
    let (a, b) = quadrature_range(&[g1, g2], t);
    let r = integrate(
        |x| g1.amplitude_at(x, t).conj() * g2.amplitude_at(x, t),
        a,
        b,
        QuadConfig::default(),
    )?;
    Ok(r.value)
}

/// `∫|ψ(x, t)|² dx` by adaptive quadrature.
pub fn norm_quadrature(g: &GaussianPacket, t: f64) -> Result<f64> {
    let (a, b) = quadrature_range(&[g], t);
    Ok(integrate(
        |x| g.amplitude_at(x, t).norm_sqr(),
        a,
        b,
        QuadConfig::default(),
    )?
    .value)
}

/// `|⟨g₁|g₂⟩|` at `t = 0`: closed form for equal widths, quadrature otherwise.
pub fn overlap_gaussian(g1: &GaussianPacket, g2: &GaussianPacket) -> Result<f64> {
    match overlap_closed_form(g1, g2) {
        Some(i) => Ok(i.norm()),
        None => Ok(overlap_quadrature(g1, g2, 0.0)?.norm().min(1.0)),
    }
}

/// `|⟨g₁(t)|g₂(t)⟩|` by quadrature; constant in `t` for a shared `ħ/m`.
pub fn overlap_invariance_check(g1: &GaussianPacket, g2: &GaussianPacket, t: f64) -> Result<f64> {
    Ok(overlap_quadrature(g1, g2, t)?.norm())
}

/// `β = 2/(1 + exp(−4x₀²/σ² − k²σ²))` for the counter-propagating pair.
pub fn beta_gaussian(x0: f64, k: f64, sigma: f64) -> Result<f64> {
    let i = symmetric_overlap(x0, k, sigma)?;
    Ok(2.0 / (1.0 + i * i))
}

/// The width that maximizes the overlap at fixed `x₀` and `k`, and the
/// resulting (smallest attainable) `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalWidth {
    pub sigma: f64,
    pub beta: f64,
}

/// `σ = √(2x₀/k)` and `β = 2/(1 + e^{−4kx₀})`.
pub fn beta_optimal_width(x0: f64, k: f64) -> Result<OptimalWidth> {
    for (what, value) in [("x0", x0), ("k", k)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::OutOfDomain {
                what,
                value,
                domain: "(0, ∞)",
            });
        }
    }
    Ok(OptimalWidth {
        sigma: (2.0 * x0 / k).sqrt(),
        beta: 2.0 / (1.0 + (-4.0 * k * x0).exp()),
    })
}

/// Coincidence densities for both particles at the same point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialDensityPair {
    pub p_boson_density: f64,
    pub p_dist_density: f64,
}

impl SpatialDensityPair {
    /// `p_B/p_D`, undefined where the distinguishable density underflows.
    pub fn ratio(&self) -> Option<f64> {
        (self.p_dist_density > crate::pair::MIN_RATIO_DENOMINATOR)
            .then(|| self.p_boson_density / self.p_dist_density)
    }
}

/// `p_B(x,t) = 2|ψ₁ψ₂|²/(1+|I|²)` and `p_D(x,t) = |ψ₁ψ₂|²`.
pub fn spatial_densities(
    g1: &GaussianPacket,
    g2: &GaussianPacket,
    x: f64,
    t: f64,
) -> Result<SpatialDensityPair> {
    if g1.hbar_over_m != g2.hbar_over_m {
        return Err(Error::InvalidArgument(
            "both packets must evolve with the same ħ/m".into(),
        ));
    }
    let i = overlap_gaussian(g1, g2)?;
    let p_dist_density = (g1.amplitude_at(x, t) * g2.amplitude_at(x, t)).norm_sqr();
    Ok(SpatialDensityPair {
        p_boson_density: 2.0 * p_dist_density / (1.0 + i * i),
        p_dist_density,
    })
}

/// `(2/π)^{1/4}`, the peak amplitude of a unit-width packet at rest.
pub fn unit_peak_amplitude() -> f64 {
    (2.0 / PI).powf(0.25)
}
