//! Probability that appending a noisy column keeps κ under control.

use alloc::vec::Vec;

use super::report::ChainBoundReport;
use crate::linalg::{cond, DenseMatrix};
use crate::math::*;
use crate::specfun::{noncentral_f_sf, TailProbability};
use crate::{Error, Result};

/// `r₀ = 1/√(1 + (ε₁/ε₂)²)`: the residual threshold in the tail event.
pub fn residual_threshold(eps1: f64, eps2: f64) -> f64 {
    let t = eps1 / eps2;
    1.0 / hypot(1.0, t)
}

/// `(1 + √(1 − r²))/r`, decreasing on `(0, 1]`.
pub fn unit_q_factor(r: f64) -> f64 {
    (1.0 + sqrt((1.0 - r) * (1.0 + r))) / r
}

/// Growth factor `g = t + √(1 + t²)` with `t = ε₁/ε₂`; equals
/// `unit_q_factor(residual_threshold(ε₁, ε₂))`.
pub fn growth_factor(eps1: f64, eps2: f64) -> f64 {
    let t = eps1 / eps2;
    t + hypot(1.0, t)
}

/// The prefactor `ε₁√(1 + (ε₁/ε₂)²)` as printed. It can fall below 1, which
/// no bound on κ([B, q]) with orthonormal `B` can do.
pub fn printed_growth_factor(eps1: f64, eps2: f64) -> f64 {
    eps1 * hypot(1.0, eps1 / eps2)
}

fn check_args(m: usize, n: usize, x_norm: f64, sigma: f64, eps1: f64, eps2: f64) -> Result<()> {
    if n >= m {
        return Err(Error::DimensionMismatch { expected: m - 1, found: n });
    }
    if !(x_norm >= 0.0) || !x_norm.is_finite() {
        return Err(Error::domain("x_norm must be finite and nonnegative", x_norm));
    }
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::domain("sigma must be finite and nonnegative", sigma));
    }
    if !(eps1 >= 0.0) {
        return Err(Error::domain("eps1 must be nonnegative", eps1));
    }
    if !(eps2 > 0.0) {
        return Err(Error::domain("eps2 must be positive", eps2));
    }
    Ok(())
}

/// `P(‖r‖ ≥ r₀(ε₁, ε₂))` for the normalised noisy residual against an
/// `n`-dimensional subspace of `ℝ^m`:
///
/// `F'_sf(m−n, n; λ = ‖X‖²/σ²) at n ε₂² / ((m−n) ε₁²)`.
///
/// The ratio of squared norms is what is F-distributed, so the ε ratio enters
/// squared and σ cancels. Degenerate cases are exact: `σ = 0` or `n = 0` give
/// `‖r‖ = 1`, and `ε₁ = 0` asks for `‖r‖ ≥ 1`, which has probability zero.
pub fn residual_tail_prob(
    m: usize,
    n: usize,
    x_norm: f64,
    sigma: f64,
    eps1: f64,
    eps2: f64,
) -> Result<TailProbability> {
    check_args(m, n, x_norm, sigma, eps1, eps2)?;
    if sigma == 0.0 || n == 0 {
        return Ok(TailProbability::exact(1.0));
    }
    if eps1 == 0.0 {
        return Ok(TailProbability::exact(0.0));
    }
    let (d1, d2) = ((m - n) as f64, n as f64);
    let ratio = eps2 / eps1;
    let lambda = (x_norm / sigma) * (x_norm / sigma);
    noncentral_f_sf(d1, d2, lambda, d2 * ratio * ratio / d1)
}

/// The same probability with the unsquared ratio `n ε₂ / ((m−n) ε₁)` as printed.
/// Kept for side-by-side comparison only.
pub fn residual_tail_prob_printed(
    m: usize,
    n: usize,
    x_norm: f64,
    sigma: f64,
    eps1: f64,
    eps2: f64,
) -> Result<TailProbability> {
    check_args(m, n, x_norm, sigma, eps1, eps2)?;
    if sigma == 0.0 || n == 0 {
        return Ok(TailProbability::exact(1.0));
    }
    if eps1 == 0.0 {
        return Ok(TailProbability::exact(0.0));
    }
    let (d1, d2) = ((m - n) as f64, n as f64);
    let lambda = (x_norm / sigma) * (x_norm / sigma);
    noncentral_f_sf(d1, d2, lambda, d2 * eps2 / (d1 * eps1))
}

/// κ([B, q]) bound for a noisy unit column `q` and the probability it holds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthBound {
    pub kappa_b: f64,
    /// [`growth_factor`].
    pub factor: f64,
    pub kappa_bound: f64,
    /// [`printed_growth_factor`], for comparison.
    pub printed_factor: f64,
    pub printed_kappa_bound: f64,
    /// Residual threshold `r₀`.
    pub threshold: f64,
    pub probability: TailProbability,
}

/// Bound on κ([B, (X+Y)/‖X+Y‖]) with `X ⊥ span(B)` and `Y ~ N(0, σ²I)`.
pub fn kappa_growth_prob(
    b: &DenseMatrix,
    x_norm: f64,
    sigma: f64,
    eps1: f64,
    eps2: f64,
) -> Result<GrowthBound> {
    let (m, n) = (b.rows(), b.cols());
    if n == 0 || n >= m {
        return Err(Error::DimensionMismatch { expected: m - 1, found: n });
    }
    let probability = residual_tail_prob(m, n, x_norm, sigma, eps1, eps2)?;
    let kappa_b = cond(b).map_err(|_| {
        let s = crate::linalg::singular_values(b).map(|s| (s.min(), s.max())).unwrap_or((0.0, 0.0));
        Error::RankDeficient { sigma_min: s.0, sigma_max: s.1 }
    })?;
    let factor = growth_factor(eps1, eps2);
    let printed_factor = printed_growth_factor(eps1, eps2);
    Ok(GrowthBound {
        kappa_b,
        factor,
        kappa_bound: kappa_b * factor,
        printed_factor,
        printed_kappa_bound: kappa_b * printed_factor,
        threshold: residual_threshold(eps1, eps2),
        probability,
    })
}

/// Union bound over a noisy Gram-Schmidt run producing `n` unit columns in ℝ^m.
///
/// Step `i` (2 ≤ i ≤ n) appends to `i − 1` computed columns, so its success
/// probability is `residual_tail_prob(m, i − 1, ‖a_i‖, σ, ε₁ᵢ, ε₂ᵢ)`.
/// Slices are indexed by `i − 2`.
pub fn qr_chain_bound(
    m: usize,
    n: usize,
    a_norms: &[f64],
    sigma: f64,
    eps1: &[f64],
    eps2: &[f64],
) -> Result<ChainBoundReport> {
    if n == 0 || n > m {
        return Err(Error::DimensionMismatch { expected: m, found: n });
    }
    let steps = n - 1;
    for len in [a_norms.len(), eps1.len(), eps2.len()] {
        if len != steps {
            return Err(Error::DimensionMismatch { expected: steps, found: len });
        }
    }
    let mut per_step_factors = Vec::with_capacity(steps);
    let mut step_probabilities = Vec::with_capacity(steps);
    let mut miss = 0.0;
    for k in 0..steps {
        let i = k + 2;
        if !(eps1[k] > 0.0) {
            return Err(Error::domain("eps1 must be positive", eps1[k]));
        }
        per_step_factors.push(growth_factor(eps1[k], eps2[k]));
        let p = residual_tail_prob(m, i - 1, a_norms[k], sigma, eps1[k], eps2[k])?;
        miss += 1.0 - p.value();
        step_probabilities.push(p);
    }
    Ok(ChainBoundReport {
        kappa_product_bound: per_step_factors.iter().product(),
        per_step_factors,
        probability_lower_bound: (1.0 - miss).clamp(0.0, 1.0),
        step_probabilities,
    })
}
