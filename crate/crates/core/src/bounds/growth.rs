//! Growth of κ when a perturbed orthogonal column `γ(x + y)` is appended.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::report::{BoundInputs, BoundKind, BoundReport, Relation};
use crate::linalg::{append_column, cond_or_inf, norm2, singular_values, DenseMatrix};
use crate::math::*;
use crate::{Error, Result};

/// Tolerance for `x ⊥ span(B)`: `‖Bᵀx‖ ≤ tol·‖B‖‖x‖`.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-10;

fn upper(kind: BoundKind, bound: f64, inputs: BoundInputs) -> BoundReport {
    BoundReport {
        kind,
        relation: Relation::Upper,
        bound_value: bound,
        actual_value: None,
        inputs,
        preconditions_met: true,
        explanation: String::new(),
    }
}

/// The two radicals `γ²s² ± √(γ⁴s⁴ + 4γ²‖Bᵀy‖²)` appearing in both bounds.
fn radicals(gamma: f64, xy_norm: f64, bty_norm: f64) -> (f64, f64) {
    let g2s2 = gamma * gamma * xy_norm * xy_norm;
    let d = hypot(g2s2, 2.0 * abs(gamma) * bty_norm);
    (g2s2, d)
}

/// Scalar form of [`kappa_bound_general`].
pub fn kappa_bound_general_scalar(
    sigma_max: f64,
    sigma_min: f64,
    gamma: f64,
    xy_norm: f64,
    bty_norm: f64,
) -> Result<BoundReport> {
    if gamma == 0.0 || !gamma.is_finite() {
        return Err(Error::domain("gamma must be finite and nonzero", gamma));
    }
    let inputs = BoundInputs {
        sigma_max: Some(sigma_max),
        sigma_min: Some(sigma_min),
        gamma: Some(gamma),
        xy_norm: Some(xy_norm),
        bty_norm: Some(bty_norm),
        ..BoundInputs::default()
    };
    let (g2s2, d) = radicals(gamma, xy_norm, bty_norm);
    let num = 2.0 * sigma_max * sigma_max + g2s2 + d;
    let den = 2.0 * sigma_min * sigma_min + g2s2 - d;
    let report = upper(BoundKind::General, f64::INFINITY, inputs);
    if !(den > 0.0) {
        return Ok(report.unmet("denominator 2σ_min² + γ²‖x+y‖² − √(γ⁴‖x+y‖⁴ + 4γ²‖Bᵀy‖²) is not positive"));
    }
    Ok(BoundReport { bound_value: sqrt(num / den), ..report })
}

/// Upper bound on κ([B, γ(x+y)]) for `x ⊥ span(B)`, as printed.
///
/// This formula does not hold in general: with `y = 0` it stays near 1 while
/// κ = 1/γ for small γ. [`weyl_kappa_bound`] is a valid replacement.
pub fn kappa_bound_general(
    b: &DenseMatrix,
    x: &[f64],
    y: &[f64],
    gamma: f64,
) -> Result<BoundReport> {
    let (xy, s) = perturbed_column(b, x, y)?;
    let bty = norm2(&b.tr_mul_vec(y)?);
    let mut report = kappa_bound_general_scalar(s.0, s.1, gamma, norm2(&xy), bty)?;
    report.actual_value = Some(cond_or_inf(&append_column(b, &xy, gamma)?));
    check_orthogonal(b, x, s.0, report)
}

/// Scalar form of [`kappa_bound_eps`].
pub fn kappa_bound_eps_scalar(
    sigma_max: f64,
    sigma_min: f64,
    xy_norm: f64,
    bty_norm: f64,
    eps: f64,
) -> Result<BoundReport> {
    if !(xy_norm > 0.0) {
        return Err(Error::domain("x + y must be nonzero", xy_norm));
    }
    if !(sigma_min > 0.0) {
        return Err(Error::RankDeficient { sigma_min, sigma_max });
    }
    let kappa = sigma_max / sigma_min;
    let inputs = BoundInputs {
        sigma_max: Some(sigma_max),
        sigma_min: Some(sigma_min),
        xy_norm: Some(xy_norm),
        bty_norm: Some(bty_norm),
        eps: Some(eps),
        kappa_b: Some(kappa),
        ..BoundInputs::default()
    };
    let t = bty_norm / xy_norm;
    let lhs = sqrt(1.0 + 4.0 * t * t);
    let mut report = upper(BoundKind::Eps, f64::INFINITY, inputs);
    report.explanation = format!(
        "hypothesis sqrt(1+4t^2) = {lhs:.6e} <= eps with t = |B'y|/|x+y| = {t:.6e}; \
         stated form t <= (eps^2-1)/4 is {}",
        if t <= (eps * eps - 1.0) / 4.0 { "satisfied" } else { "not satisfied" }
    );
    if !(lhs <= eps) {
        return Ok(report.unmet("hypothesis sqrt(1+4t^2) <= eps violated"));
    }
    let den = 2.0 * sigma_min * sigma_min + 1.0 - eps;
    if !(den > 0.0) {
        return Ok(report.unmet("denominator 2σ_min² + 1 − ε is not positive"));
    }
    let ik2 = 1.0 / (kappa * kappa);
    let f = (eps * (1.0 + ik2) - (1.0 - ik2)) / den;
    report.bound_value = kappa * sqrt(1.0 + f);
    Ok(report)
}

/// Upper bound on κ([B, (x+y)/‖x+y‖]) under the hypothesis
/// `√(1 + 4‖Bᵀy‖²/‖x+y‖²) ≤ ε`, as printed. Fails for the same reason as
/// [`kappa_bound_general`], of which it is the `γ = 1/‖x+y‖` case.
pub fn kappa_bound_eps(b: &DenseMatrix, x: &[f64], y: &[f64], eps: f64) -> Result<BoundReport> {
    let (xy, s) = perturbed_column(b, x, y)?;
    let bty = norm2(&b.tr_mul_vec(y)?);
    let xy_norm = norm2(&xy);
    let mut report = kappa_bound_eps_scalar(s.0, s.1, xy_norm, bty, eps)?;
    report.actual_value = Some(cond_or_inf(&append_column(b, &xy, 1.0 / xy_norm)?));
    check_orthogonal(b, x, s.0, report)
}

/// A valid bound for the same setting, from Weyl's inequality applied to
/// `diag(BᵀB, γ²‖x+y‖²) + [[0, γBᵀy], [γyᵀB, 0]]`:
///
/// `κ² ≤ (max(σ_max², γ²s²) + |γ|‖Bᵀy‖) / (min(σ_min², γ²s²) − |γ|‖Bᵀy‖)`.
pub fn weyl_kappa_bound(sigma_max: f64, sigma_min: f64, gamma: f64, xy_norm: f64, bty_norm: f64) -> f64 {
    let g2s2 = gamma * gamma * xy_norm * xy_norm;
    let off = abs(gamma) * bty_norm;
    let num = (sigma_max * sigma_max).max(g2s2) + off;
    let den = (sigma_min * sigma_min).min(g2s2) - off;
    if den > 0.0 {
        sqrt(num / den)
    } else {
        f64::INFINITY
    }
}

/// `x + y` together with (σ_max(B), σ_min(B)).
fn perturbed_column(b: &DenseMatrix, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, (f64, f64))> {
    if x.len() != b.rows() || y.len() != b.rows() {
        return Err(Error::DimensionMismatch { expected: b.rows(), found: x.len().min(y.len()) });
    }
    let xy: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
    let s = singular_values(b)?;
    let smin = if b.cols() > b.rows() { 0.0 } else { s.min() };
    Ok((xy, (s.max(), smin)))
}

fn check_orthogonal(b: &DenseMatrix, x: &[f64], sigma_max: f64, report: BoundReport) -> Result<BoundReport> {
    let btx = norm2(&b.tr_mul_vec(x)?);
    if btx > ORTHOGONALITY_TOLERANCE * sigma_max * norm2(x) {
        return Ok(report.unmet("x is not orthogonal to span(B)"));
    }
    Ok(report)
}
