//! Bounds for `[B, cγ]` expressed through the orthonormal factor of `B`.

use alloc::string::String;

use super::liesen::liesen_kappa_from_residual;
use super::report::{BoundInputs, BoundKind, BoundReport, Relation};
use super::prob::unit_q_factor;
use crate::linalg::{
    append_column, cond_or_inf, householder_qr, ls_residual_norm, norm2, singular_values,
    DenseMatrix, SingularSpectrum,
};
use crate::math::*;
use crate::{Error, Result};

/// Column norms must equal one to this absolute tolerance.
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// Smallest singular value in the `λ_min(AᵀA)` sense: zero for wide matrices.
fn sigma_min(a: &DenseMatrix, s: &SingularSpectrum) -> f64 {
    if a.cols() > a.rows() {
        0.0
    } else {
        s.min()
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("gamma must be positive", gamma))
    }
}

fn report(kind: BoundKind, relation: Relation, bound: f64, actual: f64, inputs: BoundInputs) -> BoundReport {
    BoundReport {
        kind,
        relation,
        bound_value: bound,
        actual_value: Some(actual),
        inputs,
        preconditions_met: true,
        explanation: String::new(),
    }
}

/// Upper bound on σ_max([B, cγ]) and lower bound on σ_min([B, cγ]) in terms of
/// `[Q, c]`, where `B = QR`.
pub fn minmax_singular_bounds(
    b: &DenseMatrix,
    c: &[f64],
    gamma: f64,
) -> Result<(BoundReport, BoundReport)> {
    check_gamma(gamma)?;
    let q = householder_qr(b)?.q;
    let sb = singular_values(b)?;
    let qc = append_column(&q, c, 1.0)?;
    let sqc = singular_values(&qc)?;
    let bc = append_column(b, c, gamma)?;
    let sbc = singular_values(&bc)?;

    let inputs = BoundInputs {
        sigma_max: Some(sb.max()),
        sigma_min: Some(sb.min()),
        gamma: Some(gamma),
        c_norm: Some(norm2(c)),
        ..BoundInputs::default()
    };
    let hi = report(
        BoundKind::SigmaMax,
        Relation::Upper,
        sb.max().max(gamma) * sqc.max(),
        sbc.max(),
        inputs,
    );
    let lo = report(
        BoundKind::SigmaMin,
        Relation::Lower,
        sb.min().min(gamma) * sigma_min(&qc, &sqc),
        sigma_min(&bc, &sbc),
        inputs,
    );
    Ok((hi, lo))
}

/// `κ([B, cγ]) ≤ max{κ(B), ‖B‖/γ, γ‖B†‖}·κ([Q, c])`.
pub fn kappa_bound_via_q(b: &DenseMatrix, c: &[f64], gamma: f64) -> Result<BoundReport> {
    check_gamma(gamma)?;
    let q = householder_qr(b)?.q;
    let sb = singular_values(b)?;
    let kappa_b = sb.max() / sb.min();
    let factor = kappa_b.max(sb.max() / gamma).max(gamma / sb.min());
    let kappa_qc = cond_or_inf(&append_column(&q, c, 1.0)?);
    let actual = cond_or_inf(&append_column(b, c, gamma)?);
    let inputs = BoundInputs {
        sigma_max: Some(sb.max()),
        sigma_min: Some(sb.min()),
        gamma: Some(gamma),
        c_norm: Some(norm2(c)),
        kappa_b: Some(kappa_b),
        ..BoundInputs::default()
    };
    let r = report(BoundKind::ViaQ, Relation::Upper, factor * kappa_qc, actual, inputs);
    if kappa_qc.is_infinite() {
        return Ok(r.unmet("c lies in span(B); [Q, c] is singular"));
    }
    Ok(r)
}

fn check_unit_columns(b: &DenseMatrix) -> Result<()> {
    for c in b.columns() {
        let n = norm2(c);
        if abs(n - 1.0) > UNIT_TOLERANCE {
            return Err(Error::domain("columns of B must have unit norm", n));
        }
    }
    Ok(())
}

/// Scalar form of [`kappa_bound_unit_columns`].
pub fn kappa_bound_unit_columns_scalar(
    kappa_b: f64,
    c_norm: f64,
    gamma: f64,
    r_norm: f64,
) -> Result<BoundReport> {
    check_gamma(gamma)?;
    let inputs = BoundInputs {
        gamma: Some(gamma),
        c_norm: Some(c_norm),
        r_norm: Some(r_norm),
        kappa_b: Some(kappa_b),
        ..BoundInputs::default()
    };
    let mut r = BoundReport {
        kind: BoundKind::UnitColumns,
        relation: Relation::Upper,
        bound_value: f64::INFINITY,
        actual_value: None,
        inputs,
        preconditions_met: true,
        explanation: String::new(),
    };
    if !(r_norm > UNIT_TOLERANCE * c_norm) || r_norm == 0.0 {
        return Ok(r.unmet("residual is zero: c lies in span(B) and the bound has a pole"));
    }
    r.bound_value = kappa_b * liesen_kappa_from_residual(c_norm, gamma, r_norm)?;
    Ok(r)
}

/// `κ([B, cγ]) ≤ κ(B)·(α + √(α² − 4γ²‖r‖²))/(2γ‖r‖)` for unit-norm columns.
///
/// `r` is the least-squares residual of `c` itself, so that `α = 1 + γ²‖c‖²`
/// and the factor is exactly κ([Q, cγ]).
pub fn kappa_bound_unit_columns(b: &DenseMatrix, c: &[f64], gamma: f64) -> Result<BoundReport> {
    check_gamma(gamma)?;
    check_unit_columns(b)?;
    let sb = singular_values(b)?;
    let r_norm = ls_residual_norm(b, c)?;
    let mut r = kappa_bound_unit_columns_scalar(sb.max() / sb.min(), norm2(c), gamma, r_norm)?;
    r.inputs.sigma_max = Some(sb.max());
    r.inputs.sigma_min = Some(sb.min());
    r.actual_value = Some(cond_or_inf(&append_column(b, c, gamma)?));
    Ok(r)
}

/// Scalar form of [`kappa_bound_unit_q`].
pub fn kappa_bound_unit_q_scalar(kappa_b: f64, r_norm: f64) -> BoundReport {
    let inputs = BoundInputs {
        gamma: Some(1.0),
        c_norm: Some(1.0),
        r_norm: Some(r_norm),
        kappa_b: Some(kappa_b),
        ..BoundInputs::default()
    };
    let r = BoundReport {
        kind: BoundKind::UnitQ,
        relation: Relation::Upper,
        bound_value: f64::INFINITY,
        actual_value: None,
        inputs,
        preconditions_met: true,
        explanation: String::new(),
    };
    if !(r_norm > UNIT_TOLERANCE) {
        return r.unmet("residual is zero: q lies in span(B) and the bound has a pole");
    }
    BoundReport { bound_value: kappa_b * unit_q_factor(r_norm.min(1.0)), ..r }
}

/// `κ([B, q]) ≤ κ(B)·(1 + √(1 − ‖r‖²))/‖r‖` for unit columns and unit `q`.
pub fn kappa_bound_unit_q(b: &DenseMatrix, q: &[f64]) -> Result<BoundReport> {
    check_unit_columns(b)?;
    let qn = norm2(q);
    if abs(qn - 1.0) > UNIT_TOLERANCE {
        return Err(Error::domain("q must have unit norm", qn));
    }
    let sb = singular_values(b)?;
    let r_norm = ls_residual_norm(b, q)?;
    let mut r = kappa_bound_unit_q_scalar(sb.max() / sb.min(), r_norm);
    r.inputs.sigma_max = Some(sb.max());
    r.inputs.sigma_min = Some(sb.min());
    r.actual_value = Some(cond_or_inf(&append_column(b, q, 1.0)?));
    Ok(r)
}
