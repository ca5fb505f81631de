//! Exact identities for appending one column to an orthonormal block.

use crate::linalg::{append_column, householder_qr, ls_residual_norm, singular_values, DenseMatrix};
use crate::math::*;
use crate::{Error, Result};

/// Eigenvalues of the bordered matrix `[[0, aᵀ], [a, b]]` (zero block of any
/// size): `0` and the two roots of `λ² − bλ − ‖a‖² = 0`.
///
/// Returned as `[0, λ₊, λ₋]`. The smaller-magnitude root comes from the
/// product of roots, so neither is lost to cancellation.
pub fn rank2_eigenvalues(a_norm: f64, b: f64) -> [f64; 3] {
    let d = hypot(b, 2.0 * a_norm);
    let a2 = a_norm * a_norm;
    if b >= 0.0 {
        let plus = (b + d) / 2.0;
        let minus = if plus == 0.0 { 0.0 } else { -a2 / plus };
        [0.0, plus, minus]
    } else {
        let minus = (b - d) / 2.0;
        [0.0, -a2 / minus, minus]
    }
}

/// κ([Q, cγ]) for orthonormal `Q` from the residual norm of `c` against `Q`.
pub fn liesen_kappa_from_residual(c_norm: f64, gamma: f64, r_norm: f64) -> Result<f64> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::domain("gamma must be positive", gamma));
    }
    if !(r_norm >= 0.0) || !c_norm.is_finite() || !(c_norm >= 0.0) {
        return Err(Error::domain("residual and column norms must be nonnegative", r_norm));
    }
    if r_norm == 0.0 {
        return Ok(f64::INFINITY);
    }
    let alpha = 1.0 + gamma * gamma * c_norm * c_norm;
    let two_gr = 2.0 * gamma * r_norm;
    // α² − 4γ²‖r‖² as a product keeps the small factor exact
    let lo = alpha - two_gr;
    if lo < -4.0 * f64::EPSILON * alpha {
        return Err(Error::domain("residual norm exceeds the column norm", r_norm));
    }
    let disc = lo.max(0.0) * (alpha + two_gr);
    Ok((alpha + sqrt(disc)) / two_gr)
}

/// Inverse of [`liesen_kappa_from_residual`]: `‖r‖ = (α/γ)·κ/(κ² + 1)`.
///
/// Near κ = 1 the forward map is flat, so a round trip loses about
/// `ε/(κ − 1)` relative accuracy there.
pub fn liesen_residual_from_kappa(c_norm: f64, gamma: f64, kappa: f64) -> Result<f64> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::domain("gamma must be positive", gamma));
    }
    if !(kappa >= 1.0) {
        return Err(Error::domain("condition number must be at least 1", kappa));
    }
    let alpha = 1.0 + gamma * gamma * c_norm * c_norm;
    if kappa.is_infinite() {
        return Ok(0.0);
    }
    // κ/(κ²+1) = 1/(κ + 1/κ) avoids overflow for huge κ
    Ok(alpha / gamma / (kappa + 1.0 / kappa))
}

/// The residual norm computed three independent ways.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualIdentity {
    /// `‖c − B y*‖` from least squares.
    pub direct: f64,
    /// `σ_min([B,cγ])/γ · Π σ_j([B,cγ])/σ_j(B)`.
    pub via_singular_values: f64,
    /// `σ_min([Q,cγ]) σ_1([Q,cγ]) / γ`.
    pub via_q: f64,
}

impl ResidualIdentity {
    /// Largest pairwise relative discrepancy.
    pub fn discrepancy(&self) -> f64 {
        let v = [self.direct, self.via_singular_values, self.via_q];
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in i + 1..3 {
                let scale = v[i].abs().max(v[j].abs());
                if scale > 0.0 {
                    worst = worst.max((v[i] - v[j]).abs() / scale);
                }
            }
        }
        worst
    }
}

/// Evaluates the residual identities for `[B, cγ]`. Needs `[c, B]` of full
/// column rank, which forces `rows > cols(B)`.
pub fn liesen_residual_identity_check(
    b: &DenseMatrix,
    c: &[f64],
    gamma: f64,
) -> Result<ResidualIdentity> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::domain("gamma must be positive", gamma));
    }
    let n = b.cols();
    if b.rows() <= n {
        return Err(Error::DimensionMismatch { expected: n + 1, found: b.rows() });
    }
    let qr = householder_qr(b)?;
    let direct = ls_residual_norm(b, c)?;

    let bc = append_column(b, c, gamma)?;
    let s_bc = singular_values(&bc)?;
    let s_b = singular_values(b)?;
    if s_bc.min() <= crate::linalg::RANK_TOLERANCE * s_bc.max() {
        return Err(Error::RankDeficient { sigma_min: s_bc.min(), sigma_max: s_bc.max() });
    }
    let mut prod = s_bc.min() / gamma;
    for (x, y) in s_bc.values().iter().zip(s_b.values()) {
        prod *= x / y;
    }

    let qc = append_column(&qr.q, c, gamma)?;
    let s_qc = singular_values(&qc)?;
    let via_q = s_qc.min() * s_qc.max() / gamma;

    Ok(ResidualIdentity { direct, via_singular_values: prod, via_q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cond;
    use nalgebra::DMatrix;

    #[test]
    fn rank2_examples() {
        assert_eq!(rank2_eigenvalues(0.0, 5.0), [0.0, 5.0, 0.0]);
        assert_eq!(rank2_eigenvalues(1.0, 0.0), [0.0, 1.0, -1.0]);
        assert_eq!(rank2_eigenvalues(5.0, 0.0), [0.0, 5.0, -5.0]);
        let m = DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 3.0, 0.0, 0.0, 4.0, 3.0, 4.0, 0.0]);
        let mut e: alloc::vec::Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        e.sort_by(f64::total_cmp);
        assert!((e[0] + 5.0).abs() < 1e-12 && e[1].abs() < 1e-12 && (e[2] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn rank2_small_root_is_accurate() {
        // λ₋ ≈ −a²/b for b ≫ a; the naive formula would return 0
        let [_, p, m] = rank2_eigenvalues(1e-6, 1e6);
        assert!((p - 1e6).abs() < 1e-9);
        assert!((m + 1e-18).abs() < 1e-30);
        let [_, p, m] = rank2_eigenvalues(1e-6, -1e6);
        assert!((p - 1e-18).abs() < 1e-30);
        assert!((m + 1e6).abs() < 1e-9);
    }

    #[test]
    fn liesen_examples() {
        assert_eq!(liesen_kappa_from_residual(1.0, 1.0, 1.0).unwrap(), 1.0);
        let k = liesen_kappa_from_residual(1.0, 1.0, 0.5).unwrap();
        assert!((k - (2.0 + 3f64.sqrt())).abs() < 1e-14);
        assert_eq!(liesen_kappa_from_residual(1.0, 1.0, 0.0).unwrap(), f64::INFINITY);
        assert!(liesen_kappa_from_residual(1.0, 1.0, 1.5).is_err());
        assert!(liesen_kappa_from_residual(1.0, 0.0, 0.5).is_err());

        assert_eq!(liesen_residual_from_kappa(1.0, 1.0, 1.0).unwrap(), 1.0);
        let r = liesen_residual_from_kappa(1.0, 1.0, 2.0 + 3f64.sqrt()).unwrap();
        assert!((r - 0.5).abs() < 1e-15);
        assert_eq!(liesen_residual_from_kappa(1.0, 1.0, f64::INFINITY).unwrap(), 0.0);
        assert!(liesen_residual_from_kappa(1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn kappa_grows_as_residual_shrinks() {
        let mut prev = 1.0;
        for k in 1..=60 {
            let r = 0.5f64.powi(k);
            let kap = liesen_kappa_from_residual(1.0, 1.0, r).unwrap();
            assert!(kap > prev);
            prev = kap;
        }
    }

    #[test]
    fn matches_constructed_instance() {
        let h = 3f64.sqrt() / 2.0;
        let q = DenseMatrix::column_vector(&[1.0, 0.0, 0.0]).unwrap();
        let qc = append_column(&q, &[h, 0.5, 0.0], 1.0).unwrap();
        let k = liesen_kappa_from_residual(1.0, 1.0, 0.5).unwrap();
        assert!((cond(&qc).unwrap() - k).abs() < 1e-13);
    }

    #[test]
    fn identity_orthonormal_case() {
        let b = DenseMatrix::from_columns(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap();
        let id = liesen_residual_identity_check(&b, &[0.0, 0.0, 1.0], 1.0).unwrap();
        assert!((id.direct - 1.0).abs() < 1e-15);
        assert!((id.via_singular_values - 1.0).abs() < 1e-15);
        assert!((id.via_q - 1.0).abs() < 1e-15);
        assert!(liesen_residual_identity_check(&DenseMatrix::identity(2), &[1.0, 0.0], 1.0).is_err());
    }
}
