use alloc::vec::Vec;

use super::matrix::{axpy, dot, DenseMatrix};
use super::qr::HouseholderQr;
use crate::math::*;
use crate::{Error, Result};

/// Largest tolerated entry of `|QᵀQ − I|` for inputs declared orthonormal.
pub const ORTHONORMAL_TOLERANCE: f64 = 1e-8;

/// `max |QᵀQ − I|` over all entries.
pub fn orthonormality_error(q: &DenseMatrix) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in q.columns().enumerate() {
        for (j, b) in q.columns().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max(abs(dot(a, b) - target));
        }
    }
    worst
}

fn check(q: &DenseMatrix, v: &[f64]) -> Result<()> {
    if v.len() != q.rows() {
        return Err(Error::DimensionMismatch { expected: q.rows(), found: v.len() });
    }
    let e = orthonormality_error(q);
    if e > ORTHONORMAL_TOLERANCE {
        return Err(Error::NotOrthonormal(e));
    }
    Ok(())
}

/// `Q Qᵀ v`.
pub fn project_onto(q: &DenseMatrix, v: &[f64]) -> Result<Vec<f64>> {
    check(q, v)?;
    Ok(project_onto_unchecked(q, v))
}

/// `v − Q Qᵀ v`.
pub fn project_perp(q: &DenseMatrix, v: &[f64]) -> Result<Vec<f64>> {
    check(q, v)?;
    Ok(project_perp_unchecked(q, v))
}

/// [`project_onto`] without validating `q`; for hot loops.
pub fn project_onto_unchecked(q: &DenseMatrix, v: &[f64]) -> Vec<f64> {
    let mut out = alloc::vec![0.0; v.len()];
    for c in q.columns() {
        axpy(dot(c, v), c, &mut out);
    }
    out
}

/// [`project_perp`] without validating `q`; for hot loops.
pub fn project_perp_unchecked(q: &DenseMatrix, v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    for c in q.columns() {
        axpy(-dot(c, v), c, &mut out);
    }
    out
}

/// Orthonormal basis of `span(Q)^⊥`: the trailing `m − n` columns of the full
/// Householder factor of `Q`. Square `Q` yields a matrix with no columns.
pub fn orthonormal_complement(q: &DenseMatrix) -> Result<DenseMatrix> {
    let (m, n) = (q.rows(), q.cols());
    if n > m {
        return Err(Error::DimensionMismatch { expected: m, found: n });
    }
    let e = orthonormality_error(q);
    if e > ORTHONORMAL_TOLERANCE {
        return Err(Error::NotOrthonormal(e));
    }
    let h = HouseholderQr::new(q)?;
    let mut out = DenseMatrix::zeros(m, m - n);
    for j in 0..m - n {
        let col = out.column_mut(j);
        col[n + j] = 1.0;
        h.apply_q(col);
    }
    Ok(out)
}
