use alloc::vec::Vec;

use super::matrix::{dot, DenseMatrix};
use crate::math::*;
use crate::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Singular values sorted in descending order.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularSpectrum(Vec<f64>);

impl SingularSpectrum {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.0.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.0.last().copied().unwrap_or(0.0)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// The `min(rows, cols)` singular values of `a`, by one-sided Jacobi.
///
/// Works on the columns directly, never forming `AᵀA`, so small singular
/// values keep high relative accuracy.
pub fn singular_values(a: &DenseMatrix) -> Result<SingularSpectrum> {
    if a.cols() == 0 {
        return Ok(SingularSpectrum(Vec::new()));
    }
    let mut w = if a.rows() < a.cols() { a.transpose() } else { a.clone() };
    let (m, n) = (w.rows(), w.cols());
    let tol = f64::EPSILON * m as f64;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (cp, cq) = pair(&mut w, p, q);
                let alpha = dot(cp, cp);
                let beta = dot(cq, cq);
                let gamma = dot(cp, cq);
                if alpha == 0.0 || beta == 0.0 || abs(gamma) <= tol * sqrt(alpha) * sqrt(beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (abs(zeta) + sqrt(1.0 + zeta * zeta));
                let c = 1.0 / sqrt(1.0 + t * t);
                let s = c * t;
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let (u, v) = (*x, *y);
                    *x = c * u - s * v;
                    *y = s * u + c * v;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut values: Vec<f64> = w.columns().map(|c| sqrt(dot(c, c))).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(SingularSpectrum(values))
}

fn pair(w: &mut DenseMatrix, p: usize, q: usize) -> (&mut [f64], &mut [f64]) {
    let m = w.rows();
    let block = w.column_mut_range(p, q + 1);
    let (left, right) = block.split_at_mut(m);
    (left, &mut right[(q - p - 1) * m..])
}

/// 2-norm condition number `σ_max / σ_min`.
///
/// Fails with [`Error::Singular`] when the columns are numerically dependent,
/// including every matrix with more columns than rows.
pub fn cond(a: &DenseMatrix) -> Result<f64> {
    if a.cols() == 0 {
        return Err(Error::Singular);
    }
    if a.cols() > a.rows() {
        return Err(Error::Singular);
    }
    let s = singular_values(a)?;
    let tol = f64::EPSILON * a.rows().max(a.cols()) as f64 * s.max();
    if s.min() <= tol {
        return Err(Error::Singular);
    }
    Ok(s.max() / s.min())
}

/// [`cond`] with singular input mapped to `+∞`.
pub fn cond_or_inf(a: &DenseMatrix) -> f64 {
    cond(a).unwrap_or(f64::INFINITY)
}
