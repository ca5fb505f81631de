use alloc::vec;
use alloc::vec::Vec;

use super::matrix::{axpy, dot, norm2, DenseMatrix};
use super::svd::singular_values;
use crate::math::*;
use crate::{Error, Result};

/// Numerical rank threshold relative to the largest singular value.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Thin QR factors: `q` is m×n with orthonormal columns, `r` is n×n upper
/// triangular with a nonnegative diagonal.
#[derive(Clone, Debug)]
pub struct QrFactors {
    pub q: DenseMatrix,
    pub r: DenseMatrix,
}

/// Compact Householder factorisation `A = Q̄ S [R; 0]`.
///
/// The reflectors are kept in the lower trapezoid of `packed`; `signs` flips
/// rows of R so that its diagonal is nonnegative.
#[derive(Clone, Debug)]
pub struct HouseholderQr {
    packed: DenseMatrix,
    tau: Vec<f64>,
    rdiag: Vec<f64>,
    signs: Vec<f64>,
}

impl HouseholderQr {
    /// Factorises without any rank check.
    pub fn new(a: &DenseMatrix) -> Result<Self> {
        let (m, n) = (a.rows(), a.cols());
        if m < n {
            return Err(Error::DimensionMismatch { expected: n, found: m });
        }
        let mut packed = a.clone();
        let mut tau = vec![0.0; n];
        let mut rdiag = vec![0.0; n];
        let mut signs = vec![1.0; n];
        for k in 0..n {
            let (head, tail) = split_columns(&mut packed, k);
            let v = &mut head[k..];
            let norm = norm2(v);
            if norm == 0.0 {
                continue;
            }
            let alpha = if v[0] > 0.0 { -norm } else { norm };
            v[0] -= alpha;
            // vᵀv = 2‖x‖(‖x‖ + |x₀|)
            let vtv = dot(v, v);
            let t = 2.0 / vtv;
            for j in 0..tail.len() / m {
                let col = &mut tail[j * m + k..(j + 1) * m];
                let s = t * dot(v, col);
                axpy(-s, v, col);
            }
            tau[k] = t;
            rdiag[k] = abs(alpha);
            signs[k] = if alpha < 0.0 { -1.0 } else { 1.0 };
        }
        Ok(HouseholderQr { packed, tau, rdiag, signs })
    }

    pub fn rows(&self) -> usize {
        self.packed.rows()
    }

    pub fn cols(&self) -> usize {
        self.packed.cols()
    }

    fn reflect(&self, k: usize, x: &mut [f64]) {
        if self.tau[k] == 0.0 {
            return;
        }
        let v = &self.packed.column(k)[k..];
        let x = &mut x[k..];
        let s = self.tau[k] * dot(v, x);
        axpy(-s, v, x);
    }

    /// `x ← Q x` with Q the full m×m orthogonal factor.
    pub fn apply_q(&self, x: &mut [f64]) {
        assert_eq!(x.len(), self.rows());
        for (xi, s) in x.iter_mut().zip(&self.signs) {
            *xi *= s;
        }
        for k in (0..self.cols()).rev() {
            self.reflect(k, x);
        }
    }

    /// `x ← Qᵀ x`.
    pub fn apply_qt(&self, x: &mut [f64]) {
        assert_eq!(x.len(), self.rows());
        for k in 0..self.cols() {
            self.reflect(k, x);
        }
        for (xi, s) in x.iter_mut().zip(&self.signs) {
            *xi *= s;
        }
    }

    /// Leading `k` columns of the full orthogonal factor.
    pub fn q_columns(&self, k: usize) -> DenseMatrix {
        let m = self.rows();
        assert!(k <= m);
        let mut q = DenseMatrix::zeros(m, k);
        for j in 0..k {
            let col = q.column_mut(j);
            col[j] = 1.0;
            self.apply_q(col);
        }
        q
    }

    pub fn thin_q(&self) -> DenseMatrix {
        self.q_columns(self.cols())
    }

    pub fn full_q(&self) -> DenseMatrix {
        self.q_columns(self.rows())
    }

    pub fn r(&self) -> DenseMatrix {
        let n = self.cols();
        let mut r = DenseMatrix::zeros(n.max(1), n);
        for j in 0..n {
            for i in 0..j {
                r.set(i, j, self.signs[i] * self.packed.get(i, j));
            }
            r.set(j, j, self.rdiag[j]);
        }
        r
    }

    /// Least-squares solution of `min ‖c − A y‖` and its residual.
    ///
    /// The residual is formed as `Q [0; (Qᵀc)₂]`, which keeps it orthogonal to
    /// the range to working precision.
    pub fn solve_least_squares(&self, c: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let (m, n) = (self.rows(), self.cols());
        if c.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: c.len() });
        }
        let mut qtc = c.to_vec();
        self.apply_qt(&mut qtc);
        let mut y = qtc[..n].to_vec();
        for i in (0..n).rev() {
            if self.rdiag[i] == 0.0 {
                return Err(Error::Singular);
            }
            let mut s = y[i];
            for (j, yj) in y.iter().enumerate().skip(i + 1) {
                s -= self.signs[i] * self.packed.get(i, j) * yj;
            }
            y[i] = s / self.rdiag[i];
        }
        let mut r = qtc;
        r[..n].iter_mut().for_each(|x| *x = 0.0);
        self.apply_q(&mut r);
        Ok((y, r))
    }
}

fn split_columns(a: &mut DenseMatrix, k: usize) -> (&mut [f64], &mut [f64]) {
    let m = a.rows();
    let n = a.cols();
    let data = a.column_mut_range(k, n);
    data.split_at_mut(m)
}

fn check_rank(r: &DenseMatrix) -> Result<()> {
    if r.cols() == 0 {
        return Ok(());
    }
    let s = singular_values(r)?;
    let (hi, lo) = (s.max(), s.min());
    if hi == 0.0 || lo <= RANK_TOLERANCE * hi {
        return Err(Error::RankDeficient { sigma_min: lo, sigma_max: hi });
    }
    Ok(())
}

/// Householder QR of a full-rank matrix with `rows ≥ cols`.
pub fn householder_qr(a: &DenseMatrix) -> Result<QrFactors> {
    let h = HouseholderQr::new(a)?;
    let r = h.r();
    check_rank(&r)?;
    Ok(QrFactors { q: h.thin_q(), r })
}

/// Modified Gram-Schmidt. Loses orthogonality roughly in proportion to κ(A).
pub fn mgs_qr(a: &DenseMatrix) -> Result<QrFactors> {
    let (m, n) = (a.rows(), a.cols());
    if m < n {
        return Err(Error::DimensionMismatch { expected: n, found: m });
    }
    let mut q = a.clone();
    let mut r = DenseMatrix::zeros(n.max(1), n);
    for k in 0..n {
        let nk = norm2(q.column(k));
        r.set(k, k, nk);
        if nk == 0.0 {
            return Err(Error::RankDeficient { sigma_min: 0.0, sigma_max: a.frobenius_norm() });
        }
        q.column_mut(k).iter_mut().for_each(|x| *x /= nk);
        for j in k + 1..n {
            let qk = q.column(k).to_vec();
            let s = dot(&qk, q.column(j));
            r.set(k, j, s);
            axpy(-s, &qk, q.column_mut(j));
        }
    }
    check_rank(&r)?;
    Ok(QrFactors { q, r })
}
