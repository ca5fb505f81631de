use alloc::vec::Vec;

use super::matrix::DenseMatrix;
use super::qr::{HouseholderQr, RANK_TOLERANCE};
use crate::{Error, Result};

/// Solution and residual of `min_y ‖c − B y‖`.
#[derive(Clone, Debug)]
pub struct LeastSquares {
    pub y: Vec<f64>,
    pub r: Vec<f64>,
}

/// Least squares via Householder QR. `B` must have full column rank.
pub fn ls_residual(b: &DenseMatrix, c: &[f64]) -> Result<LeastSquares> {
    let h = HouseholderQr::new(b)?;
    let r = h.r();
    if r.cols() > 0 {
        let s = super::singular_values(&r)?;
        if s.max() == 0.0 || s.min() <= RANK_TOLERANCE * s.max() {
            return Err(Error::RankDeficient { sigma_min: s.min(), sigma_max: s.max() });
        }
    }
    let (y, r) = h.solve_least_squares(c)?;
    Ok(LeastSquares { y, r })
}

/// `‖c − B y*‖` for the least-squares minimiser.
pub fn ls_residual_norm(b: &DenseMatrix, c: &[f64]) -> Result<f64> {
    ls_residual(b, c).map(|ls| super::norm2(&ls.r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::test_util::{random_matrix, random_orthonormal, random_vector};
    use crate::linalg::{norm2, project_perp};

    #[test]
    fn small_cases() {
        let b = DenseMatrix::column_vector(&[1.0, 0.0]).unwrap();
        let ls = ls_residual(&b, &[3.0, 4.0]).unwrap();
        assert!((ls.y[0] - 3.0).abs() < 1e-15);
        assert!(ls.r[0].abs() < 1e-15 && (ls.r[1] - 4.0).abs() < 1e-15);

        let b = random_matrix(9, 3, 2);
        let c = b.mul_vec(&[1.0, 2.0, -1.0]).unwrap();
        let ls = ls_residual(&b, &c).unwrap();
        assert!(norm2(&ls.r) < 1e-13 * norm2(&c));
        assert!((ls.y[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn orthonormal_b_gives_projection() {
        let q = random_orthonormal(12, 4, 3);
        let c = random_vector(12, 4);
        let ls = ls_residual(&q, &c).unwrap();
        let p = project_perp(&q, &c).unwrap();
        assert!(ls.r.iter().zip(&p).all(|(a, b)| (a - b).abs() < 1e-13));
    }

    #[test]
    fn normal_equations_hold() {
        for seed in 0..100u64 {
            let m = 2 + (seed as usize * 3) % 40;
            let n = 1 + (seed as usize) % (m - 1).min(12);
            let b = random_matrix(m, n, seed);
            let c = random_vector(m, seed + 77);
            let ls = ls_residual(&b, &c).unwrap();
            let btr = b.tr_mul_vec(&ls.r).unwrap();
            assert!(norm2(&btr) <= 1e-10 * b.frobenius_norm() * norm2(&c));
            let by = b.mul_vec(&ls.y).unwrap();
            for i in 0..m {
                assert!((c[i] - by[i] - ls.r[i]).abs() < 1e-12 * norm2(&c));
            }
        }
    }

    #[test]
    fn rank_deficiency_propagates() {
        let b = DenseMatrix::from_columns(&[[1.0, 0.0, 0.0], [2.0, 0.0, 0.0]]).unwrap();
        assert!(matches!(ls_residual(&b, &[1.0, 1.0, 1.0]), Err(Error::RankDeficient { .. })));
    }
}
