//! Dense real linear algebra at desk scale.
//!
//! Matrices are column-major [`DenseMatrix`] values with finite entries. QR is
//! Householder based, singular values come from one-sided Jacobi, and
//! projections take an explicit orthonormal basis.

mod lstsq;
mod matrix;
mod project;
mod qr;
mod svd;

pub use lstsq::{ls_residual, ls_residual_norm, LeastSquares};
pub use matrix::{append_column, axpy, dot, norm2, DenseMatrix};
pub use project::{
    orthonormal_complement, orthonormality_error, project_onto, project_onto_unchecked,
    project_perp, project_perp_unchecked, ORTHONORMAL_TOLERANCE,
};
pub use qr::{householder_qr, mgs_qr, HouseholderQr, QrFactors, RANK_TOLERANCE};
pub use svd::{cond, cond_or_inf, singular_values, SingularSpectrum};

#[cfg(test)]
pub(crate) mod test_util {
    use super::*;
    use alloc::vec::Vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    pub fn random_vector(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.sample(StandardNormal)).collect()
    }

    pub fn random_matrix(m: usize, n: usize, seed: u64) -> DenseMatrix {
        DenseMatrix::new(m, n, random_vector(m * n, seed)).unwrap()
    }

    pub fn random_orthonormal(m: usize, n: usize, seed: u64) -> DenseMatrix {
        householder_qr(&random_matrix(m, n, seed)).unwrap().q
    }
}
