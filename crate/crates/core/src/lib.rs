//! Condition-number growth of column-appended matrices and the probability
//! theory of orthogonalization under Gaussian noise.
//!
//! The crate is `no_std` (with `alloc`). It is organised in four layers:
//!
//! * [`specfun`]: log-gamma, incomplete gamma/beta, modified Bessel, the
//!   generalized Marcum-Q function and the noncentral χ² and F laws.
//! * [`linalg`]: a small column-major dense matrix type with Householder and
//!   modified Gram-Schmidt QR, one-sided Jacobi singular values, projections
//!   and least squares.
//! * [`bounds`]: deterministic and probabilistic condition-number bounds,
//!   each returning an auditable [`bounds::BoundReport`].
//! * [`sim`]: a seeded, block-parallel Monte Carlo harness checking every
//!   probabilistic statement against the closed forms.
//!
//! Enable the `std` feature to use the platform math library instead of
//! `libm`.
#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` is how NaN arguments get rejected; reference constants keep
// the digits they were quoted with.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;

pub mod bounds;
mod error;
mod math;
pub mod linalg;
pub mod sim;
pub mod specfun;

pub use error::{Error, Result};
