//! Special functions behind every probability statement.
//!
//! All functions are pure and allocation free.

mod bessel;
mod beta;
mod gamma;
pub(crate) mod kernels;
mod noncentral;

use core::fmt;

pub use bessel::{bessel_i, bessel_i_scaled};
pub use beta::{regularized_beta_pair, regularized_incomplete_beta};
pub use gamma::{
    log_gamma, regularized_gamma_pair, regularized_lower_gamma, regularized_upper_gamma,
};
pub use noncentral::{
    marcum_q, noncentral_chi2_cdf, noncentral_f_sf, norm_tail_prob, MAX_TERMS, TAIL_TOLERANCE,
};

use crate::{Error, Result};

/// A probability together with a guaranteed bound on its truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailProbability {
    value: f64,
    abs_error_bound: f64,
}

impl TailProbability {
    /// Clamps `value` into `[0, 1]`.
    pub fn new(value: f64, abs_error_bound: f64) -> Self {
        TailProbability {
            value: value.clamp(0.0, 1.0),
            abs_error_bound: abs_error_bound.max(0.0),
        }
    }

    pub fn exact(value: f64) -> Self {
        Self::new(value, 0.0)
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn abs_error_bound(&self) -> f64 {
        self.abs_error_bound
    }

    /// `1 - value`, with the same error bound.
    pub fn complement(&self) -> Self {
        Self::new(1.0 - self.value, self.abs_error_bound)
    }
}

impl fmt::Display for TailProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:e}", self.value, self.abs_error_bound)
    }
}

/// Order `M > 0` of the generalized Marcum-Q function (real, often half-integer).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MarcumOrder(f64);

impl MarcumOrder {
    pub fn new(m_order: f64) -> Result<Self> {
        if !m_order.is_finite() || m_order <= 0.0 {
            return Err(Error::domain("Marcum order must be finite and > 0", m_order));
        }
        Ok(MarcumOrder(m_order))
    }

    /// `M = dimension / 2`, the order governing a Gaussian vector in ℝ^dimension.
    pub fn from_dimension(dimension: usize) -> Result<Self> {
        Self::new(dimension as f64 / 2.0)
    }

    pub fn get(self) -> f64 {
        self.0
    }
}
