//! Deterministic and probabilistic bounds on condition-number growth when a
//! column is appended.
//!
//! Each matrix-level bound returns a [`BoundReport`] that records its inputs
//! and, where it can be computed, the true value. Scalar `*_scalar` variants
//! take precomputed norms for use inside simulation loops.

mod growth;
mod liesen;
mod minmax;
mod prob;
mod report;

pub use growth::{
    kappa_bound_eps, kappa_bound_eps_scalar, kappa_bound_general, kappa_bound_general_scalar,
    weyl_kappa_bound, ORTHOGONALITY_TOLERANCE,
};
pub use liesen::{
    liesen_kappa_from_residual, liesen_residual_from_kappa, liesen_residual_identity_check,
    rank2_eigenvalues, ResidualIdentity,
};
pub use minmax::{
    kappa_bound_unit_columns, kappa_bound_unit_columns_scalar, kappa_bound_unit_q,
    kappa_bound_unit_q_scalar, kappa_bound_via_q, minmax_singular_bounds, UNIT_TOLERANCE,
};
pub use prob::{
    growth_factor, kappa_growth_prob, printed_growth_factor, qr_chain_bound, residual_threshold,
    residual_tail_prob, residual_tail_prob_printed, unit_q_factor, GrowthBound,
};
pub use report::{BoundInputs, BoundKind, BoundReport, ChainBoundReport, Relation, BOUND_SLACK};
