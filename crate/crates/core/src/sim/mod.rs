//! Seeded Monte Carlo checks of the probabilistic statements.
//!
//! Trials are grouped into blocks of [`BLOCK_SIZE`]; block `b` of grid point
//! `g` draws from ChaCha stream `(g << 32) | b` of the configured seed, so
//! results do not depend on how a [`BlockRunner`] schedules blocks.

mod chain;
mod experiments;
mod rng;
mod runner;
mod summary;

pub use chain::{kappa_growth_experiment, noisy_qr_experiment, random_unit_columns, NoisyQrReport, DEGENERATE_RATIO};
pub use experiments::{
    log_grid, ls_residual_experiment, norm_tail_experiment, norm_tail_sweep,
    projection_noise_experiment, ProjectionReport,
};
pub use rng::{block_stream, fill_gaussian, gaussian_matrix, gaussian_vector, stream_rng, StreamRng, SHARED_STREAM_BASE};
pub use runner::{block_count, block_range, BlockRunner, Sequential, BLOCK_SIZE};
pub use summary::{ExperimentConfig, TrialSummary};
