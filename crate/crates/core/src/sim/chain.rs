use alloc::vec;
use alloc::vec::Vec;

use super::rng::{block_stream, fill_gaussian, gaussian_matrix, stream_rng, SHARED_STREAM_BASE};
use super::runner::{block_count, block_range, BlockRunner};
use super::summary::{ExperimentConfig, TrialSummary};
use crate::bounds::{growth_factor, kappa_growth_prob, qr_chain_bound, BOUND_SLACK};
use crate::linalg::{append_column, cond_or_inf, dot, norm2, DenseMatrix, HouseholderQr};
use crate::math::*;
use crate::{Error, Result};

/// Stream for the input matrix generated by [`random_unit_columns`].
const INPUT_STREAM: u64 = SHARED_STREAM_BASE + 1;

/// Columns below this fraction of their input norm after projection make a
/// trial degenerate.
pub const DEGENERATE_RATIO: f64 = 1e-12;

/// Gaussian `m×n` matrix with columns scaled to unit norm, from the shared
/// input stream of `seed`.
pub fn random_unit_columns(m: usize, n: usize, seed: u64) -> DenseMatrix {
    let mut a = gaussian_matrix(m, n, &mut stream_rng(seed, INPUT_STREAM));
    for j in 0..n {
        let c = a.column_mut(j);
        let s = norm2(c);
        c.iter_mut().for_each(|x| *x /= s);
    }
    a
}

/// Frequency with which κ([B, q]) stays within the growth bound, where
/// `q = (X+Y)/‖X+Y‖` with `X = x_norm` times the first complement direction of
/// `B`. The theoretical value is a lower bound, so only a large negative
/// z-score indicates a problem.
pub fn kappa_growth_experiment<R: BlockRunner>(
    cfg: &ExperimentConfig,
    b: &DenseMatrix,
    runner: &R,
) -> Result<TrialSummary> {
    cfg.check_common()?;
    cfg.check_eps_pair()?;
    let g = kappa_growth_prob(b, cfg.x_norm, cfg.sigma, cfg.eps1, cfg.eps2)?;
    let (m, n) = (b.rows(), b.cols());
    let xdir = HouseholderQr::new(b)?.q_columns(n + 1).column(n).to_vec();
    let limit = g.kappa_bound * (1.0 + BOUND_SLACK);
    let parts = runner.run_blocks(block_count(cfg.trials), |blk| {
        let (lo, hi) = block_range(cfg.trials, blk);
        let mut rng = stream_rng(cfg.seed, block_stream(0, blk));
        let mut y = vec![0.0; m];
        let mut hits = 0u64;
        for _ in lo..hi {
            fill_gaussian(&mut rng, cfg.sigma, &mut y);
            y.iter_mut().zip(&xdir).for_each(|(yi, xi)| *yi += cfg.x_norm * xi);
            let s = norm2(&y);
            if s == 0.0 {
                continue;
            }
            let bq = append_column(b, &y, 1.0 / s).expect("matching rows");
            if cond_or_inf(&bq) <= limit {
                hits += 1;
            }
        }
        hits
    });
    Ok(TrialSummary::new(parts.iter().sum(), cfg.trials, g.probability.value()))
}

/// Outcome of the noisy Gram-Schmidt simulation.
#[derive(Clone, Debug, PartialEq)]
pub struct NoisyQrReport {
    /// Trials that completed; degenerate trials are excluded.
    pub trials: u64,
    pub excluded: u64,
    /// Trials with κ(Q̂) above the product bound.
    pub violations: u64,
    pub violation_freq: f64,
    /// Mean over trials of `1 − probability_lower_bound` at the observed ‖a_i‖.
    pub allowance: f64,
    /// `√(allowance(1−allowance)/trials)`, floored at `1/trials`.
    pub stderr: f64,
    pub kappa_product_bound: f64,
    pub max_final_kappa: f64,
    /// Smallest κ(Q̂[:, 1:i]) seen at any step.
    pub min_step_kappa: f64,
    /// Largest `|κ(Q̂[:, 1]) − 1|`.
    pub max_first_step_deviation: f64,
}

impl NoisyQrReport {
    /// Whether the violation frequency stays within allowance + 3 stderr.
    pub fn within_allowance(&self) -> bool {
        self.violation_freq <= self.allowance + 3.0 * self.stderr
    }
}

#[derive(Default)]
struct ChainBlock {
    trials: u64,
    excluded: u64,
    violations: u64,
    allowance: f64,
    max_kappa: f64,
    min_kappa: f64,
    first_dev: f64,
}

/// Runs Gram-Schmidt on the columns of `a` with noisy orthogonalisation:
/// `a_i` is the exact residual of `v_i` against the computed `Q̂[:, 1:i−1]`
/// and `q̂_i = (a_i + e_i)/‖a_i + e_i‖` with `e_i ~ N(0, σ²I)`.
///
/// ε₁ and ε₂ from `cfg` apply to every step.
pub fn noisy_qr_experiment<R: BlockRunner>(
    cfg: &ExperimentConfig,
    a: &DenseMatrix,
    runner: &R,
) -> Result<NoisyQrReport> {
    cfg.check_common()?;
    cfg.check_eps_pair()?;
    let (m, n) = (a.rows(), a.cols());
    if n < 2 || n > m {
        return Err(Error::InvalidConfig("noisy QR needs 2 <= n <= m"));
    }
    if !(cfg.eps1 > 0.0) {
        return Err(Error::InvalidConfig("eps1 must be positive"));
    }
    let steps = n - 1;
    let eps1 = vec![cfg.eps1; steps];
    let eps2 = vec![cfg.eps2; steps];
    let product = powu(growth_factor(cfg.eps1, cfg.eps2), steps);

    let parts = runner.run_blocks(block_count(cfg.trials), |blk| -> Result<ChainBlock> {
        let (lo, hi) = block_range(cfg.trials, blk);
        let mut rng = stream_rng(cfg.seed, block_stream(0, blk));
        let mut out = ChainBlock { min_kappa: f64::INFINITY, ..Default::default() };
        let mut e = vec![0.0; m];
        'trial: for _ in lo..hi {
            let mut qhat = DenseMatrix::zeros(m, 0);
            let mut a_norms = Vec::with_capacity(steps);
            let mut kappa = 1.0;
            for i in 0..n {
                let v = a.column(i);
                let ai = if i == 0 {
                    v.to_vec()
                } else {
                    HouseholderQr::new(&qhat)?.solve_least_squares(v)?.1
                };
                let an = norm2(&ai);
                // noise is drawn before the exclusion test so streams stay aligned
                fill_gaussian(&mut rng, cfg.sigma, &mut e);
                if an <= DEGENERATE_RATIO * norm2(v) {
                    out.excluded += 1;
                    continue 'trial;
                }
                if i > 0 {
                    a_norms.push(an);
                }
                let w: Vec<f64> = ai.iter().zip(&e).map(|(x, y)| x + y).collect();
                let wn = sqrt(dot(&w, &w));
                let q: Vec<f64> = w.iter().map(|x| x / wn).collect();
                qhat = append_column(&qhat, &q, 1.0)?;
                kappa = cond_or_inf(&qhat);
                out.min_kappa = out.min_kappa.min(kappa);
                if i == 0 {
                    out.first_dev = out.first_dev.max(abs(kappa - 1.0));
                }
            }
            out.trials += 1;
            out.max_kappa = out.max_kappa.max(kappa);
            if kappa > product {
                out.violations += 1;
            }
            let chain = qr_chain_bound(m, n, &a_norms, cfg.sigma, &eps1, &eps2)?;
            out.allowance += 1.0 - chain.probability_lower_bound;
        }
        Ok(out)
    });

    let mut tot = ChainBlock { min_kappa: f64::INFINITY, ..Default::default() };
    for p in parts {
        let p = p?;
        tot.trials += p.trials;
        tot.excluded += p.excluded;
        tot.violations += p.violations;
        tot.allowance += p.allowance;
        tot.max_kappa = tot.max_kappa.max(p.max_kappa);
        tot.min_kappa = tot.min_kappa.min(p.min_kappa);
        tot.first_dev = tot.first_dev.max(p.first_dev);
    }
    if tot.trials == 0 {
        return Err(Error::InvalidConfig("every trial was degenerate"));
    }
    let t = tot.trials as f64;
    let allowance = tot.allowance / t;
    Ok(NoisyQrReport {
        trials: tot.trials,
        excluded: tot.excluded,
        violations: tot.violations,
        violation_freq: tot.violations as f64 / t,
        allowance,
        stderr: sqrt(allowance * (1.0 - allowance) / t).max(1.0 / t),
        kappa_product_bound: product,
        max_final_kappa: tot.max_kappa,
        min_step_kappa: tot.min_kappa,
        max_first_step_deviation: tot.first_dev,
    })
}

fn powu(x: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, _| acc * x)
}
