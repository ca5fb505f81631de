use alloc::vec;
use alloc::vec::Vec;

use super::rng::{block_stream, fill_gaussian, gaussian_matrix, stream_rng, SHARED_STREAM_BASE};
use super::runner::{block_count, block_range, BlockRunner};
use super::summary::{ExperimentConfig, TrialSummary};
use crate::bounds::{residual_tail_prob, residual_threshold};
use crate::linalg::{dot, householder_qr, orthonormal_complement, DenseMatrix, HouseholderQr};
use crate::math::*;
use crate::specfun::norm_tail_prob;
use crate::{Error, Result};

/// Stream holding the random basis shared by every trial of one experiment.
const BASIS_STREAM: u64 = SHARED_STREAM_BASE;

/// `count` points spaced evenly in log scale from `start` to `stop`.
pub fn log_grid(start: f64, stop: f64, count: usize) -> Result<Vec<f64>> {
    if !(start > 0.0) || !(stop > 0.0) || !start.is_finite() || !stop.is_finite() {
        return Err(Error::InvalidConfig("grid end points must be positive and finite"));
    }
    match count {
        0 => Err(Error::InvalidConfig("grid needs at least one point")),
        1 => Ok(vec![start]),
        _ => {
            let step = ln(stop / start) / (count - 1) as f64;
            let mut g: Vec<f64> = (0..count).map(|i| start * exp(step * i as f64)).collect();
            g[count - 1] = stop;
            Ok(g)
        }
    }
}

/// Sum of integer event counts over blocks.
fn count_events<R: BlockRunner, F>(runner: &R, trials: u64, job: F) -> u64
where
    F: Fn(usize, u64) -> u64 + Sync,
{
    runner
        .run_blocks(block_count(trials), |b| {
            let (lo, hi) = block_range(trials, b);
            job(b, hi - lo)
        })
        .into_iter()
        .sum()
}

fn norm_tail_events(cfg: &ExperimentConfig, sigma: f64, grid: usize, b: usize, count: u64) -> u64 {
    let mut rng = stream_rng(cfg.seed, block_stream(grid, b));
    let mut y = vec![0.0; cfg.m];
    let mut hits = 0;
    for _ in 0..count {
        fill_gaussian(&mut rng, sigma, &mut y);
        y[0] += cfg.x_norm;
        if dot(&y, &y) > cfg.eps * cfg.eps {
            hits += 1;
        }
    }
    hits
}

/// Frequency of `‖X + Y‖ > ε` with `X = x_norm·e₁` and `Y ~ N(0, σ²I_m)`.
pub fn norm_tail_experiment<R: BlockRunner>(cfg: &ExperimentConfig, runner: &R) -> Result<TrialSummary> {
    Ok(norm_tail_sweep(cfg, &[cfg.sigma], runner)?.remove(0))
}

/// [`norm_tail_experiment`] at each σ in `sigmas` (grid point `g` uses its own
/// family of streams). All grid points share one pool of blocks.
pub fn norm_tail_sweep<R: BlockRunner>(
    cfg: &ExperimentConfig,
    sigmas: &[f64],
    runner: &R,
) -> Result<Vec<TrialSummary>> {
    cfg.check_common()?;
    if sigmas.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
        return Err(Error::InvalidConfig("sigma must be positive"));
    }
    let theory: Vec<f64> = sigmas
        .iter()
        .map(|&s| norm_tail_prob(cfg.x_norm, s, cfg.eps, cfg.m).map(|p| p.value()))
        .collect::<Result<_>>()?;
    let blocks = block_count(cfg.trials);
    let counts = runner.run_blocks(blocks * sigmas.len(), |k| {
        let (g, b) = (k / blocks, k % blocks);
        let (lo, hi) = block_range(cfg.trials, b);
        norm_tail_events(cfg, sigmas[g], g, b, hi - lo)
    });
    Ok(counts
        .chunks(blocks)
        .zip(theory)
        .map(|(c, p)| TrialSummary::new(c.iter().sum(), cfg.trials, p))
        .collect())
}

/// Sample statistics of the noise projected onto a random complement.
#[derive(Clone, Debug)]
pub struct ProjectionReport {
    /// Unbiased sample covariance of `Ȳ = (Q^⊥)ᵀY`, size `(m−n)×(m−n)`.
    pub covariance: DenseMatrix,
    /// `max |Ĉ − σ²I|`.
    pub max_deviation: f64,
    /// `5σ²/√trials`.
    pub tolerance: f64,
    /// Frequency of `‖X + P⊥_Q(Y)‖ > ε` against `Q^ma_{(m−n)/2}(‖X‖/σ, ε/σ)`.
    pub tail: TrialSummary,
}

impl ProjectionReport {
    pub fn covariance_ok(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

struct ProjectionBlock {
    events: u64,
    sum: Vec<f64>,
    cross: Vec<f64>,
}

/// Random orthonormal `m×n` basis from the shared stream.
fn shared_basis(cfg: &ExperimentConfig) -> Result<DenseMatrix> {
    let mut rng = stream_rng(cfg.seed, BASIS_STREAM);
    householder_qr(&gaussian_matrix(cfg.m, cfg.n, &mut rng)).map(|f| f.q)
}

/// Projects Gaussian noise onto the complement of one random `Q` and checks
/// that the coordinates are i.i.d. `N(0, σ²)` and the tail law of
/// `‖X + P⊥_Q(Y)‖` with `X = x_norm·Q^⊥e₁`.
pub fn projection_noise_experiment<R: BlockRunner>(
    cfg: &ExperimentConfig,
    runner: &R,
) -> Result<ProjectionReport> {
    cfg.check_common()?;
    cfg.check_positive_sigma()?;
    cfg.check_complement()?;
    if cfg.trials < 2 {
        return Err(Error::InvalidConfig("covariance needs at least two trials"));
    }
    let q = shared_basis(cfg)?;
    let qp = orthonormal_complement(&q)?;
    let k = qp.cols();
    let x: Vec<f64> = qp.column(0).iter().map(|v| cfg.x_norm * v).collect();
    let theory = norm_tail_prob(cfg.x_norm, cfg.sigma, cfg.eps, k)?.value();

    let parts = runner.run_blocks(block_count(cfg.trials), |b| {
        let (lo, hi) = block_range(cfg.trials, b);
        let mut rng = stream_rng(cfg.seed, block_stream(0, b));
        let mut y = vec![0.0; cfg.m];
        let mut out = ProjectionBlock { events: 0, sum: vec![0.0; k], cross: vec![0.0; k * k] };
        let mut ybar = vec![0.0; k];
        for _ in lo..hi {
            fill_gaussian(&mut rng, cfg.sigma, &mut y);
            for (j, c) in qp.columns().enumerate() {
                ybar[j] = dot(c, &y);
            }
            for i in 0..k {
                out.sum[i] += ybar[i];
                for j in i..k {
                    out.cross[i * k + j] += ybar[i] * ybar[j];
                }
            }
            // X + P⊥(Y) computed in the ambient space
            let mut v = y.clone();
            for c in q.columns() {
                crate::linalg::axpy(-dot(c, &y), c, &mut v);
            }
            for (vi, xi) in v.iter_mut().zip(&x) {
                *vi += xi;
            }
            if dot(&v, &v) > cfg.eps * cfg.eps {
                out.events += 1;
            }
        }
        out
    });

    let nt = cfg.trials as f64;
    let mut sum = vec![0.0; k];
    let mut cross = vec![0.0; k * k];
    let mut events = 0;
    for p in &parts {
        events += p.events;
        sum.iter_mut().zip(&p.sum).for_each(|(a, b)| *a += b);
        cross.iter_mut().zip(&p.cross).for_each(|(a, b)| *a += b);
    }
    let mean: Vec<f64> = sum.iter().map(|s| s / nt).collect();
    let s2 = cfg.sigma * cfg.sigma;
    let mut cov = DenseMatrix::zeros(k, k);
    let mut max_deviation = 0.0f64;
    for i in 0..k {
        for j in i..k {
            let c = (cross[i * k + j] - nt * mean[i] * mean[j]) / (nt - 1.0);
            cov.set(i, j, c);
            cov.set(j, i, c);
            let target = if i == j { s2 } else { 0.0 };
            max_deviation = max_deviation.max(abs(c - target));
        }
    }
    Ok(ProjectionReport {
        covariance: cov,
        max_deviation,
        tolerance: 5.0 * s2 / sqrt(nt),
        tail: TrialSummary::new(events, cfg.trials, theory),
    })
}

/// Frequency of `‖r‖ ≥ 1/√(1 + (ε₁/ε₂)²)` for
/// `r = P⊥_Q(X+Y) / √(‖P⊥_Q(X+Y)‖² + ‖P_Q Y‖²)`, with a fresh random `Q`
/// (from a Gaussian `m×n` matrix) in every trial and `X = x_norm` times the
/// first complement direction of that `Q`. Theory is
/// [`residual_tail_prob`]; use [`TrialSummary::against`] for other forms.
pub fn ls_residual_experiment<R: BlockRunner>(
    cfg: &ExperimentConfig,
    runner: &R,
) -> Result<TrialSummary> {
    cfg.check_common()?;
    cfg.check_positive_sigma()?;
    cfg.check_complement()?;
    cfg.check_eps_pair()?;
    if cfg.n == 0 {
        return Err(Error::InvalidConfig("n must be at least 1"));
    }
    let theory = residual_tail_prob(cfg.m, cfg.n, cfg.x_norm, cfg.sigma, cfg.eps1, cfg.eps2)?.value();
    let r0 = residual_threshold(cfg.eps1, cfg.eps2);
    let (m, n) = (cfg.m, cfg.n);
    let events = count_events(runner, cfg.trials, |b, count| {
        let mut rng = stream_rng(cfg.seed, block_stream(0, b));
        let mut hits = 0;
        let mut y = vec![0.0; m];
        for _ in 0..count {
            let a = gaussian_matrix(m, n, &mut rng);
            let basis = HouseholderQr::new(&a).expect("m > n").q_columns(n + 1);
            fill_gaussian(&mut rng, cfg.sigma, &mut y);
            let xdir = basis.column(n);
            let v: Vec<f64> = y.iter().zip(xdir).map(|(yi, xi)| yi + cfg.x_norm * xi).collect();
            let mut perp = v.clone();
            let mut pq2 = 0.0;
            for j in 0..n {
                let c = basis.column(j);
                crate::linalg::axpy(-dot(c, &v), c, &mut perp);
                let t = dot(c, &y);
                pq2 += t * t;
            }
            let pp2 = dot(&perp, &perp);
            let r = sqrt(pp2 / (pp2 + pq2));
            if r >= r0 {
                hits += 1;
            }
        }
        hits
    });
    Ok(TrialSummary::new(events, cfg.trials, theory))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::Sequential;

    fn cfg() -> ExperimentConfig {
        ExperimentConfig { m: 10, n: 3, sigma: 0.3, x_norm: 1.0, eps: 1.2, trials: 20_000, seed: 3, ..Default::default() }
    }

    #[test]
    fn grids() {
        let g = log_grid(1e-3, 1.0, 4).unwrap();
        assert_eq!(g.len(), 4);
        assert!((g[1] - 1e-2).abs() < 1e-15 && g[3] == 1.0);
        assert!(log_grid(0.0, 1.0, 3).is_err());
        assert_eq!(log_grid(2.0, 5.0, 1).unwrap(), vec![2.0]);
    }

    #[test]
    fn norm_tail_agrees() {
        let s = norm_tail_experiment(&cfg(), &Sequential).unwrap();
        assert!(s.z_score.abs() < 4.0, "{s}");
        let again = norm_tail_experiment(&cfg(), &Sequential).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn figure_regimes() {
        let c = ExperimentConfig { eps: 0.9, sigma: 1e-3, trials: 2000, ..cfg() };
        let s = norm_tail_experiment(&c, &Sequential).unwrap();
        assert_eq!(s.empirical_prob, 1.0);
        assert!(s.theory_prob > 1.0 - 1e-12);
        let c = ExperimentConfig { eps: 1.5, ..c };
        let s = norm_tail_experiment(&c, &Sequential).unwrap();
        assert_eq!(s.empirical_prob, 0.0);
        assert!(s.theory_prob < 1e-12);
    }

    #[test]
    fn projection_small() {
        let c = ExperimentConfig { m: 8, n: 3, sigma: 0.2, x_norm: 0.3, eps: 0.5, ..cfg() };
        let r = projection_noise_experiment(&c, &Sequential).unwrap();
        assert_eq!(r.covariance.rows(), 5);
        assert!(r.covariance_ok(), "{} > {}", r.max_deviation, r.tolerance);
        assert!(r.tail.z_score.abs() < 4.0, "{}", r.tail);
        let c0 = ExperimentConfig { n: 0, ..c };
        let r = projection_noise_experiment(&c0, &Sequential).unwrap();
        assert_eq!(r.covariance.rows(), 8);
        assert!(r.covariance_ok());
    }

    #[test]
    fn ls_residual_cases() {
        let c = ExperimentConfig { m: 12, n: 4, sigma: 0.3, eps1: 0.5, eps2: 1.0, trials: 10_000, ..cfg() };
        let s = ls_residual_experiment(&c, &Sequential).unwrap();
        assert!(s.z_score.abs() < 4.0, "{s}");
        let c0 = ExperimentConfig { x_norm: 0.0, ..c };
        let s = ls_residual_experiment(&c0, &Sequential).unwrap();
        assert!(s.z_score.abs() < 3.0, "{s}");
        let big = ExperimentConfig { eps1: 1e12, trials: 500, ..c };
        assert_eq!(ls_residual_experiment(&big, &Sequential).unwrap().empirical_prob, 1.0);
    }
}
