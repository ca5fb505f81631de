//! Release acceptance checks. Each test writes one `PASS`/`FAIL` line to
//! stderr (uncaptured) and then asserts the same verdict.

use std::io::Write;
use std::process::Command;

use nalgebra::DMatrix;
use qrnoise::runner::Parallel;
use qrnoise_core::bounds::{
    kappa_bound_eps, kappa_bound_general, kappa_bound_unit_columns, kappa_bound_unit_q, kappa_bound_via_q,
    liesen_kappa_from_residual, liesen_residual_identity_check, minmax_singular_bounds, rank2_eigenvalues,
    residual_tail_prob_printed, BoundReport,
};
use qrnoise_core::linalg::{append_column, cond, ls_residual_norm, norm2, project_perp, DenseMatrix, HouseholderQr};
use qrnoise_core::sim::{
    gaussian_matrix, gaussian_vector, log_grid, ls_residual_experiment, noisy_qr_experiment, norm_tail_sweep,
    projection_noise_experiment, random_unit_columns, stream_rng, ExperimentConfig, StreamRng,
};
use qrnoise_core::specfun::{marcum_q, noncentral_chi2_cdf, MarcumOrder};
use rand::Rng;

const DUALITY_TOL: f64 = 1e-9;
const Z_LIMIT: f64 = 4.0;
const LIESEN_TOL: f64 = 1e-8;
const IDENTITY_TOL: f64 = 1e-8;
const EIGEN_TOL: f64 = 1e-12;
const SWEEP_INSTANCES: usize = 500;
const SEED: u64 = 20240601;

fn verdict(id: &str, ok: bool, detail: String) {
    let tag = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "[acceptance] criterion {id}: {tag} | {detail}");
    assert!(ok, "criterion {id}: {detail}");
}

fn runner() -> Parallel {
    Parallel::new(0).expect("thread pool")
}

fn log_uniform(rng: &mut StreamRng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

fn random_orthonormal(m: usize, n: usize, rng: &mut StreamRng) -> DenseMatrix {
    HouseholderQr::new(&gaussian_matrix(m, n, rng)).unwrap().thin_q()
}

fn unit_columns(m: usize, n: usize, rng: &mut StreamRng) -> DenseMatrix {
    let cols: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let v = gaussian_vector(m, 1.0, rng);
            let s = norm2(&v);
            v.iter().map(|x| x / s).collect()
        })
        .collect();
    DenseMatrix::from_columns(&cols).unwrap()
}

fn dims(rng: &mut StreamRng) -> (usize, usize) {
    let m = rng.random_range(3..=40);
    let n = rng.random_range(1..=12.min(m - 1));
    (m, n)
}

#[test]
fn c01_marcum_chi2_duality() {
    let mut worst: f64 = 0.0;
    for k in [1.0, 2.0, 3.0, 10.0, 100.0] {
        for lambda in [0.0, 0.5, 4.0, 100.0] {
            for x in [0.1, 1.0, 10.0, 200.0] {
                let cdf = noncentral_chi2_cdf(k, lambda, x).unwrap().value();
                let q = marcum_q(MarcumOrder::new(k / 2.0).unwrap(), lambda.sqrt(), x.sqrt()).unwrap().value();
                worst = worst.max(((1.0 - cdf) - q).abs());
            }
        }
    }
    verdict("1", worst <= DUALITY_TOL, format!("max |1 - F - Q| = {worst:.3e} over 80 points, tol {DUALITY_TOL:e}"));
}

#[test]
fn c02_norm_tail_figures() {
    let runner = runner();
    let grid = log_grid(1e-3, 1.0, 20).unwrap();
    let mut worst_z: f64 = 0.0;
    let mut ends = Vec::new();
    for eps in [0.9, 1.5] {
        for m in [10, 100] {
            let cfg = ExperimentConfig { m, x_norm: 1.0, eps, trials: 100_000, seed: SEED, ..Default::default() };
            let rows = norm_tail_sweep(&cfg, &grid, &runner).unwrap();
            worst_z = rows.iter().fold(worst_z, |w, r| w.max(r.z_score.abs()));
            ends.push((eps, rows[0].theory_prob));
        }
    }
    let ends_ok = ends.iter().all(|&(eps, p)| if eps < 1.0 { p >= 1.0 - 1e-6 } else { p <= 1e-6 });
    verdict(
        "2",
        worst_z <= Z_LIMIT && ends_ok,
        format!("max |z| = {worst_z:.2} over 80 points (limit {Z_LIMIT}); theory at sigma=1e-3: {ends:?}"),
    );
}

#[test]
fn c03_liesen_exactness() {
    let mut rng = stream_rng(SEED, 3);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let (m, n) = dims(&mut rng);
        let q = random_orthonormal(m, n, &mut rng);
        let c = gaussian_vector(m, log_uniform(&mut rng, 0.1, 10.0), &mut rng);
        let r = ls_residual_norm(&q, &c).unwrap();
        for gamma in [0.1, 1.0, 10.0] {
            let predicted = liesen_kappa_from_residual(norm2(&c), gamma, r).unwrap();
            let actual = cond(&append_column(&q, &c, gamma).unwrap()).unwrap();
            worst = worst.max((predicted - actual).abs() / actual);
        }
    }
    verdict("3", worst <= LIESEN_TOL, format!("max relative error {worst:.3e} over 600 cases, tol {LIESEN_TOL:e}"));
}

#[test]
fn c04_residual_identity() {
    let mut rng = stream_rng(SEED, 4);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (m, n) = dims(&mut rng);
        let b = gaussian_matrix(m, n, &mut rng);
        let c = gaussian_vector(m, 1.0, &mut rng);
        let gamma = log_uniform(&mut rng, 0.1, 10.0);
        worst = worst.max(liesen_residual_identity_check(&b, &c, gamma).unwrap().discrepancy());
    }
    verdict("4", worst <= IDENTITY_TOL, format!("max pairwise discrepancy {worst:.3e} over 100 instances, tol {IDENTITY_TOL:e}"));
}

/// Draws instances until `SWEEP_INSTANCES` have their preconditions met and
/// counts those whose actual value breaks the bound.
fn sweep(id: &str, stream: u64, mut draw: impl FnMut(&mut StreamRng) -> Vec<BoundReport>) {
    let mut rng = stream_rng(SEED, stream);
    let (mut valid, mut violations, mut draws) = (0usize, 0usize, 0usize);
    let mut worst: f64 = 0.0;
    while valid < SWEEP_INSTANCES {
        draws += 1;
        assert!(draws < 100 * SWEEP_INSTANCES, "too few instances meet the preconditions");
        let reports = draw(&mut rng);
        if reports.iter().any(|r| !r.preconditions_met) {
            continue;
        }
        valid += 1;
        let mut bad = false;
        for r in &reports {
            if r.holds() == Some(false) {
                bad = true;
                let a = r.actual_value.unwrap();
                worst = worst.max((a - r.bound_value).abs() / r.bound_value);
            }
        }
        violations += bad as usize;
    }
    verdict(
        id,
        violations == 0,
        format!("{violations}/{valid} valid instances violate ({draws} drawn); worst relative excess {worst:.3e}"),
    );
}

fn perturbation(rng: &mut StreamRng, b: &DenseMatrix) -> (Vec<f64>, Vec<f64>) {
    let m = b.rows();
    let q = HouseholderQr::new(b).unwrap().thin_q();
    let x = project_perp(&q, &gaussian_vector(m, log_uniform(rng, 0.1, 10.0), rng)).unwrap();
    let y = gaussian_vector(m, log_uniform(rng, 1e-3, 1.0), rng);
    (x, y)
}

#[test]
fn c05a_kappa_bound_general() {
    sweep("5a (kappa_bound_general)", 51, |rng| {
        let (m, n) = dims(rng);
        let b = gaussian_matrix(m, n, rng);
        let (x, y) = perturbation(rng, &b);
        let gamma = log_uniform(rng, 0.1, 10.0);
        vec![kappa_bound_general(&b, &x, &y, gamma).unwrap()]
    });
}

#[test]
fn c05b_kappa_bound_eps() {
    sweep("5b (kappa_bound_eps)", 52, |rng| {
        let (m, n) = dims(rng);
        let b = unit_columns(m, n, rng);
        let (x, y) = perturbation(rng, &b);
        let xy: Vec<f64> = x.iter().zip(&y).map(|(p, q)| p + q).collect();
        let t = norm2(&b.tr_mul_vec(&y).unwrap()) / norm2(&xy);
        let eps = (1.0 + 4.0 * t * t).sqrt() * rng.random_range(1.0..1.5);
        vec![kappa_bound_eps(&b, &x, &y, eps).unwrap()]
    });
}

#[test]
fn c05c_minmax_singular_bounds() {
    sweep("5c (minmax_singular_bounds)", 53, |rng| {
        let (m, n) = dims(rng);
        let b = gaussian_matrix(m, n, rng);
        let c = gaussian_vector(m, log_uniform(rng, 0.1, 10.0), rng);
        let (hi, lo) = minmax_singular_bounds(&b, &c, log_uniform(rng, 0.1, 10.0)).unwrap();
        vec![hi, lo]
    });
}

#[test]
fn c05d_kappa_bound_via_q() {
    sweep("5d (kappa_bound_via_q)", 54, |rng| {
        let (m, n) = dims(rng);
        let b = gaussian_matrix(m, n, rng);
        let c = gaussian_vector(m, log_uniform(rng, 0.1, 10.0), rng);
        vec![kappa_bound_via_q(&b, &c, log_uniform(rng, 0.1, 10.0)).unwrap()]
    });
}

#[test]
fn c05e_kappa_bound_unit_columns() {
    sweep("5e (kappa_bound_unit_columns)", 55, |rng| {
        let (m, n) = dims(rng);
        let b = unit_columns(m, n, rng);
        let c = gaussian_vector(m, log_uniform(rng, 0.1, 10.0), rng);
        vec![kappa_bound_unit_columns(&b, &c, log_uniform(rng, 0.1, 10.0)).unwrap()]
    });
}

#[test]
fn c05f_kappa_bound_unit_q() {
    sweep("5f (kappa_bound_unit_q)", 56, |rng| {
        let (m, n) = dims(rng);
        let b = unit_columns(m, n, rng);
        let q = unit_columns(m, 1, rng);
        vec![kappa_bound_unit_q(&b, q.column(0)).unwrap()]
    });
}

#[test]
fn c06_rank2_eigenvalues() {
    let mut rng = stream_rng(SEED, 6);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let d = rng.random_range(2..=10);
        let a = gaussian_vector(d - 1, log_uniform(&mut rng, 0.1, 10.0), &mut rng);
        let b: f64 = rng.random_range(-10.0..10.0);
        // zero block first, border in the last row and column
        let mut bordered = DMatrix::<f64>::zeros(d, d);
        for i in 0..d - 1 {
            bordered[(i, d - 1)] = a[i];
            bordered[(d - 1, i)] = a[i];
        }
        bordered[(d - 1, d - 1)] = b;
        let mut got: Vec<f64> = bordered.symmetric_eigenvalues().iter().copied().collect();
        got.sort_by(f64::total_cmp);
        let [_, plus, minus] = rank2_eigenvalues(norm2(&a), b);
        let mut want = vec![0.0; d - 2];
        want.extend([plus, minus]);
        want.sort_by(f64::total_cmp);
        let scale = want.iter().fold(1.0f64, |s, v| s.max(v.abs()));
        for (g, w) in got.iter().zip(&want) {
            worst = worst.max((g - w).abs() / scale);
        }
    }
    verdict("6", worst <= EIGEN_TOL, format!("max scaled eigenvalue error {worst:.3e} over 100 matrices, tol {EIGEN_TOL:e}"));
}

#[test]
fn c07_projected_noise() {
    let cfg = ExperimentConfig { m: 20, n: 5, sigma: 0.1, x_norm: 0.3, eps: 0.5, trials: 100_000, seed: SEED, ..Default::default() };
    let r = projection_noise_experiment(&cfg, &runner()).unwrap();
    verdict(
        "7",
        r.covariance_ok() && r.tail.z_score.abs() <= Z_LIMIT,
        format!(
            "covariance max deviation {:.3e} (tol {:.3e}); tail z {:+.2} (limit {Z_LIMIT})",
            r.max_deviation, r.tolerance, r.tail.z_score
        ),
    );
}

#[test]
fn c08_residual_tail_arbitration() {
    let cfg = ExperimentConfig { m: 30, n: 5, sigma: 0.05, x_norm: 1.0, eps1: 0.2, eps2: 1.0, trials: 100_000, seed: SEED, ..Default::default() };
    let r = ls_residual_experiment(&cfg, &runner()).unwrap();
    let printed = r.against(residual_tail_prob_printed(30, 5, 1.0, 0.05, 0.2, 1.0).unwrap().value());
    verdict(
        "8",
        r.z_score.abs() <= Z_LIMIT,
        format!(
            "empirical {:.6}; squared-ratio theory {:.6} z {:+.2} (limit {Z_LIMIT}); printed form {:.6} z {:+.2}",
            r.empirical_prob, r.theory_prob, r.z_score, printed.theory_prob, printed.z_score
        ),
    );
}

#[test]
fn c09_noisy_qr_chain() {
    let runner = runner();
    let a = random_unit_columns(100, 5, SEED);
    let cfg = ExperimentConfig { m: 100, n: 5, sigma: 1e-3, eps1: 0.05, eps2: 1.0, trials: 10_000, seed: SEED, ..Default::default() };
    let noisy = noisy_qr_experiment(&cfg, &a, &runner).unwrap();
    let exact = noisy_qr_experiment(&ExperimentConfig { sigma: 0.0, ..cfg }, &a, &runner).unwrap();
    let exact_dev = exact.max_final_kappa - 1.0;
    verdict(
        "9",
        noisy.within_allowance() && exact_dev.abs() <= 1e-10,
        format!(
            "violation freq {:.3e} vs allowance {:.3e} + 3 x stderr {:.3e} ({} excluded); sigma=0 max kappa - 1 = {exact_dev:.3e}",
            noisy.violation_freq, noisy.allowance, noisy.stderr, noisy.excluded
        ),
    );
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_qrnoise")).args(args).output().expect("spawn qrnoise");
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

#[test]
fn c10_determinism() {
    let cases: [&[&str]; 4] = [
        &["sim-norm-tail", "--m", "50", "--sigma-grid", "1e-3:1:5", "--trials", "5000", "--seed", "7"],
        &["sim-projection", "--trials", "5000", "--seed", "7"],
        &["sim-ls", "--sigma-grid", "0.01:0.2:3", "--trials", "5000", "--seed", "7"],
        &["sim-qr-noise", "--m", "30", "--sigma-grid", "1e-3:1e-1:3", "--trials", "3000", "--seed", "7"],
    ];
    let mut mismatched = Vec::new();
    for args in cases {
        let with = |w: &str| {
            let mut v = args.to_vec();
            v.extend(["--workers", w]);
            run_cli(&v)
        };
        let (a, b, c) = (with("1"), with("1"), with("8"));
        if a != b || a != c || a.is_empty() {
            mismatched.push(args[0]);
        }
    }
    verdict(
        "10",
        mismatched.is_empty(),
        format!("4 sim subcommands run twice with 1 worker and once with 8; mismatched: {mismatched:?}"),
    );
}
