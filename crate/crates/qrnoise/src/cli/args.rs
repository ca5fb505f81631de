use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Condition-number growth bounds and Gaussian-noise orthogonalisation experiments.
///
/// Exit status: 0 on success, 1 for invalid input, 2 when a mathematical
/// precondition fails (for example a rank-deficient matrix).
#[derive(Debug, Parser)]
#[command(name = "qrnoise", version, propagate_version = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a special function (Marcum Q, noncentral chi-square and F laws,
    /// Bessel I, incomplete gamma and beta).
    ///
    /// Prints `function,value,abs_error_bound`.
    Specfun(SpecfunArgs),
    /// Evaluate every applicable condition-number bound for appending a column
    /// to the matrix B, together with the true values.
    ///
    /// With --column: singular-value bounds through the orthonormal factor of B,
    /// the unit-column bounds (when B has unit columns) and the three-way
    /// residual identity. With --x and --y (x orthogonal to B): the perturbed
    /// orthogonal column bounds. CSV columns with --csv: kind, relation, bound,
    /// actual, preconditions_met, sigma_max, sigma_min, gamma, xy_norm,
    /// bty_norm, c_norm, r_norm, eps, kappa_b.
    Bounds(BoundsArgs),
    /// Tail law of ‖X + Y‖ for Gaussian noise Y ~ N(0, σ²I): the generalized
    /// Marcum Q function of order m/2.
    ///
    /// CSV columns: m, sigma, x_norm, eps, trials, events, empirical, theory,
    /// stderr, z.
    SimNormTail(NormTailArgs),
    /// Noise projected onto the orthogonal complement of a random orthonormal Q
    /// stays i.i.d. N(0, σ²), and ‖X + P⊥Y‖ follows the Marcum law of order
    /// (m−n)/2.
    ///
    /// CSV columns: m, n, sigma, x_norm, eps, trials, max_cov_deviation,
    /// cov_tolerance, events, empirical, theory, stderr, z.
    SimProjection(ProjectionArgs),
    /// Normalised least-squares residual of a noisy column: probability that
    /// ‖r‖ ≥ 1/√(1 + (ε₁/ε₂)²) from the noncentral F survival function.
    ///
    /// CSV columns: m, n, sigma, x_norm, eps1, eps2, trials, events,
    /// empirical, theory, stderr, z, theory_unsquared, z_unsquared.
    SimLs(LsArgs),
    /// Gram-Schmidt with noisy orthogonalisation: how often κ(Q̂) exceeds the
    /// product of per-step growth factors, against the union-bound allowance.
    ///
    /// CSV columns: m, n, sigma, eps1, eps2, trials, excluded, violations,
    /// violation_freq, allowance, stderr, kappa_product_bound,
    /// max_final_kappa.
    SimQrNoise(QrNoiseArgs),
    /// Side-by-side values of the printed and implemented forms of every
    /// disputed formula, with Monte Carlo arbitration where it applies.
    ErrataReport(ErrataArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Function {
    /// Q_M(α, β): --order --alpha --beta
    Marcum,
    /// noncentral chi-square CDF: --k --lambda --x
    Chi2Cdf,
    /// noncentral F survival: --d1 --d2 --lambda --x
    FSf,
    /// P(‖X+Y‖ > ε): --x-norm --sigma --eps --m
    NormTail,
    /// I_ν(t): --nu --t
    BesselI,
    /// e^{-t} I_ν(t): --nu --t
    BesselIScaled,
    /// ln Γ(x): --x
    LogGamma,
    /// P(s, x): --s --x
    GammaP,
    /// Q(s, x): --s --x
    GammaQ,
    /// I_x(a, b): --a --b --x
    BetaI,
}

#[derive(Debug, Args)]
pub struct SpecfunArgs {
    #[arg(long = "fn", value_enum)]
    pub function: Function,
    #[arg(long)]
    pub order: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    #[arg(long)]
    pub d1: Option<f64>,
    #[arg(long)]
    pub d2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub nu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub x_norm: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Matrix B (CSV matrix file).
    #[arg(long)]
    pub matrix: PathBuf,
    /// Appended column c (m×1 or 1×m CSV matrix file).
    #[arg(long)]
    pub column: Option<PathBuf>,
    /// Component x of the appended column, orthogonal to span(B).
    #[arg(long, requires = "y")]
    pub x: Option<PathBuf>,
    /// Perturbation y of the appended column.
    #[arg(long, requires = "x")]
    pub y: Option<PathBuf>,
    /// Scale γ of the appended column.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub gamma: f64,
    /// ε for the normalised perturbed-column bound.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Print CSV rows instead of text blocks.
    #[arg(long)]
    pub csv: bool,
}

/// Log-spaced grid `start:stop:count`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(format!("expected start:stop:count, got `{s}`"));
        };
        let num = |v: &str| v.parse::<f64>().map_err(|_| format!("bad number `{v}` in grid"));
        let count = n.parse::<usize>().map_err(|_| format!("bad count `{n}` in grid"))?;
        let g = Grid { start: num(a)?, stop: num(b)?, count };
        if !(g.start > 0.0 && g.stop > 0.0 && g.start.is_finite() && g.stop.is_finite()) || count == 0 {
            return Err(format!("grid `{s}` needs positive end points and count"));
        }
        Ok(g)
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Monte Carlo trials (per grid point).
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// Seed for every random draw.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 = all cores). Results do not depend on this.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NormTailArgs {
    #[arg(long, default_value_t = 10)]
    pub m: usize,
    #[arg(long, default_value_t = 1.0)]
    pub x_norm: f64,
    #[arg(long, default_value_t = 0.9)]
    pub eps: f64,
    #[arg(long, conflicts_with = "sigma_grid")]
    pub sigma: Option<f64>,
    /// Log-spaced σ grid `start:stop:count`.
    #[arg(long)]
    pub sigma_grid: Option<Grid>,
    /// Also write fig1_norm_tail.csv (ε = 0.9) and fig2_norm_tail.csv (ε = 1.5)
    /// for m ∈ {10, 100} into this directory.
    #[arg(long)]
    pub figures: Option<PathBuf>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct ProjectionArgs {
    #[arg(long, default_value_t = 20)]
    pub m: usize,
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    #[arg(long, default_value_t = 0.1)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.3)]
    pub x_norm: f64,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct LsArgs {
    #[arg(long, default_value_t = 30)]
    pub m: usize,
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    #[arg(long, conflicts_with = "sigma_grid")]
    pub sigma: Option<f64>,
    /// Log-spaced σ grid `start:stop:count`.
    #[arg(long)]
    pub sigma_grid: Option<Grid>,
    #[arg(long, default_value_t = 1.0)]
    pub x_norm: f64,
    #[arg(long, default_value_t = 0.2)]
    pub eps1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eps2: f64,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct QrNoiseArgs {
    #[arg(long, default_value_t = 100)]
    pub m: usize,
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    #[arg(long, conflicts_with = "sigma_grid")]
    pub sigma: Option<f64>,
    /// Log-spaced σ grid `start:stop:count`.
    #[arg(long)]
    pub sigma_grid: Option<Grid>,
    #[arg(long, default_value_t = 0.05)]
    pub eps1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eps2: f64,
    /// Input matrix A (CSV); defaults to a seeded Gaussian m×n matrix with
    /// unit columns.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct ErrataArgs {
    /// Trials for the Monte Carlo arbitration.
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
