use std::fs;
use std::io::Write;
use std::path::Path;

use qrnoise_core::bounds::{
    kappa_bound_eps, kappa_bound_general, kappa_bound_unit_columns, kappa_bound_unit_q,
    kappa_bound_via_q, liesen_residual_identity_check, minmax_singular_bounds,
    residual_tail_prob_printed, BoundReport, UNIT_TOLERANCE,
};
use qrnoise_core::linalg::{norm2, DenseMatrix};
use qrnoise_core::sim::{
    log_grid, ls_residual_experiment, noisy_qr_experiment, norm_tail_sweep,
    projection_noise_experiment, random_unit_columns, ExperimentConfig,
};
use qrnoise_core::specfun::{self, MarcumOrder, TailProbability};

use super::args::*;
use super::CliError;
use crate::csv::{cell, read_matrix, read_vector, Table};
use crate::errata;
use crate::runner::Parallel;

pub(super) fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Specfun(a) => specfun_cmd(&a, out),
        Command::Bounds(a) => bounds_cmd(&a, out),
        Command::SimNormTail(a) => norm_tail_cmd(&a, out, err),
        Command::SimProjection(a) => projection_cmd(&a, out, err),
        Command::SimLs(a) => ls_cmd(&a, out, err),
        Command::SimQrNoise(a) => qr_noise_cmd(&a, out, err),
        Command::ErrataReport(a) => errata_cmd(&a, out, err),
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            writeln!(err, "wrote {}", p.display())?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn runner(workers: usize) -> Result<Parallel, CliError> {
    Parallel::new(workers).map_err(|e| CliError::Input(format!("cannot start worker pool: {e}")))
}

fn need<T: Copy>(v: Option<T>, flag: &str, f: Function) -> Result<T, CliError> {
    v.ok_or_else(|| {
        let name = f.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default();
        CliError::Input(format!("--fn {name} requires --{flag}"))
    })
}

use clap::ValueEnum;

fn specfun_cmd(a: &SpecfunArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let f = a.function;
    let tail = |p: TailProbability| (p.value(), Some(p.abs_error_bound()));
    let (value, bound) = match f {
        Function::Marcum => tail(specfun::marcum_q(
            MarcumOrder::new(need(a.order, "order", f)?)?,
            need(a.alpha, "alpha", f)?,
            need(a.beta, "beta", f)?,
        )?),
        Function::Chi2Cdf => tail(specfun::noncentral_chi2_cdf(
            need(a.k, "k", f)?,
            need(a.lambda, "lambda", f)?,
            need(a.x, "x", f)?,
        )?),
        Function::FSf => tail(specfun::noncentral_f_sf(
            need(a.d1, "d1", f)?,
            need(a.d2, "d2", f)?,
            need(a.lambda, "lambda", f)?,
            need(a.x, "x", f)?,
        )?),
        Function::NormTail => tail(specfun::norm_tail_prob(
            need(a.x_norm, "x-norm", f)?,
            need(a.sigma, "sigma", f)?,
            need(a.eps, "eps", f)?,
            need(a.m, "m", f)?,
        )?),
        Function::BesselI => (specfun::bessel_i(need(a.nu, "nu", f)?, need(a.t, "t", f)?)?, None),
        Function::BesselIScaled => (specfun::bessel_i_scaled(need(a.nu, "nu", f)?, need(a.t, "t", f)?)?, None),
        Function::LogGamma => (specfun::log_gamma(need(a.x, "x", f)?)?, None),
        Function::GammaP => (specfun::regularized_lower_gamma(need(a.s, "s", f)?, need(a.x, "x", f)?)?, None),
        Function::GammaQ => (specfun::regularized_upper_gamma(need(a.s, "s", f)?, need(a.x, "x", f)?)?, None),
        Function::BetaI => (
            specfun::regularized_incomplete_beta(need(a.a, "a", f)?, need(a.b, "b", f)?, need(a.x, "x", f)?)?,
            None,
        ),
    };
    let name = f.to_possible_value().expect("no skipped variants").get_name().to_string();
    let mut t = Table::new(&["function", "value", "abs_error_bound"]);
    t.push(vec![name, cell(value), bound.map(cell).unwrap_or_default()]);
    out.write_all(t.render().as_bytes())?;
    Ok(())
}

fn check_len(v: &[f64], rows: usize, what: &str) -> Result<(), CliError> {
    if v.len() == rows {
        Ok(())
    } else {
        Err(CliError::Input(format!("{what} has {} entries but B has {rows} rows", v.len())))
    }
}

fn has_unit_columns(b: &DenseMatrix) -> bool {
    b.columns().all(|c| (norm2(c) - 1.0).abs() <= UNIT_TOLERANCE)
}

fn bounds_cmd(a: &BoundsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let b = read_matrix(&a.matrix)?;
    let mut reports: Vec<BoundReport> = Vec::new();
    let mut notes: Vec<String> = Vec::new();

    let xy = match (&a.x, &a.y) {
        (Some(xp), Some(yp)) => {
            let x = read_vector(xp)?;
            let y = read_vector(yp)?;
            check_len(&x, b.rows(), "--x")?;
            check_len(&y, b.rows(), "--y")?;
            reports.push(kappa_bound_general(&b, &x, &y, a.gamma)?);
            if let Some(eps) = a.eps {
                reports.push(kappa_bound_eps(&b, &x, &y, eps)?);
            }
            Some(x.iter().zip(&y).map(|(p, q)| p + q).collect::<Vec<f64>>())
        }
        _ => None,
    };
    let c = match (&a.column, xy) {
        (Some(p), _) => read_vector(p)?,
        (None, Some(v)) => v,
        (None, None) => return Err(CliError::Input("bounds needs --column or --x with --y".into())),
    };
    check_len(&c, b.rows(), "column")?;

    let (hi, lo) = minmax_singular_bounds(&b, &c, a.gamma)?;
    reports.push(hi);
    reports.push(lo);
    reports.push(kappa_bound_via_q(&b, &c, a.gamma)?);
    if has_unit_columns(&b) {
        reports.push(kappa_bound_unit_columns(&b, &c, a.gamma)?);
        let cn = norm2(&c);
        if cn > 0.0 {
            let q: Vec<f64> = c.iter().map(|v| v / cn).collect();
            reports.push(kappa_bound_unit_q(&b, &q)?);
        }
    } else {
        notes.push("unit-column bounds skipped: B has columns that are not unit norm".into());
    }
    if b.rows() > b.cols() {
        match liesen_residual_identity_check(&b, &c, a.gamma) {
            Ok(id) => notes.push(format!(
                "residual identity: direct {:.15e}, singular-value product {:.15e}, orthonormal factor {:.15e}, max relative discrepancy {:.3e}",
                id.direct, id.via_singular_values, id.via_q, id.discrepancy()
            )),
            Err(e) => notes.push(format!("residual identity skipped: {e}")),
        }
    }

    let mut s = String::new();
    if a.csv {
        s.push_str(BoundReport::CSV_HEADER);
        s.push('\n');
        for r in &reports {
            s.push_str(&r.csv_row());
            s.push('\n');
        }
    } else {
        for r in &reports {
            s.push_str(&r.to_string());
        }
        for n in &notes {
            s.push_str(n);
            s.push('\n');
        }
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

fn sigmas(single: Option<f64>, grid: Option<Grid>, default: f64) -> Result<Vec<f64>, CliError> {
    match (single, grid) {
        (_, Some(g)) => Ok(log_grid(g.start, g.stop, g.count)?),
        (Some(s), None) => Ok(vec![s]),
        (None, None) => Ok(vec![default]),
    }
}

const NORM_TAIL_HEADER: [&str; 10] =
    ["m", "sigma", "x_norm", "eps", "trials", "events", "empirical", "theory", "stderr", "z"];

fn norm_tail_table(
    cfg: &ExperimentConfig,
    grid: &[f64],
    runner: &Parallel,
    table: &mut Table,
) -> Result<(), CliError> {
    let rows = norm_tail_sweep(cfg, grid, runner)?;
    for (s, r) in grid.iter().zip(rows) {
        table.push(vec![
            cell(cfg.m),
            cell(s),
            cell(cfg.x_norm),
            cell(cfg.eps),
            cell(r.trials),
            cell(r.events),
            cell(r.empirical_prob),
            cell(r.theory_prob),
            cell(r.stderr),
            cell(r.z_score),
        ]);
    }
    Ok(())
}

fn norm_tail_cmd(a: &NormTailArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let runner = runner(a.run.workers)?;
    let grid = sigmas(a.sigma, a.sigma_grid, 0.1)?;
    let cfg = ExperimentConfig {
        m: a.m,
        x_norm: a.x_norm,
        eps: a.eps,
        trials: a.run.trials,
        seed: a.run.seed,
        ..ExperimentConfig::default()
    };
    let mut t = Table::new(&NORM_TAIL_HEADER);
    norm_tail_table(&cfg, &grid, &runner, &mut t)?;
    emit(&t.render(), a.run.out.as_deref(), out, err)?;

    if let Some(dir) = &a.figures {
        fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
        let fig_grid = match a.sigma_grid {
            Some(g) => log_grid(g.start, g.stop, g.count)?,
            None => log_grid(1e-3, 1.0, 20)?,
        };
        for (name, eps) in [("fig1_norm_tail.csv", 0.9), ("fig2_norm_tail.csv", 1.5)] {
            let mut t = Table::new(&NORM_TAIL_HEADER);
            for m in [10, 100] {
                let c = ExperimentConfig { m, eps, ..cfg };
                norm_tail_table(&c, &fig_grid, &runner, &mut t)?;
            }
            emit(&t.render(), Some(&dir.join(name)), out, err)?;
        }
    }
    Ok(())
}

fn projection_cmd(a: &ProjectionArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let runner = runner(a.run.workers)?;
    let cfg = ExperimentConfig {
        m: a.m,
        n: a.n,
        sigma: a.sigma,
        x_norm: a.x_norm,
        eps: a.eps,
        trials: a.run.trials,
        seed: a.run.seed,
        ..ExperimentConfig::default()
    };
    let r = projection_noise_experiment(&cfg, &runner)?;
    let mut t = Table::new(&[
        "m", "n", "sigma", "x_norm", "eps", "trials", "max_cov_deviation", "cov_tolerance", "events",
        "empirical", "theory", "stderr", "z",
    ]);
    t.push(vec![
        cell(a.m),
        cell(a.n),
        cell(a.sigma),
        cell(a.x_norm),
        cell(a.eps),
        cell(r.tail.trials),
        cell(r.max_deviation),
        cell(r.tolerance),
        cell(r.tail.events),
        cell(r.tail.empirical_prob),
        cell(r.tail.theory_prob),
        cell(r.tail.stderr),
        cell(r.tail.z_score),
    ]);
    emit(&t.render(), a.run.out.as_deref(), out, err)
}

fn ls_cmd(a: &LsArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let runner = runner(a.run.workers)?;
    let mut t = Table::new(&[
        "m", "n", "sigma", "x_norm", "eps1", "eps2", "trials", "events", "empirical", "theory", "stderr", "z",
        "theory_unsquared", "z_unsquared",
    ]);
    for s in sigmas(a.sigma, a.sigma_grid, 0.05)? {
        let cfg = ExperimentConfig {
            m: a.m,
            n: a.n,
            sigma: s,
            x_norm: a.x_norm,
            eps1: a.eps1,
            eps2: a.eps2,
            trials: a.run.trials,
            seed: a.run.seed,
            ..ExperimentConfig::default()
        };
        let r = ls_residual_experiment(&cfg, &runner)?;
        let printed = residual_tail_prob_printed(a.m, a.n, a.x_norm, s, a.eps1, a.eps2)?.value();
        let rp = r.against(printed);
        t.push(vec![
            cell(a.m),
            cell(a.n),
            cell(s),
            cell(a.x_norm),
            cell(a.eps1),
            cell(a.eps2),
            cell(r.trials),
            cell(r.events),
            cell(r.empirical_prob),
            cell(r.theory_prob),
            cell(r.stderr),
            cell(r.z_score),
            cell(printed),
            cell(rp.z_score),
        ]);
    }
    emit(&t.render(), a.run.out.as_deref(), out, err)
}

fn qr_noise_cmd(a: &QrNoiseArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let runner = runner(a.run.workers)?;
    let input = match &a.matrix {
        Some(p) => read_matrix(p)?,
        None => {
            if a.n > a.m || a.n < 2 {
                return Err(CliError::Input("sim-qr-noise needs 2 <= n <= m".into()));
            }
            random_unit_columns(a.m, a.n, a.run.seed)
        }
    };
    let mut t = Table::new(&[
        "m", "n", "sigma", "eps1", "eps2", "trials", "excluded", "violations", "violation_freq", "allowance",
        "stderr", "kappa_product_bound", "max_final_kappa",
    ]);
    for s in sigmas(a.sigma, a.sigma_grid, 1e-3)? {
        let cfg = ExperimentConfig {
            m: input.rows(),
            n: input.cols(),
            sigma: s,
            eps1: a.eps1,
            eps2: a.eps2,
            trials: a.run.trials,
            seed: a.run.seed,
            ..ExperimentConfig::default()
        };
        let r = noisy_qr_experiment(&cfg, &input, &runner)?;
        t.push(vec![
            cell(cfg.m),
            cell(cfg.n),
            cell(s),
            cell(a.eps1),
            cell(a.eps2),
            cell(r.trials),
            cell(r.excluded),
            cell(r.violations),
            cell(r.violation_freq),
            cell(r.allowance),
            cell(r.stderr),
            cell(r.kappa_product_bound),
            cell(r.max_final_kappa),
        ]);
    }
    emit(&t.render(), a.run.out.as_deref(), out, err)
}

fn errata_cmd(a: &ErrataArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let runner = runner(a.workers)?;
    let text = errata::report(a.trials, a.seed, &runner)?;
    emit(&text, a.out.as_deref(), out, err)
}
