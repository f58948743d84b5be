use fracgalerkin::abel_solver::{reconstruct, solve as solve_abel, SolveOptions};
use fracgalerkin::frac_ops::{operator_matrix, Convention, OperatorKind, OperatorMatrix};
use fracgalerkin::io::{
    json_number, read_coefficients_csv, read_samples_csv, write_coefficients_csv,
    write_columns_csv, write_samples_csv, zm_report_json, Barycentric, MatrixFile,
};
use fracgalerkin::jacobi_basis::{build_basis, CoefficientVector, Interval, JacobiBasis};
use fracgalerkin::zm_analysis::{
    check_convergence_inequality, classify_regime, convergence_lhs, fit_decay, zm_series, DecayFit,
};
use serde_json::{json, Value};
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use crate::config::{check_alpha, check_nu_p, BasisArgs, JobConfig, KindArg};
use crate::CliError;

/// Points of the uniform grid used for plot-ready output.
const PLOT_POINTS: usize = 256;
/// Blending degree of the sample interpolant.
const RESAMPLE_DEGREE: usize = 4;
const ANALYZE_MIN_COEFFS: usize = 8;
const Q_GRID: usize = 16;

fn solver(e: fracgalerkin::Error) -> CliError {
    CliError::Solver(e)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Output(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    File::create(&path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}

fn open(path: &Path) -> Result<File, CliError> {
    File::open(path).map_err(|e| {
        CliError::Config(fracgalerkin::Error::Parse(format!(
            "{}: {e}",
            path.display()
        )))
    })
}

fn write_json(dir: &Path, name: &str, value: &Value) -> Result<(), CliError> {
    let w = create(dir, name)?;
    serde_json::to_writer_pretty(w, value).map_err(|e| CliError::Output(e.to_string()))
}

fn write_coeffs(dir: &Path, name: &str, values: &[f64]) -> Result<(), CliError> {
    write_coefficients_csv(create(dir, name)?, values).map_err(|e| CliError::Output(e.to_string()))
}

fn write_curve(dir: &Path, name: &str, xs: &[f64], ys: &[f64]) -> Result<(), CliError> {
    write_samples_csv(create(dir, name)?, xs, ys).map_err(|e| CliError::Output(e.to_string()))
}

fn plot_grid(interval: Interval) -> Vec<f64> {
    let (a, b) = (interval.a(), interval.b());
    (0..PLOT_POINTS)
        .map(|i| {
            if i + 1 == PLOT_POINTS {
                b
            } else {
                a + (b - a) * i as f64 / (PLOT_POINTS - 1) as f64
            }
        })
        .collect()
}

fn file_name(kind: OperatorKind) -> &'static str {
    match kind {
        OperatorKind::Integral => "matrix_integral.json",
        OperatorKind::Derivative => "matrix_derivative.json",
    }
}

pub fn matrix(
    args: &BasisArgs,
    alpha: f64,
    n: usize,
    kind: KindArg,
    convention: Convention,
) -> Result<(), CliError> {
    check_alpha(alpha)?;
    let basis = build_basis(args.interval()?, args.weight()?, n).map_err(CliError::Config)?;
    for k in kind.kinds() {
        let m = operator_matrix(&basis, alpha, k, n).map_err(solver)?;
        let file = serde_json::to_value(MatrixFile::from_matrix(&basis, &m, convention))
            .map_err(|e| CliError::Output(e.to_string()))?;
        write_json(&args.out, file_name(k), &file)?;
    }
    Ok(())
}

/// Resamples user data onto the rule nodes and projects onto the basis.
fn project_samples(
    basis: &JacobiBasis,
    path: &Path,
    order: usize,
    min_points: usize,
) -> Result<CoefficientVector, CliError> {
    let (xs, fs) = read_samples_csv(open(path)?).map_err(CliError::Config)?;
    if xs.len() < min_points {
        return Err(CliError::Config(fracgalerkin::Error::InsufficientData(
            format!("{} samples given, at least {min_points} required", xs.len()),
        )));
    }
    let interp = Barycentric::new(&xs, &fs, RESAMPLE_DEGREE).map_err(CliError::Config)?;
    let rule = basis.quadrature_rule(order).map_err(CliError::Config)?;
    let (lo, hi) = (rule.nodes()[0], rule.nodes()[rule.order() - 1]);
    if interp.min_x() > lo || interp.max_x() < hi {
        return Err(CliError::config(format!(
            "samples span [{}, {}] but the rule needs [{lo}, {hi}]",
            interp.min_x(),
            interp.max_x()
        )));
    }
    let values: Vec<f64> = rule.nodes().iter().map(|&x| interp.evaluate(x)).collect();
    basis.project(&values, &rule).map_err(solver)
}

fn apply_matrix(m: &OperatorMatrix, c: &[f64]) -> Vec<f64> {
    (0..m.size())
        .map(|i| m.row(i).iter().zip(c).map(|(g, v)| g * v).sum())
        .collect()
}

pub fn apply(
    args: &BasisArgs,
    alpha: f64,
    n: usize,
    kind: KindArg,
    input: Option<std::path::PathBuf>,
    samples: Option<std::path::PathBuf>,
    quad_order: Option<usize>,
) -> Result<(), CliError> {
    check_alpha(alpha)?;
    let kinds = kind.kinds();
    if kinds.len() != 1 {
        return Err(CliError::config(
            "apply needs --kind integral or --kind derivative".into(),
        ));
    }
    let basis = build_basis(args.interval()?, args.weight()?, n).map_err(CliError::Config)?;
    let coeffs = match (input, samples) {
        (Some(path), _) => {
            let c = read_coefficients_csv(open(&path)?).map_err(CliError::Config)?;
            if c.len() > n + 1 {
                return Err(CliError::config(format!(
                    "{} coefficients exceed --n + 1 = {}",
                    c.len(),
                    n + 1
                )));
            }
            c
        }
        (None, Some(path)) => {
            let order = quad_order.unwrap_or(2 * n + 64);
            project_samples(&basis, &path, order, 2 * (n + 1))?.into_values()
        }
        (None, None) => {
            return Err(CliError::config(
                "either --input or --samples is required".into(),
            ))
        }
    };
    let m = operator_matrix(&basis, alpha, kinds[0], n).map_err(solver)?;
    let image = apply_matrix(&m, &coeffs);
    write_coeffs(&args.out, "image_coeffs.csv", &image)?;
    let xs = plot_grid(basis.interval());
    let ys = xs
        .iter()
        .map(|&x| basis.eval_series(&image, x))
        .collect::<Result<Vec<_>, _>>()
        .map_err(solver)?;
    write_curve(&args.out, "image.csv", &xs, &ys)
}

pub fn solve(cfg: &JobConfig) -> Result<(), CliError> {
    let basis = build_basis(cfg.interval, cfg.weight, cfg.inner_n).map_err(CliError::Config)?;
    let f = project_samples(&basis, &cfg.samples, cfg.quad_order, cfg.min_samples())?;
    let d = operator_matrix(&basis, cfg.alpha, OperatorKind::Derivative, cfg.inner_n)
        .map_err(solver)?;
    let opts = SolveOptions {
        nu: cfg.nu,
        p: cfg.p,
        ..SolveOptions::default()
    };
    let r = solve_abel(&basis, &d, &f, cfg.n, &opts).map_err(solver)?;

    write_coeffs(&cfg.out, "psi_coeffs.csv", r.psi.values())?;
    let xs = plot_grid(basis.interval());
    let psi = reconstruct(&basis, &r.psi, &xs).map_err(solver)?;
    write_columns_csv(
        create(&cfg.out, "reconstruction.csv")?,
        ["x", "psi"],
        &xs,
        &psi,
    )
    .map_err(|e| CliError::Output(e.to_string()))?;

    let report = json!({
        "residual_l2": json_number(r.residual_l2),
        "solvability_norms": r.solvability_norms.iter().map(|v| json_number(*v)).collect::<Vec<_>>(),
        "zm": zm_report_json(&r.zm),
        "decay": r.decay.as_ref().map_or(Value::Null, decay_json),
        "truncation": r.truncation,
        "inner_truncation": cfg.inner_n,
        "quad_order": cfg.quad_order,
        "alpha": cfg.alpha,
    });
    write_json(&cfg.out, "report.json", &report)
}

fn decay_json(fit: &DecayFit) -> Value {
    json!({
        "lambda_hat": json_number(fit.lambda_hat),
        "amplitude": json_number(fit.amplitude),
        "r_squared": json_number(fit.r_squared),
        "window": [fit.window.0, fit.window.1],
    })
}

pub fn analyze(
    input: &Path,
    nu: f64,
    p: f64,
    growth_beta: f64,
    out: &Path,
) -> Result<(), CliError> {
    check_nu_p(nu, p)?;
    if !growth_beta.is_finite() || growth_beta < 0.0 {
        return Err(CliError::config(format!(
            "--growth-beta must be finite and non-negative, got {growth_beta}"
        )));
    }
    let c = read_coefficients_csv(open(input)?).map_err(CliError::Config)?;
    if c.len() < ANALYZE_MIN_COEFFS {
        return Err(CliError::Config(fracgalerkin::Error::InsufficientData(
            format!(
                "{} coefficients given, at least {ANALYZE_MIN_COEFFS} required",
                c.len()
            ),
        )));
    }
    let fit = fit_decay(&c, c.len() / 2, c.len() - 1).map_err(CliError::Config)?;
    let mut zm = classify_regime(fit.lambda_hat.max(0.0), growth_beta, nu, p).map_err(solver)?;
    let m: Vec<f64> = (0..c.len())
        .map(|n| (n.max(1) as f64).powf(growth_beta))
        .collect();
    let series = zm_series(&c, &m, nu, zm.probe_q, c.len()).map_err(solver)?;
    zm.series_value = Some(series.partial_sum);
    zm.series_converged = Some(series.converged);

    let table = (0..Q_GRID)
        .map(|i| {
            let q = 2.0 + (nu - 2.0) * i as f64 / Q_GRID as f64;
            let lhs = convergence_lhs(zm.lambda, growth_beta, nu, q).map_err(solver)?;
            let holds =
                check_convergence_inequality(zm.lambda, growth_beta, nu, q).map_err(solver)?;
            Ok(json!({ "q": q, "lhs": json_number(lhs), "holds": holds }))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let report = json!({
        "decay": decay_json(&fit),
        "zm": zm_report_json(&zm),
        "truth_table": table,
        "constant_factor": json_number(zm.constant_factor),
    });
    write_json(out, "analysis.json", &report)
}

pub fn basis_norms(args: &BasisArgs, n: usize, nu: f64) -> Result<(), CliError> {
    if !(nu > 2.0) || !nu.is_finite() {
        return Err(CliError::config(format!(
            "--nu must be a finite number above 2, got {nu}"
        )));
    }
    let basis = build_basis(args.interval()?, args.weight()?, n).map_err(CliError::Config)?;
    let (norms, fit) = basis.basis_norm_growth(nu, n).map_err(solver)?;
    write_coeffs(&args.out, "basis_norms.csv", &norms)?;
    let report = json!({
        "nu": nu,
        "n": n,
        "growth_beta": json_number(-fit.lambda_hat),
        "fit": decay_json(&fit),
    });
    write_json(&args.out, "growth.json", &report)
}
