use fracgalerkin::abel_solver::{reconstruct, solve, SolveOptions};
use fracgalerkin::frac_ops::{frac_apply_fracpoly, operator_matrix, FracPoly, OperatorKind};
use fracgalerkin::io::zm_report_json;
use fracgalerkin::jacobi_basis::{build_basis, Interval, Origin, WeightParams};
use fracgalerkin::special_fn::gamma_ratio;
use fracgalerkin::zm_analysis::classify_regime;
use fracgalerkin::{Error, Result};

/// Upper bound on grid sizes; keeps a mistyped input from freezing the tab.
pub const MAX_POINTS: usize = 4096;
/// Highest truncation the demo accepts.
pub const MAX_N: usize = 48;

fn check_points(points: usize) -> Result<()> {
    if !(2..=MAX_POINTS).contains(&points) {
        return Err(Error::Domain(format!(
            "points must lie in 2..={MAX_POINTS}, got {points}"
        )));
    }
    Ok(())
}

pub fn unit_grid(points: usize) -> Vec<f64> {
    let last = points.saturating_sub(1).max(1) as f64;
    (0..points).map(|i| i as f64 / last).collect()
}

pub fn basis_curves(beta: f64, gamma: f64, n: usize, points: usize) -> Result<Vec<f64>> {
    check_points(points)?;
    if n > MAX_N {
        return Err(Error::Index(format!(
            "degree {n} above the demo limit {MAX_N}"
        )));
    }
    let basis = build_basis(Interval::new(0.0, 1.0)?, WeightParams::new(beta, gamma)?, n)?;
    let xs = unit_grid(points);
    let mut out = vec![0.0; (n + 1) * points];
    for (j, &x) in xs.iter().enumerate() {
        for (k, v) in basis.evaluate_all(x)?.into_iter().enumerate() {
            out[k * points + j] = v;
        }
    }
    Ok(out)
}

fn power_row(p: &FracPoly, xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|&x| {
            let v = p.evaluate(x);
            if v.is_finite() {
                v
            } else {
                f64::NAN
            }
        })
        .collect()
}

pub fn power_images(s: f64, alpha: f64, points: usize) -> Result<Vec<f64>> {
    check_points(points)?;
    let f = FracPoly::new(Origin::Left, 0.0, vec![s], &[1.0])?;
    let xs = unit_grid(points);
    let mut out = power_row(&f, &xs);
    out.extend(power_row(
        &frac_apply_fracpoly(&f, alpha, OperatorKind::Integral)?,
        &xs,
    ));
    match frac_apply_fracpoly(&f, alpha, OperatorKind::Derivative) {
        Ok(d) => out.extend(power_row(&d, &xs)),
        Err(Error::Integrability(_)) => out.extend(std::iter::repeat_n(f64::NAN, points)),
        Err(e) => return Err(e),
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct AbelOutcome {
    pub xs: Vec<f64>,
    pub psi: Vec<f64>,
    pub exact: Vec<f64>,
    pub coefficients: Vec<f64>,
    pub residual: f64,
    pub report: String,
}

/// Right-hand side degree used for a truncation `n`.
pub fn inner_degree(n: usize) -> usize {
    (8 * n).clamp(64, 128)
}

pub fn abel(alpha: f64, s: f64, n: usize, points: usize) -> Result<AbelOutcome> {
    check_points(points)?;
    if n > MAX_N {
        return Err(Error::Index(format!(
            "truncation {n} above the demo limit {MAX_N}"
        )));
    }
    if s < alpha || s.is_nan() {
        return Err(Error::Domain(format!(
            "the exact solution x^(s-alpha) needs s >= alpha, got s = {s}"
        )));
    }
    let k = inner_degree(n);
    let basis = build_basis(Interval::new(0.0, 1.0)?, WeightParams::legendre(), k)?;
    let f = basis.power_coefficients(s)?;
    let d = operator_matrix(&basis, alpha, OperatorKind::Derivative, k)?;
    let r = solve(&basis, &d, &f, n, &SolveOptions::default())?;
    let xs = unit_grid(points);
    let psi = reconstruct(&basis, &r.psi, &xs)?;
    // I^α x^{s-α} Γ(s+1)/Γ(s+1-α) = x^s
    let c = gamma_ratio(s + 1.0, s + 1.0 - alpha)?;
    let exact = xs.iter().map(|&x| c * x.powf(s - alpha)).collect();
    Ok(AbelOutcome {
        xs,
        psi,
        exact,
        coefficients: r.psi.into_values(),
        residual: r.residual_l2,
        report: zm_report_json(&r.zm).to_string(),
    })
}

pub fn classify(lambda: f64, growth_beta: f64, nu: f64, p: f64) -> Result<String> {
    Ok(zm_report_json(&classify_regime(lambda, growth_beta, nu, p)?).to_string())
}
