//! The Abel equation `I^α ψ = f` in coefficient space: forward images,
//! series solutions through the derivative matrix, residual checks and
//! `L_p` norms of `D^α` applied to partial sums of `f`.

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::frac_ops::{
    frac_derivative_poly, frac_integral_pointwise, FracPoly, OperatorKind, OperatorMatrix,
};
use crate::jacobi_basis::{
    CoefficientVector, JacobiBasis, MonomialPoly, Origin, PollardBounds, MONOMIAL_DEGREE_CAP,
};
use crate::par_map;
use crate::quadrature::{gauss_jacobi_ref, RefRule, MAX_QUADRATURE_ORDER};
use crate::zm_analysis::{classify_regime, fit_decay, zm_series, DecayFit, ZMReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Norm exponent of the basis growth model, `> 2`.
    pub nu: f64,
    /// Target space exponent, used for the regime and the solvability norms.
    pub p: f64,
    pub pollard: PollardBounds,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            nu: 4.0,
            p: 2.0,
            pollard: PollardBounds::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub psi: CoefficientVector,
    /// `μ₁`-weighted 2-norm of `I^α ψ_N - f` within the span of the supplied coefficients.
    pub residual_l2: f64,
    /// `‖D^α S_k f‖_p` for `k = 0..=min(K, 30)`; `+∞` where the norm diverges.
    pub solvability_norms: Vec<f64>,
    pub zm: ZMReport,
    /// Decay fit of `ψ`; `None` when the tail holds too few nonzero coefficients.
    pub decay: Option<DecayFit>,
    pub truncation: usize,
}

fn check_key(basis: &JacobiBasis, other: crate::jacobi_basis::BasisKey, what: &str) -> Result<()> {
    if basis.key() != other {
        return Err(Error::Shape(format!("{what} belongs to a different basis")));
    }
    Ok(())
}

/// `f_m = Σ_n ψ_n G_mn` for every row of an integral matrix.
pub fn forward_image(
    matrix: &OperatorMatrix,
    psi: &CoefficientVector,
) -> Result<CoefficientVector> {
    if matrix.kind() != OperatorKind::Integral {
        return Err(Error::Shape(
            "forward image needs an integral matrix".into(),
        ));
    }
    if matrix.key() != psi.key() {
        return Err(Error::Shape(
            "matrix and coefficients belong to different bases".into(),
        ));
    }
    if psi.len() > matrix.size() {
        return Err(Error::Shape(format!(
            "{} coefficients exceed the matrix size {}",
            psi.len(),
            matrix.size()
        )));
    }
    let out = (0..matrix.size())
        .map(|m| {
            matrix
                .row(m)
                .iter()
                .zip(psi.values())
                .map(|(g, c)| g * c)
                .sum()
        })
        .collect();
    Ok(CoefficientVector::new(psi.key(), out))
}

/// `ψ_m = Σ_k f_k G'_mk` for `m <= n`, summing over every supplied `f_k`.
pub fn solve_coefficients(
    matrix_inv: &OperatorMatrix,
    f: &CoefficientVector,
    n: usize,
) -> Result<CoefficientVector> {
    if matrix_inv.kind() != OperatorKind::Derivative {
        return Err(Error::Shape("solve needs a derivative matrix".into()));
    }
    if matrix_inv.key() != f.key() {
        return Err(Error::Shape(
            "matrix and right-hand side belong to different bases".into(),
        ));
    }
    if n >= matrix_inv.size() {
        return Err(Error::Index(format!(
            "truncation {n} exceeds the matrix degree {}",
            matrix_inv.size() - 1
        )));
    }
    if f.len() > matrix_inv.size() {
        return Err(Error::Shape(format!(
            "{} right-hand side coefficients exceed the matrix size {}",
            f.len(),
            matrix_inv.size()
        )));
    }
    let psi = (0..=n)
        .map(|m| {
            matrix_inv
                .row(m)
                .iter()
                .zip(f.values())
                .map(|(g, c)| g * c)
                .sum()
        })
        .collect();
    Ok(CoefficientVector::new(f.key(), psi))
}

/// Series solution with residual, solvability norms and a regime report.
pub fn solve(
    basis: &JacobiBasis,
    matrix_inv: &OperatorMatrix,
    f: &CoefficientVector,
    n: usize,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    check_key(basis, matrix_inv.key(), "matrix")?;
    let psi = solve_coefficients(matrix_inv, f, n)?;
    let alpha = matrix_inv.alpha();
    opts.pollard.check(opts.p);
    let residual_l2 = galerkin_residual(basis, alpha, &psi, f)?;
    let k_max = (f.len().saturating_sub(1))
        .min(MONOMIAL_DEGREE_CAP)
        .min(basis.max_degree());
    let solvability_norms = if f.is_empty() {
        Vec::new()
    } else {
        derivative_norms(basis, alpha, f, k_max, opts.p)?
    };

    let decay = fit_decay(psi.values(), (n / 2).max(1), n).ok();
    let lambda = match decay {
        Some(fit) => fit.lambda_hat.max(0.0),
        None => f64::INFINITY,
    };
    let n_growth = n.max(16).min(basis.max_degree());
    let norms = basis.basis_norms(opts.nu, n_growth)?;
    let growth_beta = fit_decay(&norms, (n_growth / 2).max(1), n_growth)
        .map(|fit| (-fit.lambda_hat).max(0.0))
        .unwrap_or(0.0);
    let mut zm = classify_regime(lambda, growth_beta, opts.nu, opts.p)?;
    let series = zm_series(psi.values(), &norms, opts.nu, zm.probe_q, n + 1)?;
    zm.series_value = Some(series.partial_sum);
    zm.series_converged = Some(series.converged);
    Ok(SolveResult {
        psi,
        residual_l2,
        solvability_norms,
        zm,
        decay,
        truncation: n,
    })
}

/// Projects the oracle value of `I^α ψ` on `p_0..p_K` and compares with `f`.
fn galerkin_residual(
    basis: &JacobiBasis,
    alpha: f64,
    psi: &CoefficientVector,
    f: &CoefficientVector,
) -> Result<f64> {
    if f.is_empty() {
        return Ok(psi.values().iter().map(|v| v * v).sum::<f64>().sqrt());
    }
    let k = f.len() - 1;
    let (beta, gamma) = (basis.weight().beta(), basis.weight().gamma());
    let order = ((k + psi.len()) / 2 + 4).min(MAX_QUADRATURE_ORDER);
    let rule = gauss_jacobi_ref(order, beta + alpha, gamma)?;
    let (a, b) = (basis.interval().a(), basis.interval().b());
    let len = b - a;
    let scale = basis.scale();
    let coeffs = psi.values();
    let psi_at = |y: f64| scale * basis.series_ref(coeffs, ((y - a) / len).clamp(0.0, 1.0));
    let rec = basis.recurrence();
    let parts: Vec<Result<Vec<f64>>> = par_map(rule.nodes.len(), |j| {
        let t = rule.nodes[j];
        let image = frac_integral_pointwise(psi_at, a, b, alpha, a + len * t)?;
        let mut q = vec![0.0; k + 1];
        rec.eval_into(t, &mut q);
        let w = rule.weights[j] * image / t.powf(alpha);
        Ok(q.into_iter().map(|qk| w * qk).collect())
    });
    let mut g = vec![0.0; k + 1];
    for part in parts {
        g.iter_mut().zip(part?).for_each(|(gk, v)| *gk += v);
    }
    let front = len.powf(beta + gamma + 1.0) * scale;
    Ok(g.iter()
        .zip(f.values())
        .map(|(gk, fk)| (front * gk - fk).powi(2))
        .sum::<f64>()
        .sqrt())
}

/// `‖F‖_{L_p(μ₁)}` for `F = Σ_j c_j (x-a)^{j-α}`, infinite when not integrable.
fn fracpoly_lp_norm(
    basis: &JacobiBasis,
    fp: &FracPoly,
    p: f64,
    alpha: f64,
    rules: &mut Vec<(f64, RefRule)>,
    order: usize,
) -> Result<f64> {
    let coeffs = fp.coeffs_dd();
    let Some(first) = coeffs.iter().position(|c| !c.is_zero()) else {
        return Ok(0.0);
    };
    let (beta, gamma) = (basis.weight().beta(), basis.weight().gamma());
    let lead = fp.exponents()[first];
    let j0 = (lead + alpha).round();
    let left = beta + (j0 - alpha) * p;
    if left <= -1.0 {
        return Ok(f64::INFINITY);
    }
    // reduced polynomial Σ c_j y^{j - j0}
    let mut dense = Vec::new();
    for (e, c) in fp.exponents()[first..].iter().zip(&coeffs[first..]) {
        let idx = (e + alpha - j0).round() as usize;
        if dense.len() <= idx {
            dense.resize(idx + 1, Dd::ZERO);
        }
        dense[idx] = *c;
    }
    let pos = match rules.iter().position(|(l, _)| *l == left) {
        Some(i) => i,
        None => {
            rules.push((left, gauss_jacobi_ref(order, left, gamma)?));
            rules.len() - 1
        }
    };
    let rule = &rules[pos].1;
    let len = basis.interval().length();
    let sum: f64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &w)| {
            let y = Dd::from(len * t);
            let mut acc = Dd::ZERO;
            for c in dense.iter().rev() {
                acc = acc * y + *c;
            }
            w * acc.to_f64().abs().powf(p)
        })
        .sum();
    let total = len.powf(beta + gamma + 1.0 + (j0 - alpha) * p) * sum;
    Ok(total.powf(1.0 / p))
}

fn derivative_norms(
    basis: &JacobiBasis,
    alpha: f64,
    f: &CoefficientVector,
    k_max: usize,
    p: f64,
) -> Result<Vec<f64>> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!(
            "norm exponent p must be at least 1, got {p}"
        )));
    }
    let order = (2 * k_max + 96).min(MAX_QUADRATURE_ORDER);
    let mut rules = Vec::new();
    let a = basis.interval().a();
    let mut partial = MonomialPoly::new(Origin::Left, a, &[0.0]);
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let form = basis.monomial_expansion(k, Origin::Left)?;
        partial.add_scaled(&form, f.values()[k])?;
        let image = frac_derivative_poly(&partial, alpha)?;
        out.push(fracpoly_lp_norm(
            basis, &image, p, alpha, &mut rules, order,
        )?);
    }
    Ok(out)
}

/// Relative spread of the last quarter below which a norm sequence counts as bounded.
pub const BOUNDED_SPREAD: f64 = 0.1;

/// Norms `‖D^α S_k f‖_{L_p(μ₁)}` for `k = 0..=k_max` and a boundedness flag.
pub fn solvability_check(
    basis: &JacobiBasis,
    alpha: f64,
    f: &CoefficientVector,
    k_max: usize,
    p: f64,
    pollard: &PollardBounds,
) -> Result<(Vec<f64>, bool)> {
    crate::frac_ops::validate_alpha(alpha)?;
    check_key(basis, f.key(), "right-hand side")?;
    if k_max > basis.max_degree() || k_max >= f.len() {
        return Err(Error::Index(format!(
            "k_max = {k_max} exceeds the available degree {}",
            basis.max_degree().min(f.len().saturating_sub(1))
        )));
    }
    if k_max > MONOMIAL_DEGREE_CAP {
        return Err(Error::Capability(format!(
            "partial-sum norms are limited to k <= {MONOMIAL_DEGREE_CAP}"
        )));
    }
    pollard.check(p);
    let norms = derivative_norms(basis, alpha, f, k_max, p)?;
    if let Some(k) = norms.iter().position(|v| v.is_infinite()) {
        return Err(Error::Domain(format!(
            "D^{alpha} S_{k} f is not p-integrable against the weight (p = {p})"
        )));
    }
    let tail = &norms[norms.len() - (norms.len().div_ceil(4))..];
    let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let bounded = hi == 0.0 || (hi - lo) / hi < BOUNDED_SPREAD;
    Ok((norms, bounded))
}

/// Values of the truncated series at each grid point.
pub fn reconstruct(
    basis: &JacobiBasis,
    coeffs: &CoefficientVector,
    xs: &[f64],
) -> Result<Vec<f64>> {
    check_key(basis, coeffs.key(), "coefficients")?;
    xs.iter()
        .map(|&x| basis.eval_series(coeffs.values(), x))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac_ops::operator_matrix;
    use crate::jacobi_basis::{build_basis, Interval, WeightParams};
    use std::f64::consts::PI;

    fn legendre01(n: usize) -> JacobiBasis {
        build_basis(
            Interval::new(0.0, 1.0).unwrap(),
            WeightParams::legendre(),
            n,
        )
        .unwrap()
    }

    #[test]
    fn forward_image_examples() {
        let basis = legendre01(6);
        let g = operator_matrix(&basis, 0.5, OperatorKind::Integral, 6).unwrap();
        let e0 = CoefficientVector::new(basis.key(), vec![1.0]);
        let f = forward_image(&g, &e0).unwrap();
        for m in 0..7 {
            assert_eq!(f.values()[m], g.get(m, 0));
        }
        assert!((f.values()[0] - 4.0 / (3.0 * PI.sqrt())).abs() < 1e-14);
        let zero = CoefficientVector::new(basis.key(), vec![0.0; 7]);
        assert!(forward_image(&g, &zero)
            .unwrap()
            .values()
            .iter()
            .all(|v| *v == 0.0));
        let other = build_basis(
            Interval::new(0.0, 2.0).unwrap(),
            WeightParams::legendre(),
            6,
        )
        .unwrap();
        let wrong = CoefficientVector::new(other.key(), vec![1.0]);
        assert!(matches!(forward_image(&g, &wrong), Err(Error::Shape(_))));
    }

    #[test]
    fn round_trip_linear() {
        let k = 64;
        let basis = legendre01(k);
        let gi = operator_matrix(&basis, 0.5, OperatorKind::Integral, k).unwrap();
        let gd = operator_matrix(&basis, 0.5, OperatorKind::Derivative, k).unwrap();
        let star = CoefficientVector::new(basis.key(), vec![0.5, 3f64.sqrt() / 6.0]);
        let f = forward_image(&gi, &star).unwrap();
        let r = solve(&basis, &gd, &f, 16, &SolveOptions::default()).unwrap();
        assert!((r.psi.values()[0] - 0.5).abs() < 1e-8);
        assert!((r.psi.values()[1] - 3f64.sqrt() / 6.0).abs() < 1e-8);
        assert!(r.psi.values()[2..].iter().all(|v| v.abs() < 1e-8));
        assert_eq!(r.truncation, 16);
        assert_eq!(r.psi.len(), 17);
    }

    #[test]
    fn zero_right_hand_side() {
        let basis = legendre01(16);
        let gd = operator_matrix(&basis, 0.5, OperatorKind::Derivative, 16).unwrap();
        let f = CoefficientVector::new(basis.key(), vec![0.0; 17]);
        let r = solve(&basis, &gd, &f, 8, &SolveOptions::default()).unwrap();
        assert!(r.psi.values().iter().all(|v| *v == 0.0));
        assert_eq!(r.residual_l2, 0.0);
        assert!(r.decay.is_none());
        assert!(r.zm.lambda.is_infinite());
    }

    #[test]
    fn solvability_examples() {
        let basis = legendre01(20);
        let pollard = PollardBounds::default();
        let f = CoefficientVector::new(basis.key(), vec![0.0; 21]);
        let (norms, bounded) = solvability_check(&basis, 0.5, &f, 20, 1.5, &pollard).unwrap();
        assert!(norms.iter().all(|v| *v == 0.0) && bounded);
        let mut only0 = vec![0.0; 21];
        only0[0] = 2.0;
        let f = CoefficientVector::new(basis.key(), only0);
        let (norms, bounded) = solvability_check(&basis, 0.5, &f, 20, 1.5, &pollard).unwrap();
        assert!(
            norms
                .iter()
                .all(|v| (v - norms[0]).abs() < 1e-14 * norms[0])
                && bounded
        );
        // ‖2 x^{-1/2}/Γ(1/2)‖_{1.5} = 2/√π (∫ x^{-3/4})^{2/3} = 2/√π 4^{2/3}
        let want = 2.0 / PI.sqrt() * 4f64.powf(2.0 / 3.0);
        assert!((norms[0] - want).abs() < 1e-12);
        assert!(matches!(
            solvability_check(&basis, 0.5, &f, 20, 2.0, &pollard),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn reconstruct_examples() {
        let basis = legendre01(4);
        let one = CoefficientVector::new(basis.key(), vec![1.0]);
        assert_eq!(
            reconstruct(&basis, &one, &[0.1, 0.9]).unwrap(),
            vec![1.0, 1.0]
        );
        let x = CoefficientVector::new(basis.key(), vec![0.5, 3f64.sqrt() / 6.0]);
        assert!((reconstruct(&basis, &x, &[0.7]).unwrap()[0] - 0.7).abs() < 1e-15);
        assert!(reconstruct(&basis, &x, &[]).unwrap().is_empty());
        assert!(matches!(
            reconstruct(&basis, &x, &[1.5]),
            Err(Error::Domain(_))
        ));
    }
}
