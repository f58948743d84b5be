//! Left and right Riemann–Liouville operators of order `α ∈ (0, 1)`: exact
//! action on (fractional) monomials, a pointwise quadrature oracle, Galerkin
//! matrices in a Jacobi basis and the weighted adjoint `h ↦ ω⁻¹ I^α_{b-}(ω h)`.

use serde::{Deserialize, Serialize};

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::jacobi_basis::{
    ln_lead_ref, ln_p, ln_r, ref_ratio_chain, BasisKey, JacobiBasis, MonomialPoly, Origin,
    MONOMIAL_DEGREE_CAP,
};
use crate::par_map;
use crate::quadrature::{gauss_jacobi_ref, legendre_128, legendre_20, RefRule};
use crate::special_fn::{gamma_ratio, ln_beta, ln_gamma_signed, reciprocal_gamma};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Integral,
    Derivative,
}

/// How matrix entries are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Assembly {
    /// Beta sums up to the monomial cap, quadrature above it.
    Auto,
    /// Closed-form Beta sums over the explicit expansion of `p_n`.
    BetaSum,
    /// Nested Gauss–Jacobi rules, exact for polynomial data.
    Quadrature,
}

/// Sign convention for reported matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// plain inner products `G_mn`
    Galerkin,
    /// `(-1)^n G_mn`
    Paper,
}

pub fn validate_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    Ok(())
}

/// Sum of `c_j (x-a)^{σ_j}` (left) or `c_j (b-x)^{σ_j}` (right).
#[derive(Debug, Clone, PartialEq)]
pub struct FracPoly {
    side: Origin,
    anchor: f64,
    exponents: Vec<f64>,
    coeffs: Vec<Dd>,
}

impl FracPoly {
    pub fn new(side: Origin, anchor: f64, exponents: Vec<f64>, coeffs: &[f64]) -> Result<Self> {
        Self::from_dd(
            side,
            anchor,
            exponents,
            coeffs.iter().map(|&c| Dd::from(c)).collect(),
        )
    }

    pub fn from_dd(
        side: Origin,
        anchor: f64,
        exponents: Vec<f64>,
        coeffs: Vec<Dd>,
    ) -> Result<Self> {
        if exponents.len() != coeffs.len() {
            return Err(Error::Shape(format!(
                "{} exponents for {} coefficients",
                exponents.len(),
                coeffs.len()
            )));
        }
        if let Some(s) = exponents.iter().find(|s| !(**s > -1.0 && s.is_finite())) {
            return Err(Error::Integrability(format!(
                "exponent {s} is not above -1"
            )));
        }
        if exponents.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(
                "exponents must be strictly increasing".into(),
            ));
        }
        Ok(FracPoly {
            side,
            anchor,
            exponents,
            coeffs,
        })
    }

    pub fn side(&self) -> Origin {
        self.side
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    pub fn coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64()).collect()
    }

    pub fn coeffs_dd(&self) -> &[Dd] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        if self.exponents.is_empty() {
            return 0.0;
        }
        let s = match self.side {
            Origin::Left => x - self.anchor,
            Origin::Right => self.anchor - x,
        };
        let base = self.exponents[0];
        let integer_steps = self
            .exponents
            .iter()
            .all(|e| (e - base).fract() == 0.0 && e - base <= 4096.0);
        if integer_steps {
            // s^σ0 times a polynomial in s, summed with Horner in double-double
            let deg = (self.exponents[self.exponents.len() - 1] - base) as usize;
            let mut dense = vec![Dd::ZERO; deg + 1];
            for (e, c) in self.exponents.iter().zip(&self.coeffs) {
                dense[(e - base) as usize] = *c;
            }
            let sd = Dd::from(s);
            let mut acc = Dd::ZERO;
            for c in dense.iter().rev() {
                acc = acc * sd + *c;
            }
            return acc.to_f64() * s.powf(base);
        }
        self.exponents
            .iter()
            .zip(&self.coeffs)
            .map(|(e, c)| c.mul_f64(s.powf(*e)))
            .sum::<Dd>()
            .to_f64()
    }
}

/// Term-wise `I^α`: `(x-a)^k ↦ Γ(k+1)/Γ(k+α+1) (x-a)^{k+α}`, mirrored for the right side.
pub fn frac_integral_poly(p: &MonomialPoly, alpha: f64, side: Origin) -> Result<FracPoly> {
    validate_alpha(alpha)?;
    if p.origin() != side {
        return Err(Error::Domain(
            "polynomial origin does not match the operator side".into(),
        ));
    }
    // Γ(k+1)/Γ(k+α+1) by an exact rational chain from 1/Γ(α+1)
    let mut g = Dd::from(reciprocal_gamma(alpha + 1.0));
    let mut exps = Vec::new();
    let mut coeffs = Vec::new();
    for (k, c) in p.coeffs_dd().iter().enumerate() {
        if k > 0 {
            g = g * Dd::from(k as f64) / (Dd::from(k as f64) + Dd::from(alpha));
        }
        if !c.is_zero() {
            exps.push(k as f64 + alpha);
            coeffs.push(*c * g);
        }
    }
    FracPoly::from_dd(side, p.anchor(), exps, coeffs)
}

/// Term-wise left `D^α`: `(x-a)^k ↦ Γ(k+1)/Γ(k-α+1) (x-a)^{k-α}`.
pub fn frac_derivative_poly(p: &MonomialPoly, alpha: f64) -> Result<FracPoly> {
    validate_alpha(alpha)?;
    if p.origin() != Origin::Left {
        return Err(Error::Domain(
            "fractional derivative needs a left-origin polynomial".into(),
        ));
    }
    let mut g = Dd::from(reciprocal_gamma(1.0 - alpha));
    let mut exps = Vec::new();
    let mut coeffs = Vec::new();
    for (k, c) in p.coeffs_dd().iter().enumerate() {
        if k > 0 {
            g = g * Dd::from(k as f64) / (Dd::from(k as f64) - Dd::from(alpha));
        }
        if !c.is_zero() {
            exps.push(k as f64 - alpha);
            coeffs.push(*c * g);
        }
    }
    FracPoly::from_dd(Origin::Left, p.anchor(), exps, coeffs)
}

/// Applies the operator of the polynomial's own side to every term.
///
/// Derivative terms whose Gamma denominator sits on a pole vanish exactly;
/// any other term pushed to an exponent `<= -1` is an integrability error.
pub fn frac_apply_fracpoly(p: &FracPoly, alpha: f64, op: OperatorKind) -> Result<FracPoly> {
    validate_alpha(alpha)?;
    let shift = match op {
        OperatorKind::Integral => alpha,
        OperatorKind::Derivative => -alpha,
    };
    let mut exps = Vec::new();
    let mut coeffs = Vec::new();
    for (&s, &c) in p.exponents.iter().zip(&p.coeffs) {
        let ratio = gamma_ratio(s + 1.0, s + shift + 1.0)?;
        if ratio == 0.0 || c.is_zero() {
            continue;
        }
        if s + shift <= -1.0 {
            return Err(Error::Integrability(format!(
                "term with exponent {s} leaves the integrable class under order {alpha}"
            )));
        }
        exps.push(s + shift);
        coeffs.push(c.mul_f64(ratio));
    }
    FracPoly::from_dd(p.side, p.anchor, exps, coeffs)
}

/// `I^α_{a+} f(x)` via `t = x - (x-a) s^{1/α}` and 128-node Gauss–Legendre.
pub fn frac_integral_pointwise(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    alpha: f64,
    x: f64,
) -> Result<f64> {
    validate_alpha(alpha)?;
    if !(x > a && x <= b) {
        return Err(Error::Domain(format!("x = {x} must lie in ({a}, {b}]")));
    }
    let h = x - a;
    let rule = legendre_128();
    let inv = 1.0 / alpha;
    let sum: f64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&s, &w)| w * f(x - h * s.powf(inv)))
        .sum();
    Ok(h.powf(alpha) * reciprocal_gamma(alpha + 1.0) * sum)
}

/// `I^α_{b-} f(x)` via the mirrored substitution.
pub fn frac_integral_pointwise_right(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    alpha: f64,
    x: f64,
) -> Result<f64> {
    validate_alpha(alpha)?;
    if !(x >= a && x < b) {
        return Err(Error::Domain(format!("x = {x} must lie in [{a}, {b})")));
    }
    let h = b - x;
    let rule = legendre_128();
    let inv = 1.0 / alpha;
    let sum: f64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&s, &w)| w * f(x + h * s.powf(inv)))
        .sum();
    Ok(h.powf(alpha) * reciprocal_gamma(alpha + 1.0) * sum)
}

/// Dense `(N+1) × (N+1)` Galerkin matrix `G_mn = ∫ p_m T p_n dμ₁`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    alpha: f64,
    kind: OperatorKind,
    key: BasisKey,
    size: usize,
    assembly: Assembly,
    entries: Vec<f64>,
}

impl OperatorMatrix {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn key(&self) -> BasisKey {
        self.key
    }

    /// Number of rows, `N + 1`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// The route actually used (never `Auto`).
    pub fn assembly(&self) -> Assembly {
        self.assembly
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.entries[m * self.size + n]
    }

    pub fn row(&self, m: usize) -> &[f64] {
        &self.entries[m * self.size..(m + 1) * self.size]
    }

    /// Entries in the requested sign convention.
    pub fn entries_in(&self, convention: Convention) -> Vec<f64> {
        match convention {
            Convention::Galerkin => self.entries.clone(),
            Convention::Paper => self
                .entries
                .iter()
                .enumerate()
                .map(|(i, v)| if (i % self.size) % 2 == 1 { -v } else { *v })
                .collect(),
        }
    }

    /// Leading `k × k` block of `self · other`.
    pub fn product_block(&self, other: &OperatorMatrix, k: usize) -> Result<Vec<f64>> {
        if self.key != other.key || self.size != other.size {
            return Err(Error::Shape(
                "matrices belong to different bases or sizes".into(),
            ));
        }
        if k > self.size {
            return Err(Error::Index(format!(
                "block {k} exceeds size {}",
                self.size
            )));
        }
        let mut out = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                out[i * k + j] = (0..self.size)
                    .map(|l| self.get(i, l) * other.get(l, j))
                    .sum();
            }
        }
        Ok(out)
    }
}

/// Galerkin matrix of degree `n` with automatic route selection.
pub fn operator_matrix(
    basis: &JacobiBasis,
    alpha: f64,
    kind: OperatorKind,
    n: usize,
) -> Result<OperatorMatrix> {
    operator_matrix_with(basis, alpha, kind, n, Assembly::Auto)
}

pub fn operator_matrix_with(
    basis: &JacobiBasis,
    alpha: f64,
    kind: OperatorKind,
    n: usize,
    assembly: Assembly,
) -> Result<OperatorMatrix> {
    validate_alpha(alpha)?;
    if n > basis.max_degree() {
        return Err(Error::Index(format!(
            "matrix degree {n} exceeds the basis maximum {}",
            basis.max_degree()
        )));
    }
    let (beta, gamma) = (basis.weight().beta(), basis.weight().gamma());
    if kind == OperatorKind::Derivative && beta - alpha <= -1.0 {
        return Err(Error::Domain(format!(
            "derivative matrix needs beta - alpha > -1, got beta = {beta}, alpha = {alpha}"
        )));
    }
    let route = match assembly {
        Assembly::Auto if n <= MONOMIAL_DEGREE_CAP => Assembly::BetaSum,
        Assembly::Auto => Assembly::Quadrature,
        Assembly::BetaSum if n > MONOMIAL_DEGREE_CAP => {
            return Err(Error::Capability(format!(
                "Beta-sum assembly is limited to degree {MONOMIAL_DEGREE_CAP}, requested {n}"
            )))
        }
        other => other,
    };
    let eps = match kind {
        OperatorKind::Integral => alpha,
        OperatorKind::Derivative => -alpha,
    };
    let mut entries = match route {
        Assembly::BetaSum => beta_sum_ref(n, beta, gamma, eps)?,
        _ => quadrature_ref(basis, n, alpha, kind)?,
    };
    let scale = basis.interval().length().powf(eps);
    entries.iter_mut().for_each(|v| *v *= scale);
    Ok(OperatorMatrix {
        alpha,
        kind,
        key: basis.key(),
        size: n + 1,
        assembly: route,
        entries,
    })
}

/// Reference-interval entries `Σ_k c^n_k Γ(k+1) B(k+ε+β+1, γ+m+1) / Γ(k+ε-m+1) / sqrt(R_m P_m)`.
fn beta_sum_ref(n_max: usize, beta: f64, gamma: f64, eps: f64) -> Result<Vec<f64>> {
    let size = n_max + 1;
    let ratios: Vec<Vec<Dd>> = (0..size).map(|n| ref_ratio_chain(n, beta, gamma)).collect();
    let ln_lead: Vec<f64> = (0..size).map(|n| ln_lead_ref(n, beta, gamma)).collect();
    let rows: Vec<Result<Vec<f64>>> = par_map(size, |m| {
        let mf = m as f64;
        let ln_b0 = ln_beta(eps + beta + 1.0, gamma + mf + 1.0)?;
        let (lg, sg) = ln_gamma_signed(eps - mf + 1.0);
        let ln_norm = -0.5 * (ln_r(m, beta, gamma) + ln_p(m, beta, gamma));
        // T_{k+1}/T_k = (k+1)(k+ε+β+1) / ((k+ε-m+1)(k+ε+β+γ+m+2))
        let mut tau = Vec::with_capacity(size);
        let mut t = Dd::ONE;
        for k in 0..size {
            tau.push(t);
            let kf = Dd::from(k as f64) + Dd::from(eps);
            let num = Dd::from((k + 1) as f64) * (kf + Dd::from(beta + 1.0));
            let den =
                (kf - Dd::from(mf - 1.0)) * (kf + Dd::from(beta + gamma) + Dd::from(mf + 2.0));
            t = t * num / den;
        }
        let row = (0..size)
            .map(|n| {
                let s: Dd = ratios[n].iter().zip(&tau).map(|(r, t)| *r * *t).sum();
                sg * (ln_lead[n] + ln_b0 - lg + ln_norm).exp() * s.to_f64()
            })
            .collect();
        Ok(row)
    });
    let mut out = Vec::with_capacity(size * size);
    for row in rows {
        out.extend(row?);
    }
    Ok(out)
}

/// Reference-interval entries by nested Gauss–Jacobi rules.
///
/// `t^{-ε} T q_n(t)` is a polynomial of degree `n`, so the outer rule for
/// `t^{β+ε} (1-t)^γ` is exact; the inner rules integrate the kernel with
/// weight `u^{α-1}` (integral) or `u^{-α}` (derivative, after one
/// integration by parts).
fn quadrature_ref(
    basis: &JacobiBasis,
    n_max: usize,
    alpha: f64,
    kind: OperatorKind,
) -> Result<Vec<f64>> {
    let (beta, gamma) = (basis.weight().beta(), basis.weight().gamma());
    let size = n_max + 1;
    let rec = basis.recurrence();
    let (outer_left, inner_left) = match kind {
        OperatorKind::Integral => (beta + alpha, alpha - 1.0),
        OperatorKind::Derivative => (beta - alpha, -alpha),
    };
    let outer = gauss_jacobi_ref(n_max + 2, outer_left, gamma)?;
    let inner = gauss_jacobi_ref(n_max / 2 + 2, inner_left, 0.0)?;
    let mut q_at_zero = vec![0.0; size];
    rec.eval_into(0.0, &mut q_at_zero);
    let rows: Vec<(Vec<f64>, Vec<f64>)> = par_map(outer.nodes.len(), |j| {
        let t = outer.nodes[j];
        let mut q = vec![0.0; size];
        rec.eval_into(t, &mut q);
        let mut h = vec![0.0; size];
        let mut v = vec![0.0; size];
        let mut d = vec![0.0; size];
        match kind {
            OperatorKind::Integral => {
                for (&u, &w) in inner.nodes.iter().zip(&inner.weights) {
                    rec.eval_into(t * (1.0 - u), &mut v);
                    h.iter_mut().zip(&v).for_each(|(hk, vk)| *hk += w * vk);
                }
                let g = reciprocal_gamma(alpha);
                h.iter_mut().for_each(|hk| *hk *= g);
            }
            OperatorKind::Derivative => {
                for (&u, &w) in inner.nodes.iter().zip(&inner.weights) {
                    rec.eval_with_derivative_into(t * (1.0 - u), &mut v, &mut d);
                    h.iter_mut().zip(&d).for_each(|(hk, dk)| *hk += w * dk);
                }
                let g = reciprocal_gamma(1.0 - alpha);
                h.iter_mut()
                    .zip(&q_at_zero)
                    .for_each(|(hk, q0)| *hk = g * (t * *hk + q0));
            }
        }
        (q, h)
    });
    let mut out = vec![0.0; size * size];
    for ((q, h), &w) in rows.iter().zip(&outer.weights) {
        for m in 0..size {
            let wq = w * q[m];
            let row = &mut out[m * size..(m + 1) * size];
            row.iter_mut().zip(h).for_each(|(o, hn)| *o += wq * hn);
        }
    }
    Ok(out)
}

/// `B*h(x) = ω(x)⁻¹ I^α_{b-}(ω h)(x)` for a fixed basis and order.
///
/// With `t = x + (b-x)u` the value is
/// `(b-x)^α/Γ(α) ∫_0^1 u^{α-1} (1-u)^γ (1 + u(b-x)/(x-a))^β h(t) du`;
/// the integral uses a Gauss–Jacobi cell at each end and geometric
/// Gauss–Legendre cells where the `β` factor varies quickly.
#[derive(Debug, Clone)]
pub struct WeightedAdjoint {
    a: f64,
    b: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    head: RefRule,
    tail: RefRule,
}

const ADJOINT_END_ORDER: usize = 48;

impl WeightedAdjoint {
    pub fn new(basis: &JacobiBasis, alpha: f64) -> Result<Self> {
        validate_alpha(alpha)?;
        let w = basis.weight();
        Ok(WeightedAdjoint {
            a: basis.interval().a(),
            b: basis.interval().b(),
            alpha,
            beta: w.beta(),
            gamma: w.gamma(),
            head: gauss_jacobi_ref(ADJOINT_END_ORDER, alpha - 1.0, 0.0)?,
            tail: gauss_jacobi_ref(ADJOINT_END_ORDER, 0.0, w.gamma())?,
        })
    }

    pub fn apply(&self, h: impl Fn(f64) -> f64, x: f64) -> Result<f64> {
        let (a, b) = (self.a, self.b);
        if !(x >= a && x <= b) {
            return Err(Error::Domain(format!("x = {x} is outside [{a}, {b}]")));
        }
        if (x == a && self.beta != 0.0) || (x == b && self.gamma != 0.0) {
            return Err(Error::Evaluation(format!(
                "the weight is singular or vanishes at the endpoint x = {x}"
            )));
        }
        if x == b {
            return Ok(0.0);
        }
        let len = b - x;
        let ratio = if x == a { f64::INFINITY } else { len / (x - a) };
        let (alpha, beta, gamma) = (self.alpha, self.beta, self.gamma);
        let rho = |u: f64| {
            if beta == 0.0 {
                1.0
            } else {
                (1.0 + u * ratio).powf(beta)
            }
        };
        let g = |u: f64| h(x + len * u);

        let split = if beta == 0.0 || ratio <= 2.0 {
            0.5
        } else {
            1.0 / ratio
        };
        // [0, split] with weight u^{α-1}
        let mut total: f64 = self
            .head
            .nodes
            .iter()
            .zip(&self.head.weights)
            .map(|(&v, &w)| {
                let u = split * v;
                w * (1.0 - u).powf(gamma) * rho(u) * g(u)
            })
            .sum::<f64>()
            * split.powf(alpha);
        // geometric cells up to 1/2
        let gl = legendre_20();
        let mut lo = split;
        while lo < 0.5 {
            let hi = (2.0 * lo).min(0.5);
            let width = hi - lo;
            total += width
                * gl.nodes
                    .iter()
                    .zip(&gl.weights)
                    .map(|(&v, &w)| {
                        let u = lo + width * v;
                        w * u.powf(alpha - 1.0) * (1.0 - u).powf(gamma) * rho(u) * g(u)
                    })
                    .sum::<f64>();
            lo = hi;
        }
        // [1/2, 1] with weight (1-u)^γ
        total += 0.5f64.powf(gamma + 1.0)
            * self
                .tail
                .nodes
                .iter()
                .zip(&self.tail.weights)
                .map(|(&v, &w)| {
                    let u = 0.5 + 0.5 * v;
                    w * u.powf(alpha - 1.0) * rho(u) * g(u)
                })
                .sum::<f64>();
        Ok(len.powf(alpha) * reciprocal_gamma(alpha) * total)
    }
}

pub fn weighted_adjoint_apply(
    basis: &JacobiBasis,
    alpha: f64,
    h: impl Fn(f64) -> f64,
    x: f64,
) -> Result<f64> {
    WeightedAdjoint::new(basis, alpha)?.apply(h, x)
}
