//! Orthonormal Jacobi polynomials on a finite interval.
//!
//! For the weight `ω(x) = (x-a)^β (b-x)^γ` on `(a, b)` the basis is
//! `p_n(x) = L^{-(β+γ+1)/2} q_n((x-a)/L)` with `L = b - a`, where `q_n` are
//! orthonormal on (0, 1) for `t^β (1-t)^γ` and have positive leading
//! coefficient. Values come from the three-term recurrence; explicit
//! monomial forms are kept in double-double because their coefficients
//! cancel heavily.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::quadrature::{gauss_jacobi_ref, Recurrence, MAX_QUADRATURE_ORDER};
use crate::special_fn::{ln_beta, log_gamma};
use crate::zm_analysis::{fit_decay, DecayFit};

/// Highest degree for which explicit monomial forms are produced.
pub const MONOMIAL_DEGREE_CAP: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Domain(format!(
                "interval needs finite a < b, got [{a}, {b}]"
            )));
        }
        Ok(Interval { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }
}

/// Exponents of the Jacobi weight, each in `[-1/2, 1/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    beta: f64,
    gamma: f64,
}

impl WeightParams {
    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [("beta", beta), ("gamma", gamma)] {
            if !(-0.5..=0.5).contains(&v) {
                return Err(Error::Domain(format!(
                    "{name} must lie in [-1/2, 1/2], got {v}"
                )));
            }
        }
        Ok(WeightParams { beta, gamma })
    }

    pub fn legendre() -> Self {
        WeightParams {
            beta: 0.0,
            gamma: 0.0,
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Identity of a basis; objects built from different keys do not mix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisKey {
    pub interval: Interval,
    pub weight: WeightParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Origin {
    /// powers of `x - a`
    Left,
    /// powers of `b - x`
    Right,
}

/// Polynomial in powers of `(x - anchor)` or `(anchor - x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialPoly {
    origin: Origin,
    anchor: f64,
    coeffs: Vec<Dd>,
}

impl MonomialPoly {
    pub fn new(origin: Origin, anchor: f64, coeffs: &[f64]) -> Self {
        Self::from_dd(
            origin,
            anchor,
            coeffs.iter().map(|&c| Dd::from(c)).collect(),
        )
    }

    pub fn from_dd(origin: Origin, anchor: f64, mut coeffs: Vec<Dd>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Dd::ZERO);
        }
        MonomialPoly {
            origin,
            anchor,
            coeffs,
        }
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64()).collect()
    }

    pub fn coeffs_dd(&self) -> &[Dd] {
        &self.coeffs
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let s = match self.origin {
            Origin::Left => Dd::from(x) - Dd::from(self.anchor),
            Origin::Right => Dd::from(self.anchor) - Dd::from(x),
        };
        let mut acc = Dd::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * s + *c;
        }
        acc.to_f64()
    }

    /// Coefficient-wise sum; both operands must share origin and anchor.
    pub fn add_scaled(&mut self, other: &MonomialPoly, scale: f64) -> Result<()> {
        if self.origin != other.origin || self.anchor != other.anchor {
            return Err(Error::Shape("monomial forms use different origins".into()));
        }
        if other.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), Dd::ZERO);
        }
        for (c, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c += o.mul_f64(scale);
        }
        Ok(())
    }
}

/// Expansion coefficients `f_0..f_K` tied to one basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    key: BasisKey,
    values: Vec<f64>,
}

impl CoefficientVector {
    pub fn new(key: BasisKey, values: Vec<f64>) -> Self {
        CoefficientVector { key, values }
    }

    pub fn key(&self) -> BasisKey {
        self.key
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Gauss rule exact for polynomials of degree `2 * order - 1` against `ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    key: BasisKey,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn key(&self) -> BasisKey {
        self.key
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Exponent range in which the basis is expected to be a Schauder basis of `L_p(μ₁)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PollardBounds {
    pub lower: f64,
    pub upper: f64,
}

impl Default for PollardBounds {
    fn default() -> Self {
        PollardBounds {
            lower: 4.0 / 3.0,
            upper: 4.0,
        }
    }
}

impl PollardBounds {
    /// Returns whether `p` lies strictly inside the bounds, logging a warning otherwise.
    pub fn check(&self, p: f64) -> bool {
        let inside = p > self.lower && p < self.upper;
        if !inside {
            log::warn!(
                "p = {p} is outside ({}, {}); partial sums may not be uniformly bounded",
                self.lower,
                self.upper
            );
        }
        inside
    }
}

/// `ln R_n`, `R_n = Γ(2n+β+γ+1) / Γ(n+β+γ+1)`, with `R_0 = 1`.
pub(crate) fn ln_r(n: usize, beta: f64, gamma: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    let s = beta + gamma + 1.0;
    log_gamma(2.0 * nf + s).expect("positive argument")
        - log_gamma(nf + s).expect("positive argument")
}

/// `ln P_n`, `P_n = n! B(n+β+1, n+γ+1)`.
pub(crate) fn ln_p(n: usize, beta: f64, gamma: f64) -> f64 {
    let nf = n as f64;
    log_gamma(nf + 1.0).expect("positive argument")
        + ln_beta(nf + beta + 1.0, nf + gamma + 1.0).expect("positive arguments")
}

/// Logarithm of the leading coefficient of `q_n` on (0, 1).
pub(crate) fn ln_lead_ref(n: usize, beta: f64, gamma: f64) -> f64 {
    0.5 * (ln_r(n, beta, gamma) - ln_p(n, beta, gamma))
}

/// Ratios `c_k / c_n`, k = 0..=n, of the monomial coefficients of `q_n` in powers of `t`.
pub(crate) fn ref_ratio_chain(n: usize, beta: f64, gamma: f64) -> Vec<Dd> {
    let mut r = vec![Dd::ZERO; n + 1];
    r[n] = Dd::ONE;
    let bg = Dd::from(beta) + Dd::from(gamma);
    for m in (0..n).rev() {
        let mf = Dd::from(m as f64);
        let num = (mf + Dd::ONE) * (Dd::from(beta) + mf + Dd::ONE);
        let den = Dd::from((n - m) as f64) * (bg + Dd::from((n + m) as f64) + Dd::ONE);
        r[m] = -(r[m + 1] * num / den);
    }
    r
}

#[derive(Debug, Clone)]
pub struct JacobiBasis {
    interval: Interval,
    weight: WeightParams,
    max_degree: usize,
    rec: Recurrence,
    scale: f64,
    /// `ln δ_n`, the leading coefficient of `p_n` in powers of `x - a`
    norm_constants: Vec<f64>,
    left_forms: Vec<OnceLock<MonomialPoly>>,
    right_forms: Vec<OnceLock<MonomialPoly>>,
}

/// Builds the basis up to degree `max_degree`.
pub fn build_basis(
    interval: Interval,
    weight: WeightParams,
    max_degree: usize,
) -> Result<JacobiBasis> {
    JacobiBasis::new(interval, weight, max_degree)
}

impl JacobiBasis {
    pub fn new(interval: Interval, weight: WeightParams, max_degree: usize) -> Result<Self> {
        if max_degree > 8 * MAX_QUADRATURE_ORDER {
            return Err(Error::Capability(format!(
                "max degree {max_degree} is too large"
            )));
        }
        let (beta, gamma) = (weight.beta, weight.gamma);
        let rec = Recurrence::new(max_degree + 1, beta, gamma)?;
        let len = interval.length();
        let scale = len.powf(-(beta + gamma + 1.0) / 2.0);
        let norm_constants = (0..=max_degree)
            .map(|n| ln_lead_ref(n, beta, gamma) + scale.ln() - n as f64 * len.ln())
            .collect();
        let forms = max_degree.min(MONOMIAL_DEGREE_CAP) + 1;
        Ok(JacobiBasis {
            interval,
            weight,
            max_degree,
            rec,
            scale,
            norm_constants,
            left_forms: (0..forms).map(|_| OnceLock::new()).collect(),
            right_forms: (0..forms).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn weight(&self) -> WeightParams {
        self.weight
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn key(&self) -> BasisKey {
        BasisKey {
            interval: self.interval,
            weight: self.weight,
        }
    }

    /// `L^{-(β+γ+1)/2}`, the factor between `p_n` and the reference `q_n`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Leading coefficient of `p_n` in powers of `x - a`; may overflow to infinity for large `n`.
    pub fn leading_coefficient(&self, n: usize) -> Result<f64> {
        self.check_degree(n)?;
        Ok(self.norm_constants[n].exp())
    }

    pub(crate) fn recurrence(&self) -> &Recurrence {
        &self.rec
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.max_degree {
            return Err(Error::Index(format!(
                "degree {n} exceeds the basis maximum {}",
                self.max_degree
            )));
        }
        Ok(())
    }

    fn to_ref(&self, x: f64) -> Result<f64> {
        if !self.interval.contains(x) {
            return Err(Error::Domain(format!(
                "x = {x} is outside [{}, {}]",
                self.interval.a, self.interval.b
            )));
        }
        Ok(((x - self.interval.a) / self.interval.length()).clamp(0.0, 1.0))
    }

    pub fn evaluate(&self, n: usize, x: f64) -> Result<f64> {
        self.check_degree(n)?;
        let t = self.to_ref(x)?;
        let mut q = vec![0.0; n + 1];
        self.rec.eval_into(t, &mut q);
        Ok(self.scale * q[n])
    }

    /// `p_0(x), .., p_N(x)`.
    pub fn evaluate_all(&self, x: f64) -> Result<Vec<f64>> {
        let t = self.to_ref(x)?;
        let mut q = vec![0.0; self.max_degree + 1];
        self.rec.eval_into(t, &mut q);
        q.iter_mut().for_each(|v| *v *= self.scale);
        Ok(q)
    }

    pub fn derivative(&self, n: usize, x: f64) -> Result<f64> {
        self.check_degree(n)?;
        let t = self.to_ref(x)?;
        let mut q = vec![0.0; n + 1];
        let mut d = vec![0.0; n + 1];
        self.rec.eval_with_derivative_into(t, &mut q, &mut d);
        Ok(self.scale * d[n] / self.interval.length())
    }

    /// `Σ c_n p_n(x)` for `coeffs.len() <= N + 1`.
    pub fn eval_series(&self, coeffs: &[f64], x: f64) -> Result<f64> {
        if coeffs.len() > self.max_degree + 1 {
            return Err(Error::Index(format!(
                "{} coefficients exceed the basis size {}",
                coeffs.len(),
                self.max_degree + 1
            )));
        }
        let t = self.to_ref(x)?;
        Ok(self.scale * self.series_ref(coeffs, t))
    }

    /// Series on the reference interval without bounds checks or allocation.
    pub(crate) fn series_ref(&self, coeffs: &[f64], t: f64) -> f64 {
        if coeffs.is_empty() {
            return 0.0;
        }
        let rec = &self.rec;
        let mut q_prev = 0.0;
        let mut q = 1.0 / rec.mass.sqrt();
        let mut acc = coeffs[0] * q;
        for k in 0..coeffs.len() - 1 {
            let next = ((t - rec.diag[k]) * q - rec.off[k] * q_prev) / rec.off[k + 1];
            q_prev = q;
            q = next;
            acc += coeffs[k + 1] * q;
        }
        acc
    }

    /// Explicit form of `p_n` about `a` (Left) or `b` (Right).
    pub fn monomial_expansion(&self, n: usize, origin: Origin) -> Result<MonomialPoly> {
        self.check_degree(n)?;
        if n > MONOMIAL_DEGREE_CAP {
            return Err(Error::Capability(format!(
                "monomial forms are limited to degree {MONOMIAL_DEGREE_CAP}, requested {n}"
            )));
        }
        let cache = match origin {
            Origin::Left => &self.left_forms[n],
            Origin::Right => &self.right_forms[n],
        };
        Ok(cache.get_or_init(|| self.build_monomial(n, origin)).clone())
    }

    fn build_monomial(&self, n: usize, origin: Origin) -> MonomialPoly {
        let (beta, gamma) = (self.weight.beta, self.weight.gamma);
        // q_n^{(β,γ)}(t) = (-1)^n q_n^{(γ,β)}(1 - t)
        let (ratios, anchor, sign) = match origin {
            Origin::Left => (ref_ratio_chain(n, beta, gamma), self.interval.a, 1.0),
            Origin::Right => {
                let s = if n & 1 == 1 { -1.0 } else { 1.0 };
                (ref_ratio_chain(n, gamma, beta), self.interval.b, s)
            }
        };
        let front = sign * self.scale * ln_lead_ref(n, beta, gamma).exp();
        let inv_len = Dd::ONE / Dd::from(self.interval.length());
        let mut pow = Dd::ONE;
        let coeffs = ratios
            .into_iter()
            .map(|r| {
                let c = (r * pow).mul_f64(front);
                pow *= inv_len;
                c
            })
            .collect();
        MonomialPoly::from_dd(origin, anchor, coeffs)
    }

    /// Gauss rule of the given order for `ω` on `(a, b)`.
    pub fn quadrature_rule(&self, order: usize) -> Result<QuadratureRule> {
        let (beta, gamma) = (self.weight.beta, self.weight.gamma);
        let r = gauss_jacobi_ref(order, beta, gamma)?;
        let len = self.interval.length();
        let wscale = len.powf(beta + gamma + 1.0);
        Ok(QuadratureRule {
            key: self.key(),
            nodes: r.nodes.iter().map(|t| self.interval.a + len * t).collect(),
            weights: r.weights.iter().map(|w| w * wscale).collect(),
        })
    }

    /// Discrete projection `f_n = Σ_j w_j f(x_j) p_n(x_j)`, n = 0..=N.
    pub fn project(&self, values: &[f64], rule: &QuadratureRule) -> Result<CoefficientVector> {
        if rule.key != self.key() {
            return Err(Error::Shape(
                "quadrature rule belongs to a different basis".into(),
            ));
        }
        if values.len() != rule.nodes.len() {
            return Err(Error::Shape(format!(
                "{} samples for a rule with {} nodes",
                values.len(),
                rule.nodes.len()
            )));
        }
        let mut out = vec![0.0; self.max_degree + 1];
        let mut q = vec![0.0; self.max_degree + 1];
        let len = self.interval.length();
        for ((&x, &w), &f) in rule.nodes.iter().zip(&rule.weights).zip(values) {
            self.rec.eval_into((x - self.interval.a) / len, &mut q);
            let wf = w * f * self.scale;
            for (o, qk) in out.iter_mut().zip(&q) {
                *o += wf * qk;
            }
        }
        Ok(CoefficientVector::new(self.key(), out))
    }

    /// Projection of a callable, sampled at the nodes of a rule of the given order.
    pub fn project_fn(&self, f: impl Fn(f64) -> f64, order: usize) -> Result<CoefficientVector> {
        let rule = self.quadrature_rule(order)?;
        let values: Vec<f64> = rule.nodes.iter().map(|&x| f(x)).collect();
        self.project(&values, &rule)
    }

    /// Exact coefficients of `(x - a)^s`, n = 0..=N.
    pub fn power_coefficients(&self, s: f64) -> Result<CoefficientVector> {
        let (beta, gamma) = (self.weight.beta, self.weight.gamma);
        if !(s.is_finite() && s + beta + 1.0 > 0.0) {
            return Err(Error::Integrability(format!(
                "(x - a)^{s} is not integrable against the weight"
            )));
        }
        let len = self.interval.length();
        let front = self.scale * len.powf(s + beta + gamma + 1.0);
        let mut out = Vec::with_capacity(self.max_degree + 1);
        // falling factorial s (s-1) .. (s-n+1), tracked as log magnitude and sign
        let mut ln_ff = 0.0;
        let mut sign = 1.0;
        for n in 0..=self.max_degree {
            if n > 0 {
                let f = s - (n - 1) as f64;
                if f == 0.0 {
                    sign = 0.0;
                } else {
                    ln_ff += f.abs().ln();
                    sign *= f.signum();
                }
            }
            if sign == 0.0 {
                out.push(0.0);
                continue;
            }
            let ln_m = ln_ff + ln_beta(s + beta + 1.0, gamma + n as f64 + 1.0)?
                - 0.5 * (ln_r(n, beta, gamma) + ln_p(n, beta, gamma));
            out.push(front * sign * ln_m.exp());
        }
        Ok(CoefficientVector::new(self.key(), out))
    }

    /// `S_k f(x) = Σ_{n<=k} f_n p_n(x)`.
    pub fn partial_sum(&self, coeffs: &CoefficientVector, k: usize, x: f64) -> Result<f64> {
        if coeffs.key != self.key() {
            return Err(Error::Shape(
                "coefficients belong to a different basis".into(),
            ));
        }
        if k >= coeffs.len() || k > self.max_degree {
            return Err(Error::Index(format!(
                "truncation {k} exceeds the available degree {}",
                coeffs.len().min(self.max_degree + 1).saturating_sub(1)
            )));
        }
        self.eval_series(&coeffs.values[..=k], x)
    }

    /// `M_n = ‖p_n‖_{L^ν(ω)}`, n = 0..=n_max.
    pub fn basis_norms(&self, nu: f64, n_max: usize) -> Result<Vec<f64>> {
        if !(nu > 2.0 && nu.is_finite()) {
            return Err(Error::Domain(format!(
                "norm exponent nu must exceed 2, got {nu}"
            )));
        }
        self.check_degree(n_max)?;
        let order = ((nu * n_max as f64 / 2.0).ceil() as usize + 16).min(MAX_QUADRATURE_ORDER);
        let rule = gauss_jacobi_ref(order, self.weight.beta, self.weight.gamma)?;
        let mut acc = vec![0.0; n_max + 1];
        let mut q = vec![0.0; n_max + 1];
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            self.rec.eval_into(t, &mut q);
            for (a, qk) in acc.iter_mut().zip(&q) {
                *a += w * qk.abs().powf(nu);
            }
        }
        // ∫|p_n|^ν ω dx = L^{β+γ+1} scale^ν ∫|q_n|^ν
        let len = self.interval.length();
        let factor = len.powf(self.weight.beta + self.weight.gamma + 1.0) * self.scale.powf(nu);
        Ok(acc
            .into_iter()
            .map(|a| (a * factor).powf(1.0 / nu))
            .collect())
    }

    /// Norms together with a power-law fit over the upper half `[n_max/2, n_max]`;
    /// the growth exponent is `-fit.lambda_hat`.
    pub fn basis_norm_growth(&self, nu: f64, n_max: usize) -> Result<(Vec<f64>, DecayFit)> {
        let norms = self.basis_norms(nu, n_max)?;
        let fit = fit_decay(&norms, (n_max / 2).max(1), n_max)?;
        Ok((norms, fit))
    }
}
