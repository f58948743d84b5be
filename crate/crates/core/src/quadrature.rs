//! Orthonormal Jacobi recurrences on the reference interval (0, 1) and the
//! Gauss rules built from them.
//!
//! Weight convention: `t^left (1 - t)^right`, both exponents `> -1`. Nodes
//! are the eigenvalues of the symmetric tridiagonal Jacobi matrix, polished
//! by one Newton step on the degree-`n` polynomial; weights come from the
//! Christoffel function, which keeps small endpoint weights relatively
//! accurate.

use std::sync::OnceLock;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::special_fn::ln_beta;

/// Largest Gauss rule the crate will build.
pub const MAX_QUADRATURE_ORDER: usize = 2048;

/// Three-term recurrence `t q_k = b_{k+1} q_{k+1} + a_k q_k + b_k q_{k-1}`
/// of the orthonormal polynomials for `t^left (1-t)^right` on (0, 1).
#[derive(Debug, Clone)]
pub(crate) struct Recurrence {
    /// `a_k`, k = 0..=n
    pub diag: Vec<f64>,
    /// `b_k`, k = 0..=n+1 (`b_0` unused, stored as 0)
    pub off: Vec<f64>,
    /// total mass `B(left + 1, right + 1)`
    pub mass: f64,
}

impl Recurrence {
    pub fn new(n: usize, left: f64, right: f64) -> Result<Self> {
        if !(left > -1.0 && right > -1.0) {
            return Err(Error::Domain(format!(
                "Jacobi weight exponents must exceed -1, got ({left}, {right})"
            )));
        }
        // Classical monic recurrence on (-1, 1) for (1-x)^A (1+x)^B, mapped by t = (1+x)/2.
        let (ra, rb) = (right, left);
        let s = ra + rb;
        let mut diag = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let kf = k as f64;
            let alpha = if k == 0 {
                (rb - ra) / (s + 2.0)
            } else {
                (rb * rb - ra * ra) / ((2.0 * kf + s) * (2.0 * kf + s + 2.0))
            };
            diag.push(0.5 * (1.0 + alpha));
        }
        let mut off = vec![0.0; n + 2];
        for (k, slot) in off.iter_mut().enumerate().skip(1) {
            let kf = k as f64;
            let beta = if k == 1 {
                4.0 * (1.0 + ra) * (1.0 + rb) / ((2.0 + s).powi(2) * (3.0 + s))
            } else {
                let d = 2.0 * kf + s;
                4.0 * kf * (kf + ra) * (kf + rb) * (kf + s) / (d * d * (d + 1.0) * (d - 1.0))
            };
            *slot = 0.5 * beta.sqrt();
        }
        let mass = ln_beta(left + 1.0, right + 1.0)?.exp();
        Ok(Recurrence { diag, off, mass })
    }

    /// Orthonormal values `q_0..q_{out.len()-1}` at `t`.
    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        if out.is_empty() {
            return;
        }
        out[0] = 1.0 / self.mass.sqrt();
        if out.len() > 1 {
            out[1] = (t - self.diag[0]) * out[0] / self.off[1];
        }
        for k in 1..out.len().saturating_sub(1) {
            out[k + 1] = ((t - self.diag[k]) * out[k] - self.off[k] * out[k - 1]) / self.off[k + 1];
        }
    }

    /// Values and first derivatives.
    pub fn eval_with_derivative_into(&self, t: f64, val: &mut [f64], der: &mut [f64]) {
        let len = val.len();
        if len == 0 {
            return;
        }
        val[0] = 1.0 / self.mass.sqrt();
        der[0] = 0.0;
        if len > 1 {
            val[1] = (t - self.diag[0]) * val[0] / self.off[1];
            der[1] = val[0] / self.off[1];
        }
        for k in 1..len.saturating_sub(1) {
            val[k + 1] = ((t - self.diag[k]) * val[k] - self.off[k] * val[k - 1]) / self.off[k + 1];
            der[k + 1] =
                ((t - self.diag[k]) * der[k] + val[k] - self.off[k] * der[k - 1]) / self.off[k + 1];
        }
    }
}

/// Gauss nodes and weights on (0, 1) for `t^left (1-t)^right`.
#[derive(Debug, Clone)]
pub(crate) struct RefRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

pub(crate) fn gauss_jacobi_ref(order: usize, left: f64, right: f64) -> Result<RefRule> {
    if order == 0 {
        return Err(Error::Domain("quadrature order must be at least 1".into()));
    }
    if order > MAX_QUADRATURE_ORDER {
        return Err(Error::Capability(format!(
            "quadrature order {order} exceeds the supported maximum {MAX_QUADRATURE_ORDER}"
        )));
    }
    let rec = Recurrence::new(order, left, right)?;
    let n = order;
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            rec.diag[i]
        } else if i + 1 == j {
            rec.off[j]
        } else if j + 1 == i {
            rec.off[i]
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));

    let mut val = vec![0.0; n + 1];
    let mut der = vec![0.0; n + 1];
    let mut weights = Vec::with_capacity(n);
    for t in nodes.iter_mut() {
        rec.eval_with_derivative_into(*t, &mut val, &mut der);
        if der[n] != 0.0 {
            let step = val[n] / der[n];
            let polished = *t - step;
            if polished > 0.0 && polished < 1.0 && step.abs() < 1e-6 {
                *t = polished;
                rec.eval_into(*t, &mut val);
            }
        }
        let christoffel: f64 = val[..n].iter().map(|q| q * q).sum();
        weights.push(1.0 / christoffel);
    }
    Ok(RefRule { nodes, weights })
}

/// Gauss nodes and weights on (0, 1) for the weight `t^left (1-t)^right`.
pub fn gauss_jacobi(order: usize, left: f64, right: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let r = gauss_jacobi_ref(order, left, right)?;
    Ok((r.nodes, r.weights))
}

/// Gauss–Legendre on (0, 1) with 128 nodes, built once.
pub(crate) fn legendre_128() -> &'static RefRule {
    static RULE: OnceLock<RefRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_jacobi_ref(128, 0.0, 0.0).expect("Gauss-Legendre rule"))
}

/// Gauss–Legendre on (0, 1) with 20 nodes, for composite cells.
pub(crate) fn legendre_20() -> &'static RefRule {
    static RULE: OnceLock<RefRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_jacobi_ref(20, 0.0, 0.0).expect("Gauss-Legendre rule"))
}
