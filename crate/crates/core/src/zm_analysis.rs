//! Power-law decay fits and the convergence calculus for
//! `Σ |c_n|^q M_n^{ν(q-2)/(ν-2)} n^{(ν-1)(q-2)/(ν-2)}`.

use serde::{Deserialize, Serialize};

use crate::dd::Dd;
use crate::error::{Error, Result};

/// Least-squares fit of `|c_m| ≈ amplitude * m^{-lambda_hat}` on a log-log scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub lambda_hat: f64,
    pub amplitude: f64,
    pub r_squared: f64,
    pub window: (usize, usize),
}

/// Entries whose magnitude is below this are treated as exact zeros.
pub const FIT_FLOOR: f64 = 1e-14;

/// Fits `|c_m|` for `m` in `lo..=hi`, skipping `m = 0` and zero entries.
pub fn fit_decay(coeffs: &[f64], lo: usize, hi: usize) -> Result<DecayFit> {
    if lo > hi || hi >= coeffs.len() {
        return Err(Error::Index(format!(
            "window [{lo}, {hi}] does not fit {} coefficients",
            coeffs.len()
        )));
    }
    let pts: Vec<(f64, f64)> = (lo.max(1)..=hi)
        .filter(|&m| coeffs[m].is_finite() && coeffs[m].abs() >= FIT_FLOOR)
        .map(|m| ((m as f64).ln(), coeffs[m].abs().ln()))
        .collect();
    if pts.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "{} usable coefficients in [{lo}, {hi}], need at least 4",
            pts.len()
        )));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r_squared = if syy > 0.0 {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(DecayFit {
        lambda_hat: -slope,
        amplitude: intercept.exp(),
        r_squared,
        window: (lo, hi),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Regime {
    Low,
    Mid,
    High,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Low => "LOW",
            Regime::Mid => "MID",
            Regime::High => "HIGH",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZMReport {
    pub regime: Regime,
    pub lambda: f64,
    pub growth_beta: f64,
    pub nu: f64,
    pub p: f64,
    /// Supremum of admissible exponents; infinite in the HIGH regime.
    pub q_sup: f64,
    /// Exponent at which the series and constant are evaluated.
    pub probe_q: f64,
    pub series_value: Option<f64>,
    pub series_converged: Option<bool>,
    pub constant_factor: f64,
}

fn check_nu(nu: f64) -> Result<()> {
    if !(nu > 2.0) {
        return Err(Error::Domain(format!("nu must exceed 2, got {nu}")));
    }
    Ok(())
}

fn check_q(q: f64, nu: f64) -> Result<()> {
    if !(q >= 2.0) {
        return Err(Error::Domain(format!("q must be at least 2, got {q}")));
    }
    if nu.is_finite() && q >= nu {
        return Err(Error::Domain(format!("q = {q} must be below nu = {nu}")));
    }
    Ok(())
}

/// Boundary between the MID and HIGH regimes: `(ν(β+1) - 1) / (ν - 2)`.
pub fn mid_threshold(growth_beta: f64, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    Ok((nu * (growth_beta + 1.0) - 1.0) / (nu - 2.0))
}

/// `βν(q-2)/(ν-2) + (ν-1)(q-2)/(ν-2) - λq`; the series converges when this is below -1.
pub fn convergence_lhs(lambda: f64, growth_beta: f64, nu: f64, q: f64) -> Result<f64> {
    check_nu(nu)?;
    if !(q >= 2.0) {
        return Err(Error::Domain(format!("q must be at least 2, got {q}")));
    }
    let r = (q - 2.0) / (nu - 2.0);
    Ok(growth_beta * nu * r + (nu - 1.0) * r - lambda * q)
}

pub fn check_convergence_inequality(
    lambda: f64,
    growth_beta: f64,
    nu: f64,
    q: f64,
) -> Result<bool> {
    Ok(convergence_lhs(lambda, growth_beta, nu, q)? < -1.0)
}

/// `(ν-2)/(ν-q) * q`.
pub fn zm_constant_factor(q: f64, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    check_q(q, nu)?;
    Ok((nu - 2.0) / (nu - q) * q)
}

/// Exponent used to probe a regime: just below `q_sup` in MID, clamped into `[2, ν)`.
fn probe_exponent(regime: Regime, p: f64, q_sup: f64, nu: f64) -> f64 {
    let below_nu = nu - (1e-3f64).max(1e-6 * nu);
    let q = match regime {
        Regime::Low => p,
        Regime::Mid => (q_sup - 1e-3).min(0.999 * q_sup),
        Regime::High => below_nu,
    };
    q.max(2.0).min(below_nu)
}

/// Classifies the decay rate against the growth of the basis norms.
pub fn classify_regime(lambda: f64, growth_beta: f64, nu: f64, p: f64) -> Result<ZMReport> {
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::Domain(format!(
            "decay rate must be nonnegative, got {lambda}"
        )));
    }
    if !(growth_beta >= 0.0 && growth_beta.is_finite()) {
        return Err(Error::Domain(format!(
            "growth exponent must be nonnegative, got {growth_beta}"
        )));
    }
    check_nu(nu)?;
    if !(p >= 2.0) {
        return Err(Error::Domain(format!("p must be at least 2, got {p}")));
    }
    let threshold = mid_threshold(growth_beta, nu)?;
    let (regime, q_sup) = if lambda <= 0.5 {
        (Regime::Low, p)
    } else if lambda < threshold {
        let q = nu * (2.0 * growth_beta + 1.0)
            / (nu * (growth_beta + 1.0 - lambda) + 2.0 * lambda - 1.0);
        (Regime::Mid, q)
    } else {
        (Regime::High, f64::INFINITY)
    };
    let probe_q = probe_exponent(regime, p, q_sup, nu);
    let constant_factor = if nu.is_finite() {
        zm_constant_factor(probe_q, nu)?
    } else {
        probe_q
    };
    Ok(ZMReport {
        regime,
        lambda,
        growth_beta,
        nu,
        p,
        q_sup,
        probe_q,
        series_value: None,
        series_converged: None,
        constant_factor,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOutcome {
    pub partial_sum: f64,
    pub converged: bool,
}

/// Relative share of the last quarter below which a partial sum counts as settled.
pub const TAIL_TOLERANCE: f64 = 1e-6;

/// Largest ratio of consecutive dyadic block sums accepted as geometric contraction.
pub const BLOCK_RATIO_LIMIT: f64 = 0.99;

/// Partial sum over `n < n_terms`, the `n = 0` weight factor being 1.
///
/// The convergence flag accepts either a negligible last quarter or a
/// contracting ratio between the dyadic blocks `(n/2, n]` and `(n/4, n/2]`.
pub fn zm_series(c: &[f64], m: &[f64], nu: f64, q: f64, n_terms: usize) -> Result<SeriesOutcome> {
    check_nu(nu)?;
    check_q(q, nu)?;
    if n_terms == 0 || c.len() < n_terms || m.len() < n_terms {
        return Err(Error::Shape(format!(
            "need {n_terms} coefficients and norms, got {} and {}",
            c.len(),
            m.len()
        )));
    }
    let e_m = nu * (q - 2.0) / (nu - 2.0);
    let e_n = (nu - 1.0) * (q - 2.0) / (nu - 2.0);
    let term = |n: usize| -> f64 {
        let base = c[n].abs().powf(q);
        if n == 0 || base == 0.0 {
            return base;
        }
        let mw = if e_m == 0.0 {
            1.0
        } else {
            m[n].abs().powf(e_m)
        };
        base * mw * (n as f64).powf(e_n)
    };
    let block = |lo: usize, hi: usize| -> Dd { (lo..hi).map(|n| Dd::from(term(n))).sum() };
    let quarter = n_terms - n_terms / 4;
    let (head, tail) = (block(0, quarter), block(quarter, n_terms));
    let total = (head + tail).to_f64();
    if !total.is_finite() {
        return Ok(SeriesOutcome {
            partial_sum: total,
            converged: false,
        });
    }
    if total == 0.0 {
        return Ok(SeriesOutcome {
            partial_sum: 0.0,
            converged: true,
        });
    }
    let tail_settled = tail.to_f64() / total < TAIL_TOLERANCE;
    let contracting = if n_terms >= 16 {
        let h = n_terms / 2;
        let q4 = n_terms / 4;
        let upper = block(h, n_terms).to_f64();
        let lower = block(q4, h).to_f64();
        if lower > 0.0 {
            upper / lower <= BLOCK_RATIO_LIMIT
        } else {
            upper == 0.0
        }
    } else {
        false
    };
    Ok(SeriesOutcome {
        partial_sum: total,
        converged: tail_settled || contracting,
    })
}
