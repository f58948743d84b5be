use clap::{Args, ValueEnum};
use fracgalerkin::frac_ops::{validate_alpha, Convention, OperatorKind};
use fracgalerkin::jacobi_basis::{Interval, WeightParams};
use std::path::PathBuf;

use crate::CliError;

#[derive(Debug, Clone, Args)]
pub struct BasisArgs {
    /// Left end of the interval.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    /// Right end of the interval.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub b: f64,
    /// Weight exponent at `a`, in [-1/2, 1/2].
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
    /// Weight exponent at `b`, in [-1/2, 1/2].
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma: f64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

impl BasisArgs {
    pub fn interval(&self) -> Result<Interval, CliError> {
        Interval::new(self.a, self.b).map_err(CliError::Config)
    }

    pub fn weight(&self) -> Result<WeightParams, CliError> {
        WeightParams::new(self.beta, self.gamma).map_err(CliError::Config)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Integral,
    Derivative,
    Both,
}

impl KindArg {
    pub fn kinds(self) -> Vec<OperatorKind> {
        match self {
            KindArg::Integral => vec![OperatorKind::Integral],
            KindArg::Derivative => vec![OperatorKind::Derivative],
            KindArg::Both => vec![OperatorKind::Integral, OperatorKind::Derivative],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Galerkin,
    Paper,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Galerkin => Convention::Galerkin,
            ConventionArg::Paper => Convention::Paper,
        }
    }
}

pub fn check_alpha(alpha: f64) -> Result<(), CliError> {
    validate_alpha(alpha).map_err(CliError::Config)
}

pub fn check_nu_p(nu: f64, p: f64) -> Result<(), CliError> {
    if !(nu > 2.0) || !nu.is_finite() {
        return Err(CliError::config(format!(
            "--nu must be a finite number above 2, got {nu}"
        )));
    }
    if !(p >= 2.0) || !p.is_finite() {
        return Err(CliError::config(format!(
            "--p must be a finite number of at least 2, got {p}"
        )));
    }
    Ok(())
}

/// Fully validated settings of a solve run.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub interval: Interval,
    pub weight: WeightParams,
    pub alpha: f64,
    pub n: usize,
    pub inner_n: usize,
    pub quad_order: usize,
    pub nu: f64,
    pub p: f64,
    pub samples: PathBuf,
    pub out: PathBuf,
}

impl JobConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        basis: &BasisArgs,
        alpha: f64,
        n: usize,
        inner_n: Option<usize>,
        quad_order: Option<usize>,
        nu: f64,
        p: f64,
        samples: PathBuf,
    ) -> Result<Self, CliError> {
        check_alpha(alpha)?;
        check_nu_p(nu, p)?;
        let inner_n = inner_n.unwrap_or((8 * n).max(64));
        if inner_n < n {
            return Err(CliError::config(format!(
                "--inner-n ({inner_n}) must be at least --n ({n})"
            )));
        }
        let quad_order = quad_order.unwrap_or(2 * inner_n + 64);
        if quad_order <= inner_n {
            return Err(CliError::config(format!(
                "--quad-order ({quad_order}) must exceed --inner-n ({inner_n})"
            )));
        }
        if quad_order > fracgalerkin::quadrature::MAX_QUADRATURE_ORDER {
            return Err(CliError::config(format!(
                "--quad-order ({quad_order}) exceeds the supported maximum {}",
                fracgalerkin::quadrature::MAX_QUADRATURE_ORDER
            )));
        }
        Ok(JobConfig {
            interval: basis.interval()?,
            weight: basis.weight()?,
            alpha,
            n,
            inner_n,
            quad_order,
            nu,
            p,
            samples,
            out: basis.out.clone(),
        })
    }

    /// Smallest sample grid accepted for resampling.
    pub fn min_samples(&self) -> usize {
        self.quad_order.max(2 * (self.inner_n + 1))
    }
}
