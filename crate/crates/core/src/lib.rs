//! Riemann–Liouville fractional integrals and derivatives of order
//! `α ∈ (0, 1)` as Galerkin matrices in orthonormal Jacobi bases, with a
//! spectral solver for the Abel integral equation and diagnostics for the
//! decay of the resulting coefficient sequences.

// Constants carry every digit of their source; `!(x > y)` also rejects NaN.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod abel_solver;
pub mod dd;
pub mod error;
pub mod frac_ops;
pub mod io;
pub mod jacobi_basis;
pub mod quadrature;
pub mod special_fn;
pub mod zm_analysis;

pub use error::{Error, Result};

/// Maps `0..n` through `f`, in parallel when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub(crate) fn par_map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..n).map(f).collect()
}
