//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export has a plain Rust twin in [`demo`] so the numerics can be
//! tested natively; the bindings only convert errors.

use wasm_bindgen::prelude::*;

pub mod demo;

fn js_err(e: fracgalerkin::Error) -> JsError {
    JsError::new(&format!("{}: {}", e.code(), e.message()))
}

/// Uniform grid of `points` abscissae on `[0, 1]`.
#[wasm_bindgen]
pub fn unit_grid(points: usize) -> Vec<f64> {
    demo::unit_grid(points)
}

/// Basis polynomials `p_0..=p_n` on (0, 1), concatenated row by row.
#[wasm_bindgen]
pub fn basis_curves(beta: f64, gamma: f64, n: usize, points: usize) -> Result<Vec<f64>, JsError> {
    demo::basis_curves(beta, gamma, n, points).map_err(js_err)
}

/// Rows `x^s`, `I^α x^s`, `D^α x^s` on the unit grid; `NaN` marks a singular value.
#[wasm_bindgen]
pub fn power_images(s: f64, alpha: f64, points: usize) -> Result<Vec<f64>, JsError> {
    demo::power_images(s, alpha, points).map_err(js_err)
}

#[wasm_bindgen]
pub struct AbelRun {
    inner: demo::AbelOutcome,
}

#[wasm_bindgen]
impl AbelRun {
    #[wasm_bindgen(getter)]
    pub fn xs(&self) -> Vec<f64> {
        self.inner.xs.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn psi(&self) -> Vec<f64> {
        self.inner.psi.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn exact(&self) -> Vec<f64> {
        self.inner.exact.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn coefficients(&self) -> Vec<f64> {
        self.inner.coefficients.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn residual(&self) -> f64 {
        self.inner.residual
    }

    /// Regime report as JSON text.
    #[wasm_bindgen(getter)]
    pub fn report(&self) -> String {
        self.inner.report.clone()
    }
}

/// Solves `I^α ψ = x^s` on (0, 1) with `n + 1` solution coefficients.
#[wasm_bindgen]
pub fn abel_demo(alpha: f64, s: f64, n: usize, points: usize) -> Result<AbelRun, JsError> {
    demo::abel(alpha, s, n, points)
        .map(|inner| AbelRun { inner })
        .map_err(js_err)
}

/// Regime report for a decay rate, as JSON text.
#[wasm_bindgen]
pub fn classify(lambda: f64, growth_beta: f64, nu: f64, p: f64) -> Result<String, JsError> {
    demo::classify(lambda, growth_beta, nu, p).map_err(js_err)
}
