use fracgalerkin::jacobi_basis::{build_basis, Interval, JacobiBasis, Origin, WeightParams};
use proptest::prelude::*;

fn basis(a: f64, b: f64, beta: f64, gamma: f64, n: usize) -> JacobiBasis {
    build_basis(
        Interval::new(a, b).unwrap(),
        WeightParams::new(beta, gamma).unwrap(),
        n,
    )
    .unwrap()
}

const CORNERS: [f64; 3] = [-0.5, 0.0, 0.5];

#[test]
fn monomial_forms_agree_with_recurrence_at_chebyshev_points() {
    for &beta in &CORNERS {
        for &gamma in &CORNERS {
            let b = basis(-1.0, 3.0, beta, gamma, 20);
            for n in 0..=20 {
                let left = b.monomial_expansion(n, Origin::Left).unwrap();
                let right = b.monomial_expansion(n, Origin::Right).unwrap();
                for j in 0..20 {
                    let t = 0.5 * (1.0 - ((2 * j + 1) as f64 * std::f64::consts::PI / 40.0).cos());
                    let x = -1.0 + 4.0 * t;
                    let v = b.evaluate(n, x).unwrap();
                    assert!(
                        (left.evaluate(x) - v).abs() < 1e-9,
                        "({beta},{gamma}) n={n} x={x}"
                    );
                    assert!(
                        (right.evaluate(x) - v).abs() < 1e-9,
                        "({beta},{gamma}) n={n} x={x}"
                    );
                }
            }
        }
    }
}

#[test]
fn legendre_norms_grow_monotonically() {
    let b = basis(-1.0, 1.0, 0.0, 0.0, 100);
    let m = b.basis_norms(5.0, 100).unwrap();
    for n in 2..100 {
        assert!(m[n + 1] >= m[n], "n={n}: {} < {}", m[n + 1], m[n]);
    }
}

#[test]
fn legendre_growth_exponent_for_nu_six() {
    let b = basis(-1.0, 1.0, 0.0, 0.0, 200);
    let (norms, fit) = b.basis_norm_growth(6.0, 200).unwrap();
    assert_eq!(norms.len(), 201);
    assert_eq!(fit.window, (100, 200));
    assert!(
        (-fit.lambda_hat - 1.0 / 6.0).abs() < 0.03,
        "growth {}",
        -fit.lambda_hat
    );
}

#[test]
fn norm_of_constant_matches_closed_form() {
    // p_0 = (mass)^{-1/2}; ‖p_0‖_ν = mass^{1/ν - 1/2}
    let b = basis(0.0, 2.0, 0.5, -0.5, 0);
    let mass = 2f64.powf(1.0) * std::f64::consts::PI / 2.0;
    let m = b.basis_norms(3.0, 0).unwrap();
    assert!((m[0] - mass.powf(1.0 / 3.0 - 0.5)).abs() < 1e-13);
}

proptest! {
    #[test]
    fn affine_invariance(
        a in -5.0f64..5.0,
        len in 0.1f64..10.0,
        bi in 0usize..3,
        gi in 0usize..3,
        n in 0usize..25,
        t in 0.0f64..1.0,
    ) {
        let (beta, gamma) = (CORNERS[bi], CORNERS[gi]);
        let phys = basis(a, a + len, beta, gamma, 24);
        let unit = basis(0.0, 1.0, beta, gamma, 24);
        let x = (a + len * t).clamp(a, a + len);
        let want = len.powf(-(beta + gamma + 1.0) / 2.0) * unit.evaluate(n, (x - a) / len).unwrap();
        let got = phys.evaluate(n, x).unwrap();
        prop_assert!((got - want).abs() < 1e-10 * (1.0 + want.abs()));
    }

    #[test]
    fn projection_recovers_basis_combinations(
        coeffs in proptest::collection::vec(-2.0f64..2.0, 1..12),
        bi in 0usize..3,
        gi in 0usize..3,
    ) {
        let b = basis(1.0, 2.5, CORNERS[bi], CORNERS[gi], 12);
        let c = coeffs.clone();
        let f = move |x: f64| b.eval_series(&c, x).unwrap();
        let b2 = basis(1.0, 2.5, CORNERS[bi], CORNERS[gi], 12);
        let proj = b2.project_fn(f, 16).unwrap();
        for (n, v) in proj.values().iter().enumerate() {
            let want = coeffs.get(n).copied().unwrap_or(0.0);
            prop_assert!((v - want).abs() < 1e-12);
        }
    }
}
