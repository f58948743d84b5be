use fracgalerkin::special_fn::{beta, gamma_ratio, log_gamma, reciprocal_gamma, sin_pi};
use proptest::prelude::*;
use std::f64::consts::PI;

proptest! {
    #[test]
    fn gamma_recurrence(x in 0.01f64..150.0) {
        let lhs = log_gamma(x + 1.0).unwrap();
        let rhs = log_gamma(x).unwrap() + x.ln();
        prop_assert!((lhs - rhs).abs() < 1e-13 * (1.0 + lhs.abs()));
    }

    #[test]
    fn reflection(x in -20.0f64..20.0) {
        prop_assume!((x - x.round()).abs() > 1e-3);
        // 1/(Γ(x)Γ(1-x)) = sin(πx)/π
        let prod = reciprocal_gamma(x) * reciprocal_gamma(1.0 - x);
        prop_assert!((prod - sin_pi(x) / PI).abs() < 1e-12 * (1.0 + prod.abs()));
    }

    #[test]
    fn beta_symmetry_and_recurrence(x in 0.05f64..60.0, y in 0.05f64..60.0) {
        let b = beta(x, y).unwrap();
        prop_assert_eq!(b, beta(y, x).unwrap());
        let next = beta(x + 1.0, y).unwrap();
        prop_assert!((next - b * x / (x + y)).abs() < 1e-12 * b);
    }

    #[test]
    fn gamma_ratio_matches_beta(x in 0.1f64..30.0, a in 0.05f64..0.95) {
        // Γ(x)/Γ(x+a) = B(x, a)/Γ(a)
        let r = gamma_ratio(x, x + a).unwrap();
        let want = beta(x, a).unwrap() * reciprocal_gamma(a);
        prop_assert!((r - want).abs() < 1e-12 * want);
    }
}
