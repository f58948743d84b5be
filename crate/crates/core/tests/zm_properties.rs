use fracgalerkin::zm_analysis::{
    check_convergence_inequality, classify_regime, fit_decay, mid_threshold, zm_series, Regime,
};
use proptest::prelude::*;

#[test]
fn perturbed_power_law_in_tail_window() {
    let c: Vec<f64> = (0..=64)
        .map(|m| {
            let m = m.max(1) as f64;
            (1.0 + 0.1 / m) / m
        })
        .collect();
    let fit = fit_decay(&c, 32, 64).unwrap();
    assert!(
        (0.95..=1.05).contains(&fit.lambda_hat),
        "{}",
        fit.lambda_hat
    );
}

#[test]
fn mid_regime_inequality_holds_below_q_sup() {
    for &lambda in &[0.6, 0.8, 1.0, 1.2] {
        for &beta in &[0.0, 0.25, 0.5] {
            for &nu in &[3.0, 4.0, 6.0] {
                let r = classify_regime(lambda, beta, nu, 2.0).unwrap();
                if r.regime != Regime::Mid || r.q_sup <= 2.0 {
                    continue;
                }
                for i in 0..10 {
                    let q = 2.0 + (r.q_sup - 2.0) * i as f64 / 10.0;
                    assert!(
                        check_convergence_inequality(lambda, beta, nu, q).unwrap(),
                        "{lambda} {beta} {nu} {q}"
                    );
                }
            }
        }
    }
}

#[test]
fn harmonic_tail_is_not_converged() {
    let n = 50_000;
    let c: Vec<f64> = (0..n).map(|k| 1.0 / (k.max(1) as f64).sqrt()).collect();
    let m = vec![1.0; n];
    assert!(!zm_series(&c, &m, 4.0, 2.0, n).unwrap().converged);
}

proptest! {
    #[test]
    fn regimes_partition_the_rate_axis(lambda in 0.0f64..4.0, beta in 0.0f64..1.0, nu in 2.01f64..10.0, p in 2.0f64..6.0) {
        let r = classify_regime(lambda, beta, nu, p).unwrap();
        let t = mid_threshold(beta, nu).unwrap();
        let expected = if lambda <= 0.5 { Regime::Low } else if lambda < t { Regime::Mid } else { Regime::High };
        prop_assert_eq!(r.regime, expected);
        match r.regime {
            Regime::Low => prop_assert_eq!(r.q_sup, p),
            Regime::Mid => {
                let want = nu * (2.0 * beta + 1.0) / (nu * (beta + 1.0 - lambda) + 2.0 * lambda - 1.0);
                prop_assert_eq!(r.q_sup, want);
            }
            Regime::High => prop_assert!(r.q_sup.is_infinite()),
        }
        prop_assert!(r.probe_q >= 2.0 && r.probe_q < nu);
    }

    #[test]
    fn q_sup_increases_with_lambda_in_mid(l1 in 0.51f64..3.0, dl in 0.001f64..0.5, beta in 0.0f64..1.0, nu in 2.5f64..8.0) {
        let a = classify_regime(l1, beta, nu, 2.0).unwrap();
        let b = classify_regime(l1 + dl, beta, nu, 2.0).unwrap();
        prop_assume!(a.regime == Regime::Mid && b.regime == Regime::Mid);
        prop_assert!(b.q_sup > a.q_sup);
    }
}
