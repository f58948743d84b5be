use fracgalerkin_web::demo;

#[test]
fn basis_rows_start_with_the_constant() {
    let rows = demo::basis_curves(0.0, 0.0, 3, 5).unwrap();
    assert_eq!(rows.len(), 20);
    assert!(rows[..5].iter().all(|v| (v - 1.0).abs() < 1e-14));
    // p_1 = sqrt(3) (2x - 1)
    assert!((rows[5] + 3f64.sqrt()).abs() < 1e-14);
    assert!((rows[9] - 3f64.sqrt()).abs() < 1e-14);
}

#[test]
fn power_images_of_square_root() {
    let rows = demo::power_images(0.5, 0.5, 3).unwrap();
    // I^{1/2} x^{1/2} = (sqrt(pi)/2) x, D^{1/2} x^{1/2} = sqrt(pi)/2
    let c = std::f64::consts::PI.sqrt() / 2.0;
    assert!((rows[5] - c).abs() < 1e-15);
    assert!((rows[6] - c).abs() < 1e-15 && (rows[8] - c).abs() < 1e-15);
}

#[test]
fn non_integrable_derivative_is_nan() {
    let rows = demo::power_images(-0.5, 0.75, 4).unwrap();
    assert!(rows[8..].iter().all(|v| v.is_nan()));
}

#[test]
fn abel_recovers_known_solution() {
    let r = demo::abel(0.5, 1.5, 12, 65).unwrap();
    // x^{3/2} = I^{1/2} (3 sqrt(pi)/4) x
    let worst = r
        .psi
        .iter()
        .zip(&r.exact)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-5, "{worst}");
    assert!(r.residual < 1e-6);
    let report: serde_json::Value = serde_json::from_str(&r.report).unwrap();
    assert!(report["regime"].is_string());
}

#[test]
fn limits_are_enforced() {
    assert!(demo::abel(0.5, 1.0, 100, 10).is_err());
    assert!(demo::abel(0.5, 0.2, 8, 10).is_err());
    assert!(demo::basis_curves(0.0, 0.0, 3, 1).is_err());
    assert!(demo::classify(-1.0, 0.0, 4.0, 2.0).is_err());
}

#[test]
fn classify_reports_high_for_fast_decay() {
    let v: serde_json::Value =
        serde_json::from_str(&demo::classify(5.0, 0.0, 4.0, 2.0).unwrap()).unwrap();
    assert_eq!(v["regime"], "HIGH");
}
