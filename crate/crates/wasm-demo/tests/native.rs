use hqfnn_demo::{circuit_stats_values, membership_curve_values, noise_curve_values};

#[test]
fn membership_curve_is_a_bounded_deterministic_curve() {
    let a = membership_curve_values(4, 7, 101).unwrap();
    assert_eq!(a.len(), 101);
    assert!(a.iter().all(|m| (0.0..=1.0).contains(m)));
    assert_eq!(a, membership_curve_values(4, 7, 101).unwrap());
    assert_ne!(a, membership_curve_values(4, 8, 101).unwrap());
    // endpoints are ±π, where every rotation angle differs by 2π: same state
    assert!((a[0] - a[100]).abs() < 1e-12);
}

#[test]
fn noise_curve_starts_at_one_and_decreases() {
    let f = noise_curve_values("dp", 2, 0, &[0.0, 0.05, 0.2]).unwrap();
    assert!((f[0] - 1.0).abs() < 1e-12);
    assert!(f[1] > f[2]);
}

#[test]
fn circuit_stats_layout() {
    let s = circuit_stats_values(1, 3, 20, 0).unwrap();
    assert_eq!(s.len(), 2 + 2 * 20);
    assert!(s[0] >= 0.0 && (0.0..=1.0).contains(&s[1]));
    assert!((s[2..22].iter().sum::<f64>() - 1.0).abs() < 1e-9);
    assert!((s[22..].iter().sum::<f64>() - 1.0).abs() < 1e-9);
}

#[test]
fn bad_inputs_are_reported() {
    assert!(membership_curve_values(0, 0, 10).is_err());
    assert!(noise_curve_values("XX", 2, 0, &[0.1]).is_err());
    assert!(noise_curve_values("AD", 2, 0, &[1.5]).is_err());
    assert!(circuit_stats_values(1, 2, 20, 0).is_err());
}
