//! The Monte Carlo oracle and the closed-form association probability agree
//! whenever both tiers share a path-loss exponent.

use irs_hetnet::{simulate_association, OracleConfig};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn equal_exponent_agreement(
        alpha in prop::sample::select(vec![2.5, 3.5, 4.5]),
        log_density in -1.3..0.3f64,
        log_power in -2.0..2.0f64,
        seed in any::<u64>(),
    ) {
        let mut lambda_mi = 1e-4;
        let build = |lambda_mi: f64| OracleConfig::equal_exponent(
            10f64.powf(log_density) * lambda_mi,
            lambda_mi,
            10f64.powf(log_power),
            1.0,
            alpha,
            500.0,
            40_000,
            seed,
        );
        let mut cfg = build(lambda_mi);
        while cfg.is_err() {
            lambda_mi *= 2.0;
            cfg = build(lambda_mi);
        }
        let cfg = cfg.unwrap();
        let est = simulate_association(&cfg).unwrap();
        let closed = cfg.closed_form().unwrap();
        prop_assert!((est.estimate - closed).abs() <= est.tolerance(0.01), "{:?} vs {}", est, closed);
    }
}

#[test]
fn unequal_exponents_run_but_differ() {
    let eq = OracleConfig::equal_exponent(2e-4, 1e-3, 5.0, 1.0, 4.5, 500.0, 20_000, 1).unwrap();
    let gap = OracleConfig {
        alpha_mi: 2.5,
        ..eq
    };
    gap.validate().unwrap();
    let a = simulate_association(&eq).unwrap();
    let b = simulate_association(&gap).unwrap();
    assert!(!gap.is_equal_exponent());
    assert_eq!(gap.closed_form().unwrap(), eq.closed_form().unwrap());
    assert!((a.estimate - b.estimate).abs() > 0.01);
}
