use proptest::prelude::*;
use scurve_core::calibration::LogisticFit;
use scurve_core::valuation::{annuity_factor, normalized_value, value_company, SoftNumbers};
use scurve_core::scenario::build_scenarios;
use scurve_core::{ElapsedSeries, LogisticParams};

fn fit(p: LogisticParams) -> LogisticFit {
    LogisticFit {
        params: p,
        error: 0.0,
        residual_sum: 0.0,
        k_fixed: false,
        converged: true,
    }
}

fn params() -> impl Strategy<Value = LogisticParams> {
    (1e3f64..1e10, 0.05f64..3.0, 1e-4f64..0.999).prop_map(|(k, r, frac)| LogisticParams::new(frac * k, r, k).unwrap())
}

proptest! {
    #[test]
    fn bounded_by_the_capacity_annuity(p in params(), from_t in 0.0f64..20.0, d in 0.005f64..0.3, h in 1u32..80) {
        let v = normalized_value(&fit(p), from_t, d, h).unwrap();
        prop_assert!(v <= p.k * annuity_factor(d, h) * (1.0 + 1e-12));
        prop_assert!(v > 0.0);
    }

    #[test]
    fn saturated_fit_equals_the_annuity(k in 1e3f64..1e10, from_t in 0.0f64..20.0, d in 0.005f64..0.3, h in 1u32..80) {
        let p = LogisticParams::new(k * (1.0 - 1e-14), 1.0, k).unwrap();
        let v = normalized_value(&fit(p), from_t, d, h).unwrap();
        let closed = k * (1.0 - (1.0 + d).powi(-(h as i32))) / d;
        prop_assert!((v / closed - 1.0).abs() < 1e-10, "{v} vs {closed}");
    }

    #[test]
    fn decreasing_in_discount_increasing_in_horizon(p in params(), d in 0.005f64..0.3, bump in 0.001f64..0.1, h in 1u32..80) {
        let f = fit(p);
        prop_assert!(normalized_value(&f, 3.0, d + bump, h).unwrap() < normalized_value(&f, 3.0, d, h).unwrap());
        prop_assert!(normalized_value(&f, 3.0, d, h + 1).unwrap() > normalized_value(&f, 3.0, d, h).unwrap());
    }
}

fn scenario_series() -> ElapsedSeries {
    let truth = LogisticParams::new(4.0e5, 1.25, 0.85e9).unwrap();
    let wiggle = [0.0, 0.08, -0.05, 0.04, -0.07, 0.02, 0.06, -0.04, 0.03, -0.02, 0.05, -0.03, 0.01, -0.01, 0.02];
    let pts = wiggle
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let t = 0.8 + 0.45 * i as f64;
            (t, truth.eval(t) * (1.0 + w))
        })
        .collect();
    ElapsedSeries::new("wiggle", pts).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn company_value_is_linear_in_profit_per_user(margin in 0.0f64..1.0, rev in 0.01f64..500.0, c in 0.1f64..10.0) {
        let set = build_scenarios(&scenario_series()).unwrap();
        let from_t = set.last_t;
        let a = value_company(&set, from_t, &SoftNumbers::new(0.05, margin, rev, 50).unwrap()).unwrap();
        let b = value_company(&set, from_t, &SoftNumbers::new(0.05, margin, rev * c, 50).unwrap()).unwrap();
        for ((_, va), (_, vb)) in a.per_scenario.iter().zip(b.per_scenario.iter()) {
            prop_assert!((vb - c * va).abs() <= 1e-12 * (c * va).abs().max(1e-300));
        }
        prop_assert!(a.per_scenario.base <= a.per_scenario.high && a.per_scenario.high <= a.per_scenario.extreme);
    }
}

#[test]
fn zero_margin_is_worth_nothing() {
    let set = build_scenarios(&scenario_series()).unwrap();
    let v = value_company(&set, set.last_t, &SoftNumbers::new(0.05, 0.0, 3.5, 50).unwrap()).unwrap();
    assert_eq!((v.per_scenario.base, v.per_scenario.high, v.per_scenario.extreme), (0.0, 0.0, 0.0));
}
