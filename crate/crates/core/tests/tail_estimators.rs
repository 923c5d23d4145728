use proptest::prelude::*;

use tpareto::tailfit::{
    endpoint_truncated, log_quantile_relative_form, moment_endpoint, moment_fit, moment_quantile,
    quantile_extrapolation_form, quantile_truncated, weissman_quantile, MomentEndpointKind,
};
use tpareto::{Endpoint, OddsChoice, Sample, SolverConfig, TailDistribution, TailModel, TrimSpec};

fn model(anchor: f64, alpha: f64, d: f64, k: usize, n: usize, max: f64) -> TailModel {
    TailModel::new(alpha, d, anchor, max, TrimSpec::new(1, k, n).unwrap(), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn three_quantile_forms_agree(
        anchor in 0.1f64..100.0,
        alpha in 0.2f64..8.0,
        d in 1e-4f64..5.0,
        k in 11usize..900,
        p in 1e-5f64..0.5,
    ) {
        let m = model(anchor, alpha, d, k, 1000, anchor);
        let q = quantile_truncated(&m, p).unwrap();
        let rel = log_quantile_relative_form(&m, p).unwrap().exp();
        let ext = quantile_extrapolation_form(&m, p).unwrap();
        prop_assert!((q - rel).abs() <= 1e-12 * q);
        prop_assert!((q - ext).abs() <= 1e-12 * q);
    }

    #[test]
    fn quantile_decreases_in_p(anchor in 0.1f64..100.0, alpha in 0.2f64..8.0, d in 0.0f64..2.0, p in 1e-5f64..0.4) {
        let m = model(anchor, alpha, d, 100, 1000, anchor);
        let p2 = p * 1.5;
        prop_assert!(quantile_truncated(&m, p2).unwrap() < quantile_truncated(&m, p).unwrap());
    }

    #[test]
    fn endpoint_relation_without_clamp(anchor in 0.1f64..100.0, alpha in 0.2f64..8.0, d in 1e-4f64..2.0, p in 1e-5f64..0.5) {
        let m = model(anchor, alpha, d, 200, 1000, anchor);
        let Endpoint::Finite { value, clamped, .. } = endpoint_truncated(&m).unwrap() else {
            panic!("finite endpoint expected");
        };
        prop_assert!(!clamped);
        let q = quantile_truncated(&m, p).unwrap();
        let via_end = value * (1.0 + p / d).powf(-1.0 / alpha);
        prop_assert!((q - via_end).abs() <= 1e-12 * q);
    }

    #[test]
    fn endpoint_never_below_maximum(seed in 0u64..500, k in 20usize..480) {
        let s = TailDistribution::truncated_pareto(1.0, 50.0).unwrap().sample(500, seed).unwrap();
        let t = TrimSpec::new(1, k, 500).unwrap();
        if let Ok((m, _)) = TailModel::fit(&s, t, &SolverConfig::default(), OddsChoice::Admissible) {
            prop_assert!(m.d_hat >= 0.0);
            let e = endpoint_truncated(&m).unwrap();
            prop_assert!(e.value() >= s.max());
        }
        if let Ok(mf) = moment_fit(&s, k) {
            if let Ok(me) = moment_endpoint(&mf, s.anchor(k), s.max()) {
                prop_assert!(me.value >= s.max());
            }
        }
    }
}

#[test]
fn zero_odds_reduce_to_power_extrapolation() {
    let m = model(2.0, 1.5, 0.0, 100, 1000, 9.0);
    let q = quantile_truncated(&m, 0.001).unwrap();
    let weissman_form = weissman_quantile(2.0, 1.0 / 1.5, 100, 1000, 0.001).unwrap();
    assert!((q - weissman_form).abs() < 1e-12 * q);
    assert_eq!(endpoint_truncated(&m).unwrap(), Endpoint::Infinite);
    assert!(log_quantile_relative_form(&m, 0.001).is_err());
}

#[test]
fn moment_index_on_pareto_two() {
    let s = TailDistribution::pareto(2.0).unwrap().sample(5000, 17).unwrap();
    let mf = moment_fit(&s, 500).unwrap();
    assert!((mf.xi_mom - 0.5).abs() < 0.15, "{mf:?}");
    let me = moment_endpoint(&mf, s.anchor(500), s.max()).unwrap();
    assert_eq!(me.kind, MomentEndpointKind::UnboundedTail);
    assert_eq!(me.value, s.max());
}

#[test]
fn moment_index_on_truncated_data_is_negative() {
    let s = TailDistribution::truncated_pareto(2.0, std::f64::consts::SQRT_2).unwrap().sample(5000, 3).unwrap();
    let mf = moment_fit(&s, 1000).unwrap();
    assert!(mf.xi_mom < 0.0, "{mf:?}");
    let me = moment_endpoint(&mf, s.anchor(1000), s.max()).unwrap();
    assert!(me.value >= s.max());
    assert!((me.value - std::f64::consts::SQRT_2).abs() < 0.05, "{me:?}");
}

#[test]
fn estimators_scale_with_data() {
    let s = TailDistribution::truncated_burr(1.5, -1.0, 30.0).unwrap().sample(800, 5).unwrap();
    let cfg = SolverConfig::default();
    for c in [1e-3, 7.0, 1e6] {
        let sc = s.scaled(c).unwrap();
        for k in [50, 200, 600] {
            let t = TrimSpec::new(3, k, 800).unwrap();
            let (m, _) = TailModel::fit(&s, t, &cfg, OddsChoice::Admissible).unwrap();
            let (mc, _) = TailModel::fit(&sc, t, &cfg, OddsChoice::Admissible).unwrap();
            let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs();
            assert!(close(c * quantile_truncated(&m, 0.001).unwrap(), quantile_truncated(&mc, 0.001).unwrap()));
            assert!(close(c * endpoint_truncated(&m).unwrap().value(), endpoint_truncated(&mc).unwrap().value()));
            let h = tpareto::sample::trimmed_hill(&s, TrimSpec::new(1, k, 800).unwrap());
            assert!(close(
                c * weissman_quantile(s.anchor(k), h, k, 800, 0.001).unwrap(),
                weissman_quantile(sc.anchor(k), h, k, 800, 0.001).unwrap()
            ));
            let (mf, mfc) = (moment_fit(&s, k).unwrap(), moment_fit(&sc, k).unwrap());
            assert!((mf.xi_mom - mfc.xi_mom).abs() < 1e-10);
            assert!(close(
                c * moment_quantile(&mf, s.anchor(k), k, 800, 0.001).unwrap(),
                moment_quantile(&mfc, sc.anchor(k), k, 800, 0.001).unwrap()
            ));
        }
    }
}

#[test]
fn raw_odds_may_be_negative_but_admissible_never() {
    let s = TailDistribution::pareto(1.0).unwrap().sample(2000, 8).unwrap();
    let cfg = SolverConfig::default();
    let mut negative = 0;
    for k in (20..1990).step_by(10) {
        let t = TrimSpec::new(1, k, 2000).unwrap();
        if let Ok((m, _)) = TailModel::fit(&s, t, &cfg, OddsChoice::Admissible) {
            assert!(m.d_hat >= 0.0);
            assert_eq!(m.odds.d_hat_admissible, m.odds.d_hat.max(0.0));
            if m.odds.d_hat < 0.0 {
                negative += 1;
            }
        }
    }
    assert!(negative > 0, "an untruncated sample should give some negative raw odds");
}

#[test]
fn fixture_from_paper_scale() {
    // TPa(2, 3.1623) has odds 1/9; at k = 3n/4 the quantile is close to the truth.
    let d = TailDistribution::truncated_pareto(2.0, 3.1623).unwrap();
    let truth = d.quantile(1.0 - 0.001).unwrap();
    let s: Sample = d.sample(20_000, 1).unwrap();
    let t = TrimSpec::new(1, 15_000, 20_000).unwrap();
    let (m, _) = TailModel::fit(&s, t, &SolverConfig::default(), OddsChoice::Admissible).unwrap();
    let q = quantile_truncated(&m, 0.001).unwrap();
    assert!((q - truth).abs() < 0.05, "{q} vs {truth}");
}
