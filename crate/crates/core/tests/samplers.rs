use tpareto::rng;
use tpareto::TailDistribution;

fn families() -> Vec<TailDistribution> {
    vec![
        TailDistribution::pareto(2.0).unwrap(),
        TailDistribution::burr(2.0, -1.0).unwrap(),
        TailDistribution::truncated_pareto(2.0, 3.1623).unwrap(),
        TailDistribution::truncated_burr(2.0, -1.0, 3.0).unwrap(),
    ]
}

/// Two-sided Kolmogorov–Smirnov distance of sorted draws from `d`.
fn ks_distance(d: &TailDistribution, sorted: &[f64]) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = d.cdf(x).unwrap();
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

#[test]
fn kolmogorov_smirnov_all_families() {
    let n = 10_000;
    let bound = 1.63 / (n as f64).sqrt();
    for d in families() {
        for seed in [1, 2, 3, 4, 5] {
            let s = d.sample(n, seed).unwrap();
            let ks = ks_distance(&d, s.values());
            assert!(ks < bound, "{d:?} seed {seed}: KS {ks} >= {bound}");
        }
    }
}

#[test]
fn quantile_inverts_cdf_on_a_grid() {
    for d in families() {
        let lo = d.quantile(1e-6).unwrap();
        let hi = d.quantile(1.0 - 1e-6).unwrap();
        for i in 0..=200 {
            let x = lo + (hi - lo) * i as f64 / 200.0;
            let u = d.cdf(x).unwrap();
            if u <= 0.0 || u >= 1.0 {
                continue;
            }
            let back = d.quantile(u).unwrap();
            assert!((back - x).abs() / x < 1e-10, "{d:?}: x={x}, back={back}");
        }
    }
}

#[test]
fn cdf_inverts_quantile() {
    for d in families() {
        for i in 1..1000 {
            let u = i as f64 / 1000.0;
            let x = d.quantile(u).unwrap();
            assert!((d.cdf(x).unwrap() - u).abs() < 1e-12, "{d:?} at u={u}");
        }
    }
}

#[test]
fn empirical_quantile_of_pareto() {
    let s = TailDistribution::pareto(2.0).unwrap().sample(100_000, 77).unwrap();
    let q90 = s.values()[89_999];
    assert!((q90 - 10f64.sqrt()).abs() < 0.05, "{q90}");
}

#[test]
fn truncated_draws_bounded() {
    for d in families().into_iter().filter(|d| d.is_truncated()) {
        let t = d.upper().unwrap();
        for seed in 0..5 {
            assert!(d.sample(10_000, seed).unwrap().max() <= t);
        }
    }
}

#[test]
fn streams_are_independent_of_each_other() {
    let d = TailDistribution::pareto(1.0).unwrap();
    let a = d.draw(50, &mut rng::stream(9, 0)).unwrap();
    let b = d.draw(50, &mut rng::stream(9, 1)).unwrap();
    assert_ne!(a, b);
    assert_eq!(a, d.draw(50, &mut rng::stream(9, 0)).unwrap());
    assert_eq!(a, d.sample(50, 9).unwrap());
}

#[test]
fn burr_second_order_index() {
    let d = TailDistribution::burr(2.0, -0.5).unwrap();
    assert_eq!(d.rho_star(), Some(-1.0));
    let p = tpareto::asymptotics::AsymptoticParams::new(d.alpha(), d.rho_star().unwrap(), 0.0).unwrap();
    let beta = tpareto::asymptotics::case_c_constants(&p).unwrap().beta;
    assert!((beta - 1.0 / (2.0 * 1.5)).abs() < 1e-15);
}
