mod common;

use std::sync::Arc;

use netboot::bootstrap::{
    bonferroni_level, bootstrap_distribution, build_ci, empirical_quantile, estimate_mu, normal_quantile,
    simultaneous_cis, two_level, CiInputs, CiKind, MuMethod, TwoLevelConfig,
};
use netboot::graph::{level, EdgeProbMatrix, SeedSpec};
use netboot::models::estimate_chung_lu;
use netboot::netstats::triangle_count_variance;
use netboot::{Estimator, Model, StatisticSpec};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn normal_quantile_inverts_quadrature_cdf() {
    for k in 0..1000 {
        let u = (k as f64 + 0.5) / 1000.0;
        let x = normal_quantile(u).unwrap();
        assert!((common::normal_cdf(x) - u).abs() < 1e-8, "u = {u}");
    }
    assert_eq!(normal_quantile(0.5).unwrap(), 0.0);
    assert!((normal_quantile(0.975).unwrap() - 1.959964).abs() < 1e-6);
}

#[test]
fn uniform_quantiles_converge() {
    let mut rng = SeedSpec::new(31).stream(level::OBSERVED, 0);
    let values: Vec<f64> = (0..100_000).map(|_| rng.random::<f64>()).collect();
    for q in [0.01, 0.1, 0.25, 0.5, 0.9, 0.975] {
        assert!((empirical_quantile(&values, q).unwrap() - q).abs() < 0.01);
    }
}

#[test]
fn triangle_moments_through_bootstrap_distribution() {
    let model = Model::from_matrix(EdgeProbMatrix::erdos_renyi(60, 0.2).unwrap());
    let dist = bootstrap_distribution(&model, &StatisticSpec::triangles(), 20_000, SeedSpec::new(32)).unwrap();
    assert_eq!(dist.len(), 20_000);
    assert_eq!(dist.dropped_count, 0);
    let var = triangle_count_variance(model.probs());
    assert!((dist.mean - 273.76).abs() <= 4.0 * var.sqrt() / (20_000f64).sqrt(), "mean {}", dist.mean);
    assert!((dist.variance - var).abs() <= 0.05 * var, "variance {} vs {var}", dist.variance);
}

#[test]
fn monte_carlo_transitivity_is_self_consistent() {
    let model = Model::from_matrix(EdgeProbMatrix::erdos_renyi(100, 0.1).unwrap());
    let stat = StatisticSpec::Transitivity;
    let small = estimate_mu(&model, &stat, MuMethod::MonteCarlo { samples: 5000 }, SeedSpec::new(33)).unwrap();
    let large = estimate_mu(&model, &stat, MuMethod::MonteCarlo { samples: 50_000 }, SeedSpec::new(34)).unwrap();
    assert!(small.mc_standard_error > 0.0);
    assert!((small.value - large.value).abs() <= 4.0 * small.mc_standard_error);
    assert!(estimate_mu(&model, &stat, MuMethod::Analytic, SeedSpec::new(0)).is_err());
}

#[test]
fn variance_transfers_to_the_fitted_model() {
    let n = 200;
    let p = 8.0 * (n as f64).ln() / n as f64;
    let probs = EdgeProbMatrix::erdos_renyi(n, p).unwrap();
    let truth = triangle_count_variance(&probs);
    let seed = SeedSpec::new(35);
    let close = (0..100)
        .filter(|&r| {
            let a = probs.sample(&mut seed.stream(level::OBSERVED, r));
            let fitted = estimate_chung_lu(&a, None).unwrap().materialize();
            ((triangle_count_variance(&fitted) - truth) / truth).abs() < 0.25
        })
        .count();
    assert!(close >= 90, "{close} of 100");
}

#[test]
fn two_level_is_thread_independent() {
    let a = common::random_graph(80, 0.15, 36, 0);
    let est = Estimator::ChungLu { p: None };
    let cfg = TwoLevelConfig { b1: 40, b2: 30, analytic: true };
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let stats = [StatisticSpec::triangles(), StatisticSpec::Transitivity];
            stats
                .iter()
                .map(|s| serde_json::to_string(&two_level(&a, &est, s, cfg, SeedSpec::new(37)).unwrap()).unwrap())
                .collect::<Vec<_>>()
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn bonferroni_intervals_widen() {
    let a = common::random_graph(60, 0.2, 38, 0);
    let r = two_level(
        &a,
        &Estimator::ChungLu { p: None },
        &StatisticSpec::triangles(),
        TwoLevelConfig { b1: 200, b2: 200, analytic: true },
        SeedSpec::new(39),
    )
    .unwrap();
    let inputs = CiInputs::from_two_level(&r);
    for kind in CiKind::ALL {
        let single = build_ci(kind, 0.95, &inputs).unwrap();
        let alone = simultaneous_cis(&[(kind, inputs)], 0.95).unwrap();
        assert_eq!(alone[0], single);
        let family: Vec<(CiKind, CiInputs)> = vec![(kind, inputs); 37];
        let wide = simultaneous_cis(&family, 0.95).unwrap();
        assert_eq!(wide[0].alpha, 1.0 - 0.05 / 37.0);
        assert_eq!(wide[0].alpha, bonferroni_level(0.95, 37));
        assert!(wide[0].lower <= single.lower && wide[0].upper >= single.upper, "{kind}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn corrected_and_naive_widths_agree(seed in any::<u64>(), n in 25usize..50, p in 0.1f64..0.4, which in 0usize..3) {
        let a = common::random_graph(n, p, seed, 0);
        let stat = [StatisticSpec::triangles(), StatisticSpec::AverageDegree, StatisticSpec::rooted_triangles(0)][which].clone();
        let r = two_level(&a, &Estimator::ChungLu { p: None }, &stat, TwoLevelConfig { b1: 40, b2: 20, analytic: true }, SeedSpec::new(seed));
        if let Ok(r) = r {
            let inputs = CiInputs::from_two_level(&r);
            let tol = 1e-12 * (1.0 + r.mu_hat.value.abs() + r.second_level_mean.abs());
            for (naive, corrected) in [(CiKind::MuNaiveSym, CiKind::MuCorrectedSym), (CiKind::MuNaiveAsym, CiKind::MuCorrectedAsym)] {
                let (x, y) = (build_ci(naive, 0.9, &inputs).unwrap(), build_ci(corrected, 0.9, &inputs).unwrap());
                prop_assert!((x.width() - y.width()).abs() <= tol);
                prop_assert!(x.lower <= x.upper && y.lower <= y.upper);
            }
            prop_assert!((r.bias_hat - (r.second_level_mean - r.mu_hat.value)).abs() <= 1e-12 * (1.0 + r.mu_hat.value.abs()));
            prop_assert!((r.corrected_estimate - (2.0 * r.mu_hat.value - r.second_level_mean)).abs() <= 1e-12 * (1.0 + r.mu_hat.value.abs()));
            prop_assert_eq!(r.first_level.len() + r.first_level.dropped_count, 40);
        }
    }
}

#[test]
fn oracle_two_level_has_no_bias() {
    let truth = Arc::new(Model::from_matrix(EdgeProbMatrix::erdos_renyi(40, 0.2).unwrap()));
    let a = truth.sample(&mut SeedSpec::new(40).stream(level::OBSERVED, 0));
    let r = two_level(
        &a,
        &Estimator::oracle(Arc::clone(&truth)),
        &StatisticSpec::triangles(),
        TwoLevelConfig { b1: 50, b2: 50, analytic: true },
        SeedSpec::new(41),
    )
    .unwrap();
    assert_eq!(r.bias_hat, 0.0);
    assert!((r.mu_hat.value - 9880.0 * 0.008).abs() < 1e-9);
}
