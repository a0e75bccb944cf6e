mod common;

use std::path::PathBuf;

use netboot::bootstrap::{CiKind, TwoLevelConfig};
use netboot::experiment::{
    build_simulation_model, report_dataset, report_dataset_file, run_coverage_experiment, ReportOptions,
    SimulationConfig, TargetDegree, ThetaLaw,
};
use netboot::graph::{read_edge_list, read_edge_list_file, write_labeled_edge_list, SeedSpec};
use netboot::models::LabelSource;
use netboot::netstats::{degree_assortativity, transitivity, triangle_count};
use netboot::{Estimator, StatisticSpec};

fn karate_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/karate.txt")
}

#[test]
fn karate_goldens() {
    let (a, labels) = read_edge_list_file(karate_path()).unwrap();
    assert_eq!((a.n(), a.edge_count()), (34, 78));
    assert_eq!(triangle_count(&a), 45);
    assert!((transitivity(&a).unwrap() - 0.2556818181818182).abs() < 1e-15);
    assert!((degree_assortativity(&a).unwrap() - -0.47561309768461413).abs() < 1e-12);
    let density = StatisticSpec::TriangleDensity.evaluate(&a).unwrap();
    assert!((density - 45.0 / 5984.0).abs() < 1e-15);
    let text = write_labeled_edge_list(&a, &labels);
    // Indices follow first appearance, so compare edges by label.
    let (back, back_labels) = read_edge_list(&text).unwrap();
    let by_label = |g: &netboot::AdjacencyMatrix, l: &netboot::NodeLabels| {
        let mut e: Vec<(String, String)> = g
            .edges()
            .map(|(i, j)| {
                let (x, y) = (l.label(i).to_string(), l.label(j).to_string());
                if x < y { (x, y) } else { (y, x) }
            })
            .collect();
        e.sort();
        e
    };
    assert_eq!(back.n(), a.n());
    assert_eq!(by_label(&back, &back_labels), by_label(&a, &labels));
}

#[test]
fn karate_report() {
    let stats: Vec<StatisticSpec> =
        ["transitivity", "triangle_density", "assortativity", "average_degree", "betweenness:0", "diameter"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
    let options = ReportOptions {
        two_level: TwoLevelConfig { b1: 100, b2: 40, analytic: true },
        seed: SeedSpec::new(50),
        ..ReportOptions::default()
    };
    let est = Estimator::Dcsbm { labels: LabelSource::Spectral { k: 2, tau: None } };
    let report = report_dataset_file(&karate_path(), &est, &stats, &options).unwrap();
    assert_eq!(report.alpha_per_test, 1.0 - 0.05 / 6.0);
    assert_eq!(report.rows.len() + report.failures.len(), 6);
    for row in &report.rows {
        assert!(row.lower <= row.upper);
        let outside = row.observed > row.upper || row.observed < row.lower;
        assert_eq!(row.flag.is_some(), outside, "{}", row.statistic);
    }
    let csv = report.to_csv();
    assert_eq!(csv.lines().count(), report.rows.len() + 1);
    let again = report_dataset_file(&karate_path(), &est, &stats, &options).unwrap();
    assert_eq!(report.to_json().unwrap(), again.to_json().unwrap());

    let (a, _) = read_edge_list_file(karate_path()).unwrap();
    let empty = report_dataset("karate", &a, &est, &[], &options).unwrap();
    assert!(empty.rows.is_empty() && empty.failures.is_empty());
}

#[test]
fn block_model_hits_target_degree() {
    let mut cfg = SimulationConfig::desk_scale(vec![StatisticSpec::Transitivity]);
    cfg.n = 600;
    let sim = build_simulation_model(&cfg).unwrap();
    let target = 2.0 * 600f64.ln();
    assert!((sim.model.probs().expected_degree() - target).abs() < 1e-9);
    let mean_theta = sim.params.theta.iter().sum::<f64>() / 600.0;
    assert!((mean_theta - 1.0).abs() < 1e-12);
    assert!(!sim.clip_warning);

    cfg.theta_law = ThetaLaw::Pareto { alpha: 4.0 };
    cfg.target_lambda = TargetDegree::Value(12.0);
    let sim = build_simulation_model(&cfg).unwrap();
    let mean_theta = sim.params.theta.iter().sum::<f64>() / 600.0;
    assert!((mean_theta - 1.0).abs() < 1e-12);
    if sim.clip_count == 0 {
        assert!((sim.model.probs().expected_degree() - 12.0).abs() < 1e-9);
    }
}

fn small_study(statistics: Vec<StatisticSpec>) -> SimulationConfig {
    let mut cfg = SimulationConfig::desk_scale(statistics);
    cfg.n = 90;
    cfg.b1 = 40;
    cfg.b2 = 20;
    cfg.outer_repetitions = 5;
    cfg.truth_samples = 2000;
    cfg.root_seed = 51;
    cfg
}

#[test]
fn coverage_experiment_is_reproducible() {
    let cfg = small_study(vec![StatisticSpec::triangles(), StatisticSpec::Transitivity]);
    let first = run_coverage_experiment(&cfg).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let second = pool.install(|| run_coverage_experiment(&cfg).unwrap());
    assert_eq!(first.to_json().unwrap(), second.to_json().unwrap());
    for row in &first.rows {
        assert!((0.0..=1.0).contains(&row.coverage));
        assert!(row.mean_width >= 0.0);
    }
    let table = first.to_table_csv(0.95);
    assert_eq!(table.lines().count(), 1 + 2 * 2);
    let mut other = cfg.clone();
    other.root_seed = 52;
    assert_ne!(run_coverage_experiment(&other).unwrap().to_json().unwrap(), first.to_json().unwrap());
}

#[test]
fn config_json_defaults() {
    let text = r#"{
        "n": 60, "k": 3, "block_matrix": [5, 1, 1, 1, 5, 1, 1, 1, 5],
        "target_lambda": {"log_n_multiple": 2}, "root_seed": 7,
        "b1": 30, "b2": 30, "outer_repetitions": 3,
        "estimator": {"method": "sbm", "labels": {"spectral": {"k": 3, "tau": null}}},
        "statistics": ["average_degree", "count:triangle"]
    }"#;
    let cfg: SimulationConfig = serde_json::from_str(text).unwrap();
    assert_eq!(cfg.alphas, vec![0.95]);
    assert_eq!(cfg.ci_kinds, CiKind::ALL.to_vec());
    assert_eq!(cfg.theta_law, ThetaLaw::Uniform { low: 0.2, high: 1.0 });
    cfg.validate().unwrap();
    let back: SimulationConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
    assert_eq!(back, cfg);
}

/// Desk-scale average degree: every kind covers between 85% and 100%.
#[test]
fn desk_scale_average_degree_coverage() {
    let cfg = SimulationConfig::desk_scale(vec![StatisticSpec::AverageDegree]);
    let report = run_coverage_experiment(&cfg).unwrap();
    for kind in CiKind::ALL {
        let row = report.row(&StatisticSpec::AverageDegree, kind, 0.95).unwrap();
        assert!((0.85..=1.0).contains(&row.coverage), "{kind}: {}", row.coverage);
    }
}
