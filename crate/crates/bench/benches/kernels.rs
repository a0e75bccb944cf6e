use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use netboot::bootstrap::{two_level, TwoLevelConfig};
use netboot::graph::{level, SeedSpec};
use netboot::models::{estimate_chung_lu, estimate_spectral};
use netboot::netstats::{transitivity, triangle_count};
use netboot::{Estimator, StatisticSpec};
use netboot_bench::{observed, three_block};

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample");
    for n in [200, 600, 2000] {
        let probs = three_block(n, 2.0 * (n as f64).ln());
        let seed = SeedSpec::new(1);
        let mut b = 0;
        group.bench_with_input(BenchmarkId::from_parameter(n), &probs, |bench, probs| {
            bench.iter(|| {
                b += 1;
                black_box(probs.sample(&mut seed.stream(level::FIRST, b)))
            })
        });
    }
    group.finish();
}

fn statistics(c: &mut Criterion) {
    let mut group = c.benchmark_group("statistic");
    for n in [600, 2000] {
        let a = observed(&three_block(n, 8.0 * (n as f64).ln()), 2);
        group.bench_with_input(BenchmarkId::new("triangles", n), &a, |bench, a| bench.iter(|| triangle_count(a)));
        group.bench_with_input(BenchmarkId::new("transitivity", n), &a, |bench, a| bench.iter(|| transitivity(a)));
    }
    group.finish();
}

fn estimation(c: &mut Criterion) {
    let mut group = c.benchmark_group("estimate");
    group.sample_size(20);
    for n in [300, 1000] {
        let a = observed(&three_block(n, 2.0 * (n as f64).ln()), 3);
        group.bench_with_input(BenchmarkId::new("chung_lu", n), &a, |bench, a| {
            bench.iter(|| estimate_chung_lu(a, None).unwrap().materialize())
        });
        group.bench_with_input(BenchmarkId::new("svd3", n), &a, |bench, a| bench.iter(|| estimate_spectral(a, 3).unwrap()));
    }
    group.finish();
}

fn bootstrap(c: &mut Criterion) {
    let mut group = c.benchmark_group("two_level");
    group.sample_size(10);
    let a = observed(&three_block(300, 2.0 * 300f64.ln()), 4);
    let est = Estimator::ChungLu { p: None };
    let cfg = TwoLevelConfig { b1: 100, b2: 50, analytic: true };
    for stat in [StatisticSpec::triangles(), StatisticSpec::Transitivity] {
        group.bench_function(stat.to_string(), |bench| {
            bench.iter(|| two_level(&a, &est, &stat, cfg, SeedSpec::new(5)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sampling, statistics, estimation, bootstrap);
criterion_main!(benches);
