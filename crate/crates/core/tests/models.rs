mod common;

use netboot::graph::{level, AdjacencyMatrix, EdgeProbMatrix, SeedSpec};
use netboot::models::eigen::{dense_top_k, lanczos_top_k};
use netboot::models::{
    estimate_chung_lu, estimate_dcsbm, estimate_sbm, estimate_spectral, spectral_cluster, ChungLuParams, DcsbmParams,
    DENSE_EIGEN_LIMIT,
};
use netboot::Model;

const ASSORTATIVE_B: [f64; 9] = [5.0, 1.0, 1.0, 1.0, 5.0, 1.0, 1.0, 1.0, 5.0];

fn thirds(n: usize) -> Vec<usize> {
    (0..n).map(|i| 3 * i / n).collect()
}

/// Three-block model with `theta = 1` scaled to average expected degree `lambda`.
fn three_block(n: usize, lambda: f64, theta: Vec<f64>) -> DcsbmParams {
    // Calibrate far below any clipping so the degree is linear in rho.
    let unit = DcsbmParams::new(thirds(n), 3, ASSORTATIVE_B.to_vec(), theta.clone(), 1e-9).unwrap();
    let rho = 1e-9 * lambda / unit.materialize().expected_degree();
    DcsbmParams::new(thirds(n), 3, ASSORTATIVE_B.to_vec(), theta, rho).unwrap()
}

#[test]
fn chung_lu_theta_is_unbiased() {
    let (n, p, reps) = (400, 0.1, 1000);
    let probs = EdgeProbMatrix::erdos_renyi(n, p).unwrap();
    let seed = SeedSpec::new(21);
    let nodes = [0, 137, 399];
    let mut sums = [0.0; 3];
    for r in 0..reps {
        let a = probs.sample(&mut seed.stream(level::OBSERVED, r));
        let fit = estimate_chung_lu(&a, Some(p)).unwrap();
        for (s, &i) in sums.iter_mut().zip(&nodes) {
            *s += fit.theta[i];
        }
    }
    let se = ((1.0 - p) / ((n - 1) as f64 * p)).sqrt() / (reps as f64).sqrt();
    for (s, i) in sums.iter().zip(nodes) {
        let mean = s / reps as f64;
        assert!((mean - 1.0).abs() <= 3.0 * se, "node {i}: {mean}");
    }
}

#[test]
fn chung_lu_theta_covariance_is_small() {
    let n = 200;
    let theta: Vec<f64> = (0..n).map(|i| 0.5 + i as f64 / (n - 1) as f64).collect();
    let truth = ChungLuParams::new(0.1, theta).unwrap();
    assert!(truth.is_normalized());
    let probs = truth.materialize();
    let reps = 2000;
    let seed = SeedSpec::new(22);
    let fits: Vec<Vec<f64>> = (0..reps)
        .map(|r| estimate_chung_lu(&probs.sample(&mut seed.stream(level::OBSERVED, r)), Some(0.1)).unwrap().theta)
        .collect();
    let column_var = |i: usize| common::mean_sd(&fits.iter().map(|f| f[i]).collect::<Vec<_>>()).1.powi(2);
    let var_sum: f64 = (0..n).map(column_var).sum();
    let totals: Vec<f64> = fits.iter().map(|f| f.iter().sum()).collect();
    let total_var = common::mean_sd(&totals).1.powi(2);
    let mean_cov = (total_var - var_sum) / (n * (n - 1)) as f64;
    let mean_var = var_sum / n as f64;
    assert!(mean_cov.abs() < mean_var / (0.5 * n as f64), "cov {mean_cov}, var {mean_var}");
    // Unbiasedness with heterogeneous theta.
    for i in [0, 100, 199] {
        let values: Vec<f64> = fits.iter().map(|f| f[i]).collect();
        let (mean, sd) = common::mean_sd(&values);
        assert!((mean - truth.theta[i]).abs() <= 3.0 * sd / (reps as f64).sqrt(), "node {i}");
    }
}

#[test]
fn dcsbm_error_shrinks_with_degree() {
    let n = 300;
    let log_n = (n as f64).ln();
    let theta: Vec<f64> = (0..n).map(|i| 0.6 + 0.8 * ((i * 37) % n) as f64 / n as f64).collect();
    let mean_theta = theta.iter().sum::<f64>() / n as f64;
    let theta: Vec<f64> = theta.iter().map(|t| t / mean_theta).collect();
    let errors: Vec<f64> = [2.0, 8.0]
        .iter()
        .map(|m| {
            let truth = three_block(n, m * log_n, theta.clone()).materialize();
            let seed = SeedSpec::new(23);
            (0..20)
                .map(|r| {
                    let a = truth.sample(&mut seed.stream(level::OBSERVED, r));
                    let fit = estimate_dcsbm(&a, &thirds(n), 3).unwrap().materialize();
                    fit.frobenius_distance(&truth) / truth.frobenius_norm()
                })
                .sum::<f64>()
                / 20.0
        })
        .collect();
    assert!(errors[1] < errors[0], "{errors:?}");
}

#[test]
fn sbm_block_estimates_are_unbiased() {
    let n = 300;
    let truth = three_block(n, 8.0 * (n as f64).ln(), vec![1.0; n]);
    let probs = truth.materialize();
    let seed = SeedSpec::new(24);
    let reps = 500;
    let fits: Vec<Vec<f64>> = (0..reps)
        .map(|r| estimate_sbm(&probs.sample(&mut seed.stream(level::OBSERVED, r)), &thirds(n), 3).unwrap().b)
        .collect();
    for e in 0..9 {
        let values: Vec<f64> = fits.iter().map(|b| b[e]).collect();
        let (mean, sd) = common::mean_sd(&values);
        let target = truth.rho * ASSORTATIVE_B[e];
        assert!((mean - target).abs() <= 3.0 * sd / (reps as f64).sqrt(), "entry {e}: {mean} vs {target}");
    }
}

fn misclassification(labels: &[usize], truth: &[usize]) -> f64 {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    perms
        .iter()
        .map(|perm| labels.iter().zip(truth).filter(|&(&l, &t)| perm[l] != t).count())
        .min()
        .unwrap() as f64
        / truth.len() as f64
}

#[test]
fn spectral_clustering_recovers_blocks() {
    let n = 300;
    let probs = three_block(n, 8.0 * (n as f64).ln(), vec![1.0; n]).materialize();
    let truth = thirds(n);
    let seed = SeedSpec::new(25);
    let good = (0..100)
        .filter(|&r| {
            let a = probs.sample(&mut seed.stream(level::OBSERVED, r));
            let labels = spectral_cluster(&a, 3, None, seed.child(level::FIT, r)).unwrap();
            misclassification(&labels, &truth) < 0.02
        })
        .count();
    assert!(good >= 95, "{good} of 100");
}

fn dense(a: &AdjacencyMatrix) -> Vec<f64> {
    let n = a.n();
    let mut m = vec![0.0; n * n];
    for (i, j) in a.edges() {
        m[i * n + j] = 1.0;
        m[j * n + i] = 1.0;
    }
    m
}

#[test]
fn spectral_truncation_is_optimal() {
    let n = 12;
    for g in 0..20 {
        let a = common::random_graph(n, 0.4, 26, g);
        let est = estimate_spectral(&a, 3).unwrap();
        let all = dense_top_k(n, &dense(&a), n);
        for c in 0..3 {
            assert!((est.eigenvalues[c] - all.values[c]).abs() < 1e-8);
            let (u, v) = (est.eigenvectors.chunks(3).map(|r| r[c]).collect::<Vec<_>>(), all.column(c));
            let dot: f64 = u.iter().zip(&v).map(|(x, y)| x * y).sum();
            assert!((dot.abs() - 1.0).abs() < 1e-8);
        }
        // Squared error of keeping a subset is the sum of the dropped squared eigenvalues.
        let fro = |keep: &[usize]| -> f64 {
            let m = dense(&a);
            let mut err = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let approx: f64 = keep.iter().map(|&c| all.values[c] * all.vector_entry(i, c) * all.vector_entry(j, c)).sum();
                    err += (m[i * n + j] - approx).powi(2);
                }
            }
            err
        };
        let top = fro(&[0, 1, 2]);
        let raw: f64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (dense(&a)[i * n + j] - est.raw_entry(i, j)).powi(2))
            .sum();
        assert!((raw - top).abs() < 1e-8);
        for x in 0..n {
            for y in (x + 1)..n {
                for z in (y + 1)..n {
                    assert!(top <= fro(&[x, y, z]) + 1e-9);
                }
            }
        }
    }
}

#[test]
fn two_disjoint_edges_rank_one() {
    let a = AdjacencyMatrix::from_edges(4, [(0, 1), (2, 3)]);
    let est = estimate_spectral(&a, 1).unwrap();
    assert!((est.eigenvalues[0] - 1.0).abs() < 1e-12);
    let v: Vec<f64> = est.eigenvectors.clone();
    // v lies in the eigenspace of 1: v_0 = v_1 and v_2 = v_3.
    assert!((v[0] - v[1]).abs() < 1e-12 && (v[2] - v[3]).abs() < 1e-12);
    let p = est.materialize();
    assert!((p.get(0, 1) - v[0] * v[1]).abs() < 1e-12);
    assert!((p.get(0, 1) + p.get(2, 3) - 0.5).abs() < 1e-12);
}

#[test]
fn iterative_path_matches_dense_above_limit() {
    let n = DENSE_EIGEN_LIMIT + 88;
    let a = common::random_graph(n, 0.02, 27, 0);
    let est = estimate_spectral(&a, 3).unwrap();
    let oracle = dense_top_k(n, &dense(&a), 3);
    for c in 0..3 {
        assert!((est.eigenvalues[c] - oracle.values[c]).abs() < 1e-8);
    }
    let m = dense(&a);
    let small = lanczos_top_k(n, 2, |x, y| {
        for i in 0..n {
            y[i] = m[i * n..(i + 1) * n].iter().zip(x).map(|(p, q)| p * q).sum();
        }
    })
    .unwrap();
    assert!((small.values[0] - oracle.values[0]).abs() < 1e-8);
}

#[test]
fn model_json_round_trips() {
    let a = common::random_graph(30, 0.3, 28, 0);
    let models = [
        Model::chung_lu(estimate_chung_lu(&a, None).unwrap()),
        Model::dcsbm(estimate_dcsbm(&a, &thirds(30), 3).unwrap()),
        Model::spectral(estimate_spectral(&a, 2).unwrap()),
    ];
    for m in &models {
        let back = Model::from_json(&m.to_json().unwrap()).unwrap();
        assert_eq!(&back, m);
        assert_eq!(back.probs(), m.probs());
    }
}
