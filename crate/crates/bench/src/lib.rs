//! Shared fixtures for the benchmarks.

use netboot::graph::{level, EdgeProbMatrix, SeedSpec};
use netboot::models::DcsbmParams;
use netboot::AdjacencyMatrix;

/// Three-block degree-corrected model with assortative blocks (5 on the
/// diagonal, 1 off it) and average expected degree `lambda`.
pub fn three_block(n: usize, lambda: f64) -> EdgeProbMatrix {
    let labels: Vec<usize> = (0..n).map(|i| 3 * i / n).collect();
    let b = vec![5.0, 1.0, 1.0, 1.0, 5.0, 1.0, 1.0, 1.0, 5.0];
    let theta: Vec<f64> = (0..n).map(|i| 0.6 + 0.8 * ((i * 37) % n) as f64 / n as f64).collect();
    let mean = theta.iter().sum::<f64>() / n as f64;
    let theta: Vec<f64> = theta.iter().map(|t| t / mean).collect();
    // Calibrate far below any clipping so the degree is linear in rho.
    let unit = DcsbmParams::new(labels.clone(), 3, b.clone(), theta.clone(), 1e-9).expect("valid parameters");
    let rho = 1e-9 * lambda / unit.materialize().expected_degree();
    DcsbmParams::new(labels, 3, b, theta, rho).expect("valid parameters").materialize()
}

/// One reproducible draw from `probs`.
pub fn observed(probs: &EdgeProbMatrix, seed: u64) -> AdjacencyMatrix {
    probs.sample(&mut SeedSpec::new(seed).stream(level::OBSERVED, 0))
}
