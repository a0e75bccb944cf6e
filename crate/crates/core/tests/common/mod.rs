//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use netboot::graph::{level, AdjacencyMatrix, SeedSpec};
use rand::Rng;

/// Standard normal CDF by composite Simpson quadrature of the density.
pub fn normal_cdf(x: f64) -> f64 {
    if x.abs() > 9.0 {
        return if x > 0.0 { 1.0 } else { 0.0 };
    }
    let density = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let steps = ((x.abs() / 5e-4).ceil() as usize).max(2);
    let steps = steps + steps % 2;
    let h = x / steps as f64;
    let mut s = density(0.0) + density(x);
    for k in 1..steps {
        s += density(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    0.5 + s * h / 3.0
}

/// Kolmogorov-Smirnov distance of a sample to the standard normal.
pub fn ks_to_normal(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = normal_cdf(x);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

pub fn standardize(values: &[f64], mean: f64, sd: f64) -> Vec<f64> {
    values.iter().map(|v| (v - mean) / sd).collect()
}

pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Erdos-Renyi graph from a test stream.
pub fn random_graph(n: usize, p: f64, seed: u64, index: u64) -> AdjacencyMatrix {
    let mut rng = SeedSpec::new(seed).stream(level::OBSERVED, index);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    AdjacencyMatrix::from_edges(n, edges)
}

fn permutations(v: usize) -> Vec<Vec<usize>> {
    if v == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(v - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, v - 1);
            out.push(q);
        }
    }
    out
}

/// Copies of the pattern (`v` nodes, `pattern` edges) among edge subsets of
/// `a`: a subset counts when it touches exactly `v` nodes and some bijection
/// maps the pattern's edge set onto it. With `root = Some((r, i))` the
/// bijection must send pattern node `r` to graph node `i`.
pub fn count_by_edge_subsets(a: &AdjacencyMatrix, v: usize, pattern: &[(usize, usize)], root: Option<(usize, usize)>) -> u64 {
    let edges: Vec<(usize, usize)> = a.edges().collect();
    let e = pattern.len();
    let perms = permutations(v);
    let mut count = 0;
    let mut chosen = Vec::with_capacity(e);
    fn rec(
        start: usize,
        edges: &[(usize, usize)],
        e: usize,
        chosen: &mut Vec<(usize, usize)>,
        visit: &mut dyn FnMut(&[(usize, usize)]),
    ) {
        if chosen.len() == e {
            visit(chosen);
            return;
        }
        for k in start..edges.len() {
            chosen.push(edges[k]);
            rec(k + 1, edges, e, chosen, visit);
            chosen.pop();
        }
    }
    let mut visit = |subset: &[(usize, usize)]| {
        let mut nodes: Vec<usize> = subset.iter().flat_map(|&(x, y)| [x, y]).collect();
        nodes.sort_unstable();
        nodes.dedup();
        if nodes.len() != v {
            return;
        }
        let mut target: Vec<(usize, usize)> = subset.to_vec();
        target.sort_unstable();
        let found = perms.iter().any(|perm| {
            if let Some((r, i)) = root {
                if nodes[perm[r]] != i {
                    return false;
                }
            }
            let mut mapped: Vec<(usize, usize)> = pattern
                .iter()
                .map(|&(x, y)| {
                    let (p, q) = (nodes[perm[x]], nodes[perm[y]]);
                    (p.min(q), p.max(q))
                })
                .collect();
            mapped.sort_unstable();
            mapped == target
        });
        if found {
            count += 1;
        }
    };
    rec(0, &edges, e, &mut chosen, &mut visit);
    count
}
