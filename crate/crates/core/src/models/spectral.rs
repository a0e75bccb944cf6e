use rand::Rng;
use serde::{Deserialize, Serialize};

use super::eigen::{dense_top_k, lanczos_top_k, EigenPairs};
use crate::error::{Error, Result};
use crate::graph::{level, AdjacencyMatrix, EdgeProbMatrix, SeedSpec};

/// Above this size the spectral estimate switches to the iterative solver.
pub const DENSE_EIGEN_LIMIT: usize = 512;
/// Above this size spectral clustering switches to the iterative solver.
pub const DENSE_CLUSTER_LIMIT: usize = 64;

const KMEANS_RESTARTS: u64 = 20;
const KMEANS_MAX_ITER: usize = 100;

/// Rank-`k` truncation `sum_c lambda_c v_c v_c^T` of the adjacency matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub k: usize,
    pub n: usize,
    pub eigenvalues: Vec<f64>,
    /// Row-major `n x k`, orthonormal columns.
    pub eigenvectors: Vec<f64>,
    /// Unordered pairs clipped into `[0, 1]` when materialized.
    pub clip_count: usize,
}

impl SpectralEstimate {
    /// Unclipped reconstruction at `(i, j)`.
    #[inline]
    pub fn raw_entry(&self, i: usize, j: usize) -> f64 {
        let k = self.k;
        let (vi, vj) = (&self.eigenvectors[i * k..(i + 1) * k], &self.eigenvectors[j * k..(j + 1) * k]);
        (0..k).map(|c| self.eigenvalues[c] * vi[c] * vj[c]).sum()
    }

    pub fn materialize(&self) -> EdgeProbMatrix {
        EdgeProbMatrix::from_upper_fn(self.n, |i, j| self.raw_entry(i, j))
    }
}

/// Top-`k` eigenpairs of `A` by magnitude; dense up to [`DENSE_EIGEN_LIMIT`] nodes.
pub fn estimate_spectral(a: &AdjacencyMatrix, k: usize) -> Result<SpectralEstimate> {
    let n = a.n();
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("rank {k} must satisfy 1 <= k < n = {n}")));
    }
    let eig = if n <= DENSE_EIGEN_LIMIT {
        dense_top_k(n, &dense_adjacency(a), k)
    } else {
        lanczos_top_k(n, k, |x, y| {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = a.neighbors(i).iter().map(|&j| x[j]).sum();
            }
        })?
    };
    let mut est = SpectralEstimate { k, n, eigenvalues: eig.values, eigenvectors: eig.vectors, clip_count: 0 };
    est.clip_count = est.materialize().clip_count();
    Ok(est)
}

fn dense_adjacency(a: &AdjacencyMatrix) -> Vec<f64> {
    let n = a.n();
    let mut m = vec![0.0; n * n];
    for (i, j) in a.edges() {
        m[i * n + j] = 1.0;
        m[j * n + i] = 1.0;
    }
    m
}

/// Regularized spectral clustering.
///
/// Embeds nodes with the top-`k` eigenvectors of `D_tau^{-1/2} A D_tau^{-1/2}`
/// (`D_tau = D + tau I`, `tau` defaulting to the average degree), normalizes
/// rows, and runs spherical k-means with 20 seeded restarts, keeping the
/// lowest inertia. Labels are renumbered in order of first appearance.
pub fn spectral_cluster(a: &AdjacencyMatrix, k: usize, tau: Option<f64>, seed: SeedSpec) -> Result<Vec<usize>> {
    let n = a.n();
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if k == 1 {
        return Ok(vec![0; n]);
    }
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
    }
    let tau = tau.unwrap_or(2.0 * a.edge_count() as f64 / n as f64);
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::InvalidArgument(format!("regularizer tau = {tau}")));
    }
    let scale: Vec<f64> = (0..n)
        .map(|i| {
            let d = a.degree(i) as f64 + tau;
            if d > 0.0 { Ok(1.0 / d.sqrt()) } else { Err(Error::DegenerateModel(format!("node {i} has zero regularized degree"))) }
        })
        .collect::<Result<_>>()?;
    let eig = if n <= DENSE_CLUSTER_LIMIT {
        let mut m = vec![0.0; n * n];
        for (i, j) in a.edges() {
            let v = scale[i] * scale[j];
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
        dense_top_k(n, &m, k)
    } else {
        lanczos_top_k(n, k, |x, y| {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = scale[i] * a.neighbors(i).iter().map(|&j| scale[j] * x[j]).sum::<f64>();
            }
        })?
    };
    let rows = normalized_rows(&eig);
    Ok(spherical_kmeans(&rows, n, k, seed))
}

fn normalized_rows(eig: &EigenPairs) -> Vec<f64> {
    let k = eig.k();
    let mut rows = eig.vectors.clone();
    for row in rows.chunks_mut(k) {
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            row.iter_mut().for_each(|x| *x /= norm);
        }
    }
    rows
}

/// Best-of-restarts spherical k-means on unit rows (`n x dim`, row-major).
pub(crate) fn spherical_kmeans(rows: &[f64], n: usize, k: usize, seed: SeedSpec) -> Vec<usize> {
    let dim = rows.len() / n.max(1);
    let mut best: Option<(f64, Vec<usize>)> = None;
    for r in 0..KMEANS_RESTARTS {
        let mut rng = seed.stream(level::KMEANS, r);
        let (inertia, labels) = kmeans_once(rows, n, dim, k, &mut rng);
        if best.as_ref().is_none_or(|(b, _)| inertia < *b) {
            best = Some((inertia, labels));
        }
    }
    relabel_by_appearance(&best.expect("at least one restart").1, k)
}

fn kmeans_once<R: Rng>(rows: &[f64], n: usize, dim: usize, k: usize, rng: &mut R) -> (f64, Vec<usize>) {
    let row = |i: usize| &rows[i * dim..(i + 1) * dim];
    let sim = |x: &[f64], c: &[f64]| x.iter().zip(c).map(|(a, b)| a * b).sum::<f64>();
    // k-means++ seeding with dissimilarity 1 - cos.
    let mut centres: Vec<f64> = Vec::with_capacity(k * dim);
    centres.extend_from_slice(row(rng.random_range(0..n)));
    let mut gap = vec![f64::INFINITY; n];
    for c in 1..k {
        let last = &centres[(c - 1) * dim..c * dim];
        for i in 0..n {
            gap[i] = gap[i].min((1.0 - sim(row(i), last)).max(0.0));
        }
        let total: f64 = gap.iter().sum();
        let pick = if total > 0.0 {
            let mut u = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, g) in gap.iter().enumerate() {
                if u < *g {
                    chosen = i;
                    break;
                }
                u -= g;
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        centres.extend_from_slice(row(pick));
    }
    let mut labels = vec![usize::MAX; n];
    let mut inertia = f64::INFINITY;
    for _ in 0..KMEANS_MAX_ITER {
        let mut changed = false;
        inertia = 0.0;
        for i in 0..n {
            let mut best = (0, f64::NEG_INFINITY);
            for c in 0..k {
                let s = sim(row(i), &centres[c * dim..(c + 1) * dim]);
                if s > best.1 {
                    best = (c, s);
                }
            }
            inertia += 1.0 - best.1;
            if labels[i] != best.0 {
                labels[i] = best.0;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let mut sums = vec![0.0; k * dim];
        let mut counts = vec![0usize; k];
        for i in 0..n {
            let c = labels[i];
            counts[c] += 1;
            for (s, x) in sums[c * dim..(c + 1) * dim].iter_mut().zip(row(i)) {
                *s += x;
            }
        }
        for c in 0..k {
            let norm = sums[c * dim..(c + 1) * dim].iter().map(|x| x * x).sum::<f64>().sqrt();
            if counts[c] == 0 || norm == 0.0 {
                // Reseed an empty cluster at the point worst served by its centre.
                let far = (0..n)
                    .min_by(|&x, &y| {
                        let sx = sim(row(x), &centres[labels[x] * dim..(labels[x] + 1) * dim]);
                        let sy = sim(row(y), &centres[labels[y] * dim..(labels[y] + 1) * dim]);
                        sx.total_cmp(&sy)
                    })
                    .unwrap_or(0);
                centres[c * dim..(c + 1) * dim].copy_from_slice(row(far));
            } else {
                for (dst, s) in centres[c * dim..(c + 1) * dim].iter_mut().zip(&sums[c * dim..(c + 1) * dim]) {
                    *dst = s / norm;
                }
            }
        }
    }
    (inertia, labels)
}

fn relabel_by_appearance(labels: &[usize], k: usize) -> Vec<usize> {
    let mut map = vec![usize::MAX; k.max(labels.iter().copied().max().map_or(0, |m| m + 1))];
    let mut next = 0;
    labels
        .iter()
        .map(|&g| {
            if map[g] == usize::MAX {
                map[g] = next;
                next += 1;
            }
            map[g]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cliques(sizes: &[usize]) -> AdjacencyMatrix {
        let mut edges = Vec::new();
        let mut base = 0;
        for &s in sizes {
            for i in 0..s {
                for j in (i + 1)..s {
                    edges.push((base + i, base + j));
                }
            }
            base += s;
        }
        AdjacencyMatrix::from_edges(base, edges)
    }

    #[test]
    fn complete_graph_rank_one() {
        let est = estimate_spectral(&cliques(&[4]), 1).unwrap();
        assert!((est.eigenvalues[0] - 3.0).abs() < 1e-12);
        let p = est.materialize();
        assert!((p.get(0, 1) - 0.75).abs() < 1e-12);
        assert_eq!(p.get(2, 2), 0.0);
    }

    #[test]
    fn rank_bounds() {
        let a = cliques(&[4]);
        assert!(estimate_spectral(&a, 0).is_err());
        assert!(estimate_spectral(&a, 4).is_err());
    }

    #[test]
    fn two_cliques_separate() {
        let labels = spectral_cluster(&cliques(&[5, 5]), 2, None, SeedSpec::new(3)).unwrap();
        assert_eq!(labels, vec![0, 0, 0, 0, 0, 1, 1, 1, 1, 1]);
        assert_eq!(spectral_cluster(&cliques(&[5, 5]), 1, None, SeedSpec::new(3)).unwrap(), vec![0; 10]);
    }

    #[test]
    fn large_cliques_use_iterative_path() {
        let labels = spectral_cluster(&cliques(&[30, 25, 20]), 3, None, SeedSpec::new(8)).unwrap();
        assert!(labels[..30].iter().all(|&g| g == 0));
        assert!(labels[30..55].iter().all(|&g| g == 1));
        assert!(labels[55..].iter().all(|&g| g == 2));
    }

    #[test]
    fn zero_tau_with_isolated_node_fails() {
        let mut edges = vec![(0, 1), (1, 2)];
        edges.push((0, 2));
        let a = AdjacencyMatrix::from_edges(4, edges);
        assert!(spectral_cluster(&a, 2, Some(0.0), SeedSpec::new(1)).is_err());
        assert!(spectral_cluster(&a, 2, None, SeedSpec::new(1)).is_ok());
    }
}
