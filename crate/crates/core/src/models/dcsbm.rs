use serde::{Deserialize, Serialize};

use super::chung_lu::top_two;
use crate::error::{Error, Result};
use crate::graph::{AdjacencyMatrix, EdgeProbMatrix};

/// `P_ij = rho * B[g_i][g_j] * theta_i * theta_j`, clipped to `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DcsbmParams {
    pub labels: Vec<usize>,
    pub k: usize,
    /// Row-major `k x k`, symmetric.
    pub b: Vec<f64>,
    pub theta: Vec<f64>,
    pub rho: f64,
}

impl DcsbmParams {
    pub fn new(labels: Vec<usize>, k: usize, b: Vec<f64>, theta: Vec<f64>, rho: f64) -> Result<Self> {
        if labels.len() != theta.len() {
            return Err(Error::InvalidArgument("labels and theta differ in length".into()));
        }
        if let Some(&g) = labels.iter().find(|&&g| g >= k) {
            return Err(Error::InvalidArgument(format!("label {g} outside 0..{k}")));
        }
        if b.len() != k * k {
            return Err(Error::InvalidArgument(format!("block matrix needs {} entries", k * k)));
        }
        for r in 0..k {
            for c in 0..k {
                let v = b[r * k + c];
                if !(v.is_finite() && v >= 0.0) || v != b[c * k + r] {
                    return Err(Error::InvalidArgument(format!("block matrix entry ({r}, {c}) = {v}")));
                }
            }
        }
        if theta.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || !(rho.is_finite() && rho >= 0.0) {
            return Err(Error::InvalidArgument("theta and rho must be nonnegative".into()));
        }
        Ok(Self { labels, k, b, theta, rho })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn block(&self, r: usize, c: usize) -> f64 {
        self.b[r * self.k + c]
    }

    pub fn materialize(&self) -> EdgeProbMatrix {
        let (g, t) = (&self.labels, &self.theta);
        EdgeProbMatrix::from_upper_fn(self.n(), |i, j| self.rho * self.block(g[i], g[j]) * t[i] * t[j])
    }

    /// True when no pair needs clipping.
    pub fn within_bounds(&self) -> bool {
        let k = self.k;
        let mut tops = vec![(0.0, 0.0); k];
        for c in 0..k {
            let members: Vec<f64> = self.members(c).map(|i| self.theta[i]).collect();
            tops[c] = top_two(&members);
        }
        for r in 0..k {
            for c in r..k {
                let bound = if r == c { tops[r].0 * tops[r].1 } else { tops[r].0 * tops[c].0 };
                if self.rho * self.block(r, c) * bound > 1.0 {
                    return false;
                }
            }
        }
        true
    }

    fn members(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&i| self.labels[i] == c)
    }

    /// Power sums `sum theta^2, sum theta^4, sum theta^6` per block, optionally
    /// leaving one node out.
    fn block_moments(&self, skip: Option<usize>) -> Vec<[f64; 3]> {
        let mut m = vec![[0.0; 3]; self.k];
        for (i, (&g, &t)) in self.labels.iter().zip(&self.theta).enumerate() {
            if Some(i) == skip {
                continue;
            }
            let t2 = t * t;
            m[g][0] += t2;
            m[g][1] += t2 * t2;
            m[g][2] += t2 * t2 * t2;
        }
        m
    }

    /// Expected triangle count in `O(n + k^3)`, or `None` when clipping would change `P`.
    ///
    /// With `W = rho B` and per-block sums `S, Q, C` of `theta^2, theta^4, theta^6`,
    /// the sum over distinct ordered triples is `Full - 3 Pair + 2 Triple`.
    pub fn expected_triangles(&self) -> Option<f64> {
        if !self.within_bounds() {
            return None;
        }
        let k = self.k;
        let w = |r: usize, c: usize| self.rho * self.block(r, c);
        let m = self.block_moments(None);
        let (mut full, mut pair, mut triple) = (0.0, 0.0, 0.0);
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    full += w(a, b) * w(a, c) * w(b, c) * m[a][0] * m[b][0] * m[c][0];
                }
                pair += w(a, a) * w(a, b) * w(a, b) * m[a][1] * m[b][0];
            }
            triple += w(a, a).powi(3) * m[a][2];
        }
        Some((full - 3.0 * pair + 2.0 * triple) / 6.0)
    }

    /// Expected triangles through node `i`, or `None` when clipping would change `P`.
    pub fn expected_rooted_triangles(&self, i: usize) -> Option<f64> {
        if !self.within_bounds() {
            return None;
        }
        let k = self.k;
        let w = |r: usize, c: usize| self.rho * self.block(r, c);
        let a = self.labels[i];
        let m = self.block_moments(Some(i));
        let (mut all, mut diag) = (0.0, 0.0);
        for b in 0..k {
            for c in 0..k {
                all += w(a, b) * w(a, c) * w(b, c) * m[b][0] * m[c][0];
            }
            diag += w(a, b) * w(a, b) * w(b, b) * m[b][1];
        }
        Some(self.theta[i].powi(2) * (all - diag) / 2.0)
    }
}

/// Block sizes, checking every community is nonempty.
fn community_sizes(labels: &[usize], k: usize) -> Result<Vec<usize>> {
    let mut sizes = vec![0usize; k];
    for &g in labels {
        if g >= k {
            return Err(Error::InvalidArgument(format!("label {g} outside 0..{k}")));
        }
        sizes[g] += 1;
    }
    if let Some(c) = sizes.iter().position(|&s| s == 0) {
        return Err(Error::EmptyCommunity { community: c });
    }
    Ok(sizes)
}

/// Block edge means: `O_ab / (n_a n_b)` off the diagonal and
/// `O_aa / (n_a (n_a - 1))` on it, with `O` counting ordered pairs.
fn block_means(a: &AdjacencyMatrix, labels: &[usize], sizes: &[usize]) -> Vec<f64> {
    let k = sizes.len();
    let mut o = vec![0.0; k * k];
    for (i, j) in a.edges() {
        let (gi, gj) = (labels[i], labels[j]);
        o[gi * k + gj] += 1.0;
        o[gj * k + gi] += 1.0;
    }
    for r in 0..k {
        for c in 0..k {
            let pairs = if r == c {
                (sizes[r] * (sizes[r] - 1)) as f64
            } else {
                (sizes[r] * sizes[c]) as f64
            };
            o[r * k + c] = if pairs > 0.0 { o[r * k + c] / pairs } else { 0.0 };
        }
    }
    o
}

fn check_labels(a: &AdjacencyMatrix, labels: &[usize]) -> Result<()> {
    if labels.len() != a.n() {
        return Err(Error::InvalidArgument(format!(
            "{} labels for a graph with {} nodes",
            labels.len(),
            a.n()
        )));
    }
    Ok(())
}

/// Profile MLE with `sum_{i in c} theta_i = n_c` and `rho = 1`.
pub fn estimate_dcsbm(a: &AdjacencyMatrix, labels: &[usize], k: usize) -> Result<DcsbmParams> {
    check_labels(a, labels)?;
    let sizes = community_sizes(labels, k)?;
    let mut volume = vec![0.0; k];
    for (i, &g) in labels.iter().enumerate() {
        volume[g] += a.degree(i) as f64;
    }
    if let Some(c) = volume.iter().position(|&v| v == 0.0) {
        return Err(Error::ZeroDegreeCommunity { community: c });
    }
    let theta = labels
        .iter()
        .enumerate()
        .map(|(i, &g)| sizes[g] as f64 * a.degree(i) as f64 / volume[g])
        .collect();
    Ok(DcsbmParams { labels: labels.to_vec(), k, b: block_means(a, labels, &sizes), theta, rho: 1.0 })
}

/// Block-model MLE with `theta = 1`.
pub fn estimate_sbm(a: &AdjacencyMatrix, labels: &[usize], k: usize) -> Result<DcsbmParams> {
    check_labels(a, labels)?;
    let sizes = community_sizes(labels, k)?;
    Ok(DcsbmParams {
        labels: labels.to_vec(),
        k,
        b: block_means(a, labels, &sizes),
        theta: vec![1.0; a.n()],
        rho: 1.0,
    })
}
