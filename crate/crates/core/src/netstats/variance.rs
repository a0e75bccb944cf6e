use serde::Serialize;

use super::motif::Motif;
use crate::error::{Error, Result};
use crate::graph::EdgeProbMatrix;

/// Exact `Var_P(T_Δ)` under independent edges.
///
/// Triangle indicators on distinct triples are correlated only when they
/// share one edge `{i,j}`; with `w_k = P_ik P_jk` those pairs contribute
/// `P_ij (1 - P_ij) [(sum_k w_k)^2 - sum_k w_k^2]`.
pub fn triangle_count_variance(p: &EdgeProbMatrix) -> f64 {
    let n = p.n();
    let mut own = 0.0;
    let mut shared = 0.0;
    for i in 0..n {
        let ri = p.row(i);
        for j in (i + 1)..n {
            let pij = ri[j];
            if pij == 0.0 {
                continue;
            }
            let rj = p.row(j);
            let (mut s1, mut s2, mut upper) = (0.0, 0.0, 0.0);
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let w = ri[k] * rj[k];
                s1 += w;
                s2 += w * w;
                if k > j {
                    let pi = pij * w;
                    upper += pi * (1.0 - pi);
                }
            }
            own += upper;
            shared += pij * (1.0 - pij) * (s1 * s1 - s2);
        }
    }
    own + shared
}

/// One candidate overlap `H ⊂ R` and its variance term `n^a p^b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapTerm {
    pub overlap: Motif,
    /// Whether the root lies in `H` (always false for unrooted motifs).
    pub contains_root: bool,
    pub n_exponent: i32,
    pub p_exponent: i32,
}

/// Dominant term of `Var(T_R)` over all overlaps `H` with `e(H) > 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceOrder {
    pub leading_overlap: Motif,
    pub n_exponent: i32,
    pub p_exponent: i32,
    pub rooted: bool,
    /// Exponents of `Var(mu(P-hat))`, see [`plugin_variance_exponents`].
    pub plugin_exponents: (i32, i32),
    /// Distinct exponent pairs, one representative overlap each.
    pub candidates: Vec<OverlapTerm>,
}

impl VarianceOrder {
    /// Leading term when `p = n^{-gamma}`: maximizes `a - gamma * b`, ties to
    /// the larger `a`.
    pub fn leading_in_regime(&self, gamma: f64) -> &OverlapTerm {
        let score = |t: &OverlapTerm| t.n_exponent as f64 - gamma * t.p_exponent as f64;
        let mut best = &self.candidates[0];
        for t in &self.candidates[1..] {
            let (s, b) = (score(t), score(best));
            if s > b + 1e-12 || ((s - b).abs() <= 1e-12 && t.n_exponent > best.n_exponent) {
                best = t;
            }
        }
        best
    }

    /// Whether the plug-in estimate has the same variance order as `T_R`
    /// in the regime `p = n^{-gamma}`, i.e. the leading overlap is one edge.
    pub fn matches_plugin_in_regime(&self, gamma: f64) -> bool {
        let lead = self.leading_in_regime(gamma);
        (lead.n_exponent, lead.p_exponent) == self.plugin_exponents
    }
}

/// `(2v - 2, 2e - 1)` for `Var(mu(P-hat))`; rooted `(2v - 3, 2e - 1)`.
pub fn plugin_variance_exponents(motif: &Motif, rooted: bool) -> (i32, i32) {
    let (v, e) = (motif.v() as i32, motif.e() as i32);
    if rooted {
        (2 * v - 3, 2 * e - 1)
    } else {
        (2 * v - 2, 2 * e - 1)
    }
}

/// Scans every nonempty edge subset `H` of `R`. Unrooted exponents are
/// `(2v - v(H), 2e - e(H))`; rooted ones `(2v - 1 - v(H ∪ root), 2e - e(H))`.
/// The leading overlap maximizes the `n` exponent, ties to the smaller `p`
/// exponent.
pub fn variance_order(motif: &Motif, rooted: bool) -> Result<VarianceOrder> {
    if motif.v() > 6 {
        return Err(Error::UnsupportedMotif(format!("{motif} has more than 6 nodes")));
    }
    let root = if rooted {
        Some(motif.root().ok_or_else(|| Error::InvalidArgument(format!("motif {motif} has no root")))?)
    } else {
        None
    };
    let (v, e) = (motif.v() as i32, motif.e() as i32);
    let edges = motif.edges();
    let mut candidates: Vec<OverlapTerm> = Vec::new();
    for subset in 1u32..(1 << edges.len()) {
        let chosen: Vec<(usize, usize)> =
            (0..edges.len()).filter(|&k| subset >> k & 1 == 1).map(|k| edges[k]).collect();
        let mut nodes: Vec<usize> = chosen.iter().flat_map(|&(a, b)| [a, b]).collect();
        nodes.sort_unstable();
        nodes.dedup();
        let contains_root = root.is_some_and(|r| nodes.contains(&r));
        let relabel = |x: usize| nodes.binary_search(&x).expect("endpoint");
        let mut overlap =
            Motif::from_edges(&chosen.iter().map(|&(a, b)| (relabel(a), relabel(b))).collect::<Vec<_>>())?;
        if contains_root {
            overlap = overlap.rooted(relabel(root.unwrap_or(0)))?;
        }
        let vh = nodes.len() as i32;
        let eh = chosen.len() as i32;
        let n_exponent = match root {
            None => 2 * v - vh,
            Some(_) => 2 * v - 1 - (vh + i32::from(!contains_root)),
        };
        let term = OverlapTerm { overlap, contains_root, n_exponent, p_exponent: 2 * e - eh };
        if !candidates.iter().any(|t| {
            t.n_exponent == term.n_exponent
                && t.p_exponent == term.p_exponent
                && t.contains_root == term.contains_root
                && t.overlap.is_isomorphic(&term.overlap)
        }) {
            candidates.push(term);
        }
    }
    candidates.sort_by(|a, b| b.n_exponent.cmp(&a.n_exponent).then(a.p_exponent.cmp(&b.p_exponent)));
    let lead = candidates[0].clone();
    Ok(VarianceOrder {
        leading_overlap: lead.overlap,
        n_exponent: lead.n_exponent,
        p_exponent: lead.p_exponent,
        rooted,
        plugin_exponents: plugin_variance_exponents(motif, rooted),
        candidates,
    })
}
