use super::counts::for_each_combination;
use super::motif::{pair_index, Motif, MotifKind};
use crate::error::{Error, Result};
use crate::graph::EdgeProbMatrix;

/// Largest motif order for the exact placement-sum evaluator.
pub const MAX_EXPECTATION_NODES: usize = 4;

/// Exact `E_P[T_R]`, or the rooted expectation at `node` when the motif is rooted.
///
/// Edge, V-shape and triangle use `O(n^3)` sums; other motifs with at most
/// four nodes sum edge-probability products over every placement.
pub fn expected_subgraph_count(p: &EdgeProbMatrix, motif: &Motif, node: Option<usize>) -> Result<f64> {
    match (motif.root(), node) {
        (None, None) => {}
        (Some(_), Some(i)) if i < p.n() => {}
        (Some(_), Some(i)) => {
            return Err(Error::InvalidArgument(format!("node {i} out of range for n = {}", p.n())))
        }
        (Some(_), None) => return Err(Error::InvalidArgument(format!("rooted motif {motif} needs a node"))),
        (None, Some(_)) => return Err(Error::InvalidArgument(format!("motif {motif} has no root"))),
    }
    let value = match (motif.kind(), node) {
        (MotifKind::Edge, None) => p.expected_edges(),
        (MotifKind::Edge, Some(i)) => row_sums(p)[i],
        (MotifKind::VShape, None) => expected_vshapes(p),
        (MotifKind::VShapeCentre, Some(i)) => {
            let s = row_sums(p)[i];
            (s * s - p.row(i).iter().map(|x| x * x).sum::<f64>()) / 2.0
        }
        (MotifKind::VShapeLeaf, Some(i)) => {
            let s = row_sums(p);
            p.row(i).iter().enumerate().map(|(j, &pij)| pij * (s[j] - pij)).sum()
        }
        (MotifKind::Triangle, None) => expected_triangles(p),
        (MotifKind::Triangle, Some(i)) => expected_rooted_triangles(p, i),
        (_, node) => placement_sum(p, motif, node)?,
    };
    Ok(value)
}

/// `sum_{i<j<k} P_ij P_ik P_jk`.
pub fn expected_triangles(p: &EdgeProbMatrix) -> f64 {
    let n = p.n();
    let mut total = 0.0;
    for i in 0..n {
        let ri = p.row(i);
        for j in (i + 1)..n {
            let pij = ri[j];
            if pij == 0.0 {
                continue;
            }
            let rj = p.row(j);
            let inner: f64 = ri[j + 1..].iter().zip(&rj[j + 1..]).map(|(a, b)| a * b).sum();
            total += pij * inner;
        }
    }
    total
}

/// `sum_{j<k} P_ij P_ik P_jk`.
pub fn expected_rooted_triangles(p: &EdgeProbMatrix, i: usize) -> f64 {
    let n = p.n();
    let ri = p.row(i);
    let mut total = 0.0;
    for j in 0..n {
        if ri[j] == 0.0 {
            continue;
        }
        let rj = p.row(j);
        let inner: f64 = ri[j + 1..].iter().zip(&rj[j + 1..]).map(|(a, b)| a * b).sum();
        total += ri[j] * inner;
    }
    total
}

/// `sum_c (s_c^2 - sum_j P_cj^2) / 2` with `s_c` the row sums.
pub fn expected_vshapes(p: &EdgeProbMatrix) -> f64 {
    (0..p.n())
        .map(|c| {
            let r = p.row(c);
            let s: f64 = r.iter().sum();
            (s * s - r.iter().map(|x| x * x).sum::<f64>()) / 2.0
        })
        .sum()
}

fn row_sums(p: &EdgeProbMatrix) -> Vec<f64> {
    (0..p.n()).map(|i| p.row(i).iter().sum()).collect()
}

fn placement_sum(p: &EdgeProbMatrix, motif: &Motif, node: Option<usize>) -> Result<f64> {
    let v = motif.v();
    if v > MAX_EXPECTATION_NODES {
        return Err(Error::UnsupportedMotif(format!(
            "exact expectation supports at most {MAX_EXPECTATION_NODES} nodes, {motif} has {v}"
        )));
    }
    let copies: Vec<Vec<(usize, usize)>> = motif
        .labeled_copies()
        .into_iter()
        .map(|mask| {
            let mut edges = Vec::new();
            for a in 0..v {
                for b in (a + 1)..v {
                    if mask >> pair_index(v, a, b) & 1 == 1 {
                        edges.push((a, b));
                    }
                }
            }
            edges
        })
        .collect();
    let mut total = 0.0;
    let mut add = |nodes: &[usize]| {
        for copy in &copies {
            total += copy.iter().map(|&(a, b)| p.get(nodes[a], nodes[b])).product::<f64>();
        }
    };
    match node {
        None => for_each_combination(p.n(), v, |nodes| add(nodes)),
        Some(i) => {
            let others: Vec<usize> = (0..p.n()).filter(|&k| k != i).collect();
            let mut nodes = vec![i; v];
            for_each_combination(others.len(), v - 1, |idx| {
                for (slot, &k) in idx.iter().enumerate() {
                    nodes[slot + 1] = others[k];
                }
                add(&nodes);
            });
        }
    }
    Ok(total)
}
