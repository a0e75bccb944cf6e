use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::AdjacencyMatrix;

const UNREACHED: usize = usize::MAX;

/// BFS distances from `s`; unreachable nodes hold `usize::MAX`.
pub fn bfs_distances(a: &AdjacencyMatrix, s: usize) -> Vec<usize> {
    let mut dist = vec![UNREACHED; a.n()];
    let mut queue = VecDeque::new();
    dist[s] = 0;
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        for &w in a.neighbors(u) {
            if dist[w] == UNREACHED {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Component id per node, ids assigned in order of lowest member.
pub fn connected_components(a: &AdjacencyMatrix) -> Vec<usize> {
    let mut comp = vec![UNREACHED; a.n()];
    let mut next = 0;
    let mut stack = Vec::new();
    for s in 0..a.n() {
        if comp[s] != UNREACHED {
            continue;
        }
        comp[s] = next;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &w in a.neighbors(u) {
                if comp[w] == UNREACHED {
                    comp[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Nodes of the largest connected component, ascending. Ties go to the
/// component containing the lowest node index.
pub fn largest_component(a: &AdjacencyMatrix) -> Vec<usize> {
    let comp = connected_components(a);
    let k = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; k];
    for &c in &comp {
        sizes[c] += 1;
    }
    let best = (0..k).fold(0, |b, c| if sizes[c] > sizes[b] { c } else { b });
    (0..a.n()).filter(|&i| comp[i] == best).collect()
}

fn largest_component_graph(a: &AdjacencyMatrix) -> Result<AdjacencyMatrix> {
    if a.edge_count() == 0 {
        return Err(Error::UndefinedStatistic("path statistics need at least one edge".into()));
    }
    Ok(a.induced(&largest_component(a)))
}

/// Mean shortest-path length over ordered pairs of the largest component.
pub fn average_path_length(a: &AdjacencyMatrix) -> Result<f64> {
    let g = largest_component_graph(a)?;
    let n = g.n();
    let sums: Vec<usize> = (0..n)
        .into_par_iter()
        .map(|s| bfs_distances(&g, s).iter().sum())
        .collect();
    let total: usize = sums.iter().sum();
    Ok(total as f64 / (n * (n - 1)) as f64)
}

/// Longest shortest path within the largest component.
pub fn diameter(a: &AdjacencyMatrix) -> Result<usize> {
    let g = largest_component_graph(a)?;
    Ok((0..g.n())
        .into_par_iter()
        .map(|s| bfs_distances(&g, s).into_iter().max().unwrap_or(0))
        .max()
        .unwrap_or(0))
}

/// `(n_c - 1) / sum_j dist(i, j)` over `i`'s component; 0 for an isolated node.
pub fn closeness(a: &AdjacencyMatrix, i: usize) -> Result<f64> {
    check_node(a, i)?;
    let dist = bfs_distances(a, i);
    let (reached, total) = dist
        .iter()
        .filter(|&&d| d != UNREACHED)
        .fold((0usize, 0usize), |(c, s), &d| (c + 1, s + d));
    if total == 0 {
        return Ok(0.0);
    }
    Ok((reached - 1) as f64 / total as f64)
}

/// Unnormalized betweenness of every node; each unordered pair counted once.
pub fn betweenness_all(a: &AdjacencyMatrix) -> Vec<f64> {
    let n = a.n();
    let per_source: Vec<Vec<f64>> = (0..n).into_par_iter().map(|s| dependencies(a, s)).collect();
    let mut out = vec![0.0; n];
    for delta in per_source {
        for (o, d) in out.iter_mut().zip(delta) {
            *o += d;
        }
    }
    out.iter_mut().for_each(|x| *x /= 2.0);
    out
}

/// Betweenness of one node (Brandes accumulation over all sources).
pub fn betweenness(a: &AdjacencyMatrix, i: usize) -> Result<f64> {
    check_node(a, i)?;
    let per_source: Vec<f64> = (0..a.n()).into_par_iter().map(|s| dependencies(a, s)[i]).collect();
    Ok(per_source.iter().sum::<f64>() / 2.0)
}

/// Dependency of source `s` on every node (Brandes single-source pass).
fn dependencies(a: &AdjacencyMatrix, s: usize) -> Vec<f64> {
    let n = a.n();
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![UNREACHED; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    sigma[s] = 1.0;
    dist[s] = 0;
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &w in a.neighbors(u) {
            if dist[w] == UNREACHED {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[u] + 1 {
                sigma[w] += sigma[u];
            }
        }
    }
    let mut delta = vec![0.0f64; n];
    for &w in order.iter().rev() {
        for &u in a.neighbors(w) {
            if dist[u] != UNREACHED && dist[u] + 1 == dist[w] {
                delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w]);
            }
        }
    }
    delta[s] = 0.0;
    delta
}

fn check_node(a: &AdjacencyMatrix, i: usize) -> Result<()> {
    if i >= a.n() {
        return Err(Error::InvalidArgument(format!("node {i} out of range for n = {}", a.n())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> AdjacencyMatrix {
        AdjacencyMatrix::from_edges(leaves + 1, (1..=leaves).map(|k| (0, k)))
    }

    #[test]
    fn star_centre() {
        let s = star(3);
        assert_eq!(betweenness(&s, 0).unwrap(), 3.0);
        assert_eq!(betweenness(&s, 1).unwrap(), 0.0);
        assert_eq!(closeness(&s, 0).unwrap(), 1.0);
        assert_eq!(diameter(&s).unwrap(), 2);
        assert!((average_path_length(&s).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn path_betweenness() {
        let p = AdjacencyMatrix::from_edges(5, (1..5).map(|i| (i - 1, i)));
        assert_eq!(betweenness_all(&p), vec![0.0, 3.0, 4.0, 3.0, 0.0]);
        assert_eq!(diameter(&p).unwrap(), 4);
    }

    #[test]
    fn largest_component_only() {
        // triangle plus a separate edge and an isolated node
        let g = AdjacencyMatrix::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4)]);
        assert_eq!(largest_component(&g), vec![0, 1, 2]);
        assert_eq!(average_path_length(&g).unwrap(), 1.0);
        assert_eq!(diameter(&g).unwrap(), 1);
        assert_eq!(closeness(&g, 5).unwrap(), 0.0);
        assert_eq!(closeness(&g, 3).unwrap(), 1.0);
    }

    #[test]
    fn edgeless_is_undefined() {
        let g = AdjacencyMatrix::empty(4);
        assert!(matches!(average_path_length(&g), Err(Error::UndefinedStatistic(_))));
        assert!(diameter(&g).is_err());
    }
}
