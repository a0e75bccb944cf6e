use super::motif::{pair_index, Motif, MotifKind};
use crate::error::{Error, Result};
use crate::graph::{AdjacencyMatrix, BitRows};

/// Largest motif order handled by the counting enumerators.
pub const MAX_COUNT_NODES: usize = 5;

/// Number of subgraphs of `a` isomorphic to the unrooted motif.
///
/// Edge, V-shape and triangle use dedicated kernels; other motifs with at
/// most five nodes are counted by enumerating vertex subsets.
pub fn subgraph_count(a: &AdjacencyMatrix, motif: &Motif) -> Result<u64> {
    if motif.root().is_some() {
        return Err(Error::InvalidArgument(format!(
            "motif {motif} is rooted; use rooted_subgraph_count"
        )));
    }
    Ok(match motif.kind() {
        MotifKind::Edge => a.edge_count() as u64,
        MotifKind::VShape => vshape_count(a),
        MotifKind::Triangle => triangle_count(a),
        _ => {
            check_size(motif)?;
            if motif.is_connected() {
                connected_count(a, motif, None)
            } else {
                count_by_enumeration(a, motif)?
            }
        }
    })
}

/// Number of subgraphs containing node `i` that are isomorphic to the
/// rooted motif with the root mapped to `i`.
pub fn rooted_subgraph_count(a: &AdjacencyMatrix, motif: &Motif, i: usize) -> Result<u64> {
    if motif.root().is_none() {
        return Err(Error::InvalidArgument(format!("motif {motif} has no root")));
    }
    check_node(a, i)?;
    Ok(match motif.kind() {
        MotifKind::Edge => a.degree(i) as u64,
        MotifKind::VShapeCentre => choose2(a.degree(i)),
        MotifKind::VShapeLeaf => a.neighbors(i).iter().map(|&j| a.degree(j) as u64 - 1).sum(),
        MotifKind::Triangle => rooted_triangle_count(a, i),
        _ => {
            check_size(motif)?;
            if motif.is_connected() {
                connected_count(a, motif, Some(i))
            } else {
                rooted_count_by_enumeration(a, motif, i)?
            }
        }
    })
}

pub fn triangle_count(a: &AdjacencyMatrix) -> u64 {
    // Mark the higher neighbours of u, then scan the higher neighbours of
    // each higher neighbour v; every triangle u < v < w is seen once.
    let highs: Vec<&[usize]> = (0..a.n()).map(|u| upper(a.neighbors(u), u)).collect();
    let mut mark = vec![false; a.n()];
    let mut total = 0u64;
    for &hi in &highs {
        for &v in hi {
            mark[v] = true;
        }
        for &v in hi {
            total += highs[v].iter().filter(|&&w| mark[w]).count() as u64;
        }
        for &v in hi {
            mark[v] = false;
        }
    }
    total
}

/// Triangles through node `i`.
pub fn rooted_triangle_count(a: &AdjacencyMatrix, i: usize) -> u64 {
    let ni = a.neighbors(i);
    ni.iter()
        .enumerate()
        .map(|(pos, &j)| intersect_count(&ni[pos + 1..], upper(a.neighbors(j), j)))
        .sum()
}

/// Triangles through every node.
pub fn triangles_per_node(a: &AdjacencyMatrix) -> Vec<u64> {
    let mut out = vec![0u64; a.n()];
    for u in 0..a.n() {
        let nu = a.neighbors(u);
        for (pos, &v) in nu.iter().enumerate() {
            if v <= u {
                continue;
            }
            for_each_common(&nu[pos + 1..], upper(a.neighbors(v), v), |w| {
                out[u] += 1;
                out[v] += 1;
                out[w] += 1;
            });
        }
    }
    out
}

/// Paths of length two, `sum_i C(d_i, 2)`.
pub fn vshape_count(a: &AdjacencyMatrix) -> u64 {
    (0..a.n()).map(|i| choose2(a.degree(i))).sum()
}

/// Exhaustive count over all `v`-subsets of nodes. Quadratic-free but
/// `O(n^v)`; intended as a reference for small graphs.
pub fn count_by_enumeration(a: &AdjacencyMatrix, motif: &Motif) -> Result<u64> {
    check_size(motif)?;
    let motif = motif.clone().unrooted();
    let table = containment_table(&motif);
    let bits = a.bit_rows();
    let v = motif.v();
    let mut total = 0u64;
    for_each_combination(a.n(), v, |nodes| {
        total += table[induced_mask(&bits, nodes)] as u64;
    });
    Ok(total)
}

/// Rooted analogue of [`count_by_enumeration`] over subsets containing `i`.
pub fn rooted_count_by_enumeration(a: &AdjacencyMatrix, motif: &Motif, i: usize) -> Result<u64> {
    check_size(motif)?;
    check_node(a, i)?;
    if motif.root().is_none() {
        return Err(Error::InvalidArgument(format!("motif {motif} has no root")));
    }
    let table = containment_table(motif);
    let bits = a.bit_rows();
    let v = motif.v();
    let others: Vec<usize> = (0..a.n()).filter(|&k| k != i).collect();
    let mut nodes = vec![i; v];
    let mut total = 0u64;
    for_each_combination(others.len(), v - 1, |idx| {
        for (slot, &k) in idx.iter().enumerate() {
            nodes[slot + 1] = others[k];
        }
        total += table[induced_mask(&bits, &nodes)] as u64;
    });
    Ok(total)
}

/// `table[mask]` = number of labeled motif copies contained in the graph
/// on `0..v` with edge set `mask`.
fn containment_table(motif: &Motif) -> Vec<u32> {
    let v = motif.v();
    let copies = motif.labeled_copies();
    let size = 1usize << (v * (v - 1) / 2);
    (0..size as u32)
        .map(|mask| copies.iter().filter(|&&c| c & mask == c).count() as u32)
        .collect()
}

fn induced_mask(bits: &BitRows, nodes: &[usize]) -> usize {
    let v = nodes.len();
    let mut mask = 0usize;
    for x in 0..v {
        for y in (x + 1)..v {
            if bits.get(nodes[x], nodes[y]) {
                mask |= 1 << pair_index(v, x, y);
            }
        }
    }
    mask
}

/// Enumerates connected induced `v`-subsets once each (ESU scheme) and sums
/// the containment table. With a root, only subsets containing it are
/// visited and the root occupies slot 0.
fn connected_count(a: &AdjacencyMatrix, motif: &Motif, root: Option<usize>) -> u64 {
    let v = motif.v();
    let table = containment_table(motif);
    let bits = a.bit_rows();
    let mut total = 0u64;
    let mut visit = |sub: &[usize]| total += table[induced_mask(&bits, sub)] as u64;
    match root {
        Some(i) => {
            let ext: Vec<usize> = a.neighbors(i).to_vec();
            esu_extend(a, &bits, &mut vec![i], ext, None, v, &mut visit);
        }
        None => {
            for s in 0..a.n() {
                let ext: Vec<usize> = upper(a.neighbors(s), s).to_vec();
                esu_extend(a, &bits, &mut vec![s], ext, Some(s), v, &mut visit);
            }
        }
    }
    total
}

fn esu_extend(
    a: &AdjacencyMatrix,
    bits: &BitRows,
    sub: &mut Vec<usize>,
    mut ext: Vec<usize>,
    floor: Option<usize>,
    k: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if sub.len() == k {
        visit(sub);
        return;
    }
    while let Some(w) = ext.pop() {
        let mut next = ext.clone();
        for &u in a.neighbors(w) {
            if floor.is_some_and(|f| u <= f) || sub.contains(&u) {
                continue;
            }
            // Exclusive neighbourhood: skip anything already adjacent to `sub`.
            if sub.iter().any(|&s| bits.get(s, u)) {
                continue;
            }
            next.push(u);
        }
        sub.push(w);
        esu_extend(a, bits, sub, next, floor, k, visit);
        sub.pop();
    }
}

/// Calls `f` with every `k`-subset of `0..n` as an increasing index slice.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    if k == 0 {
        f(&[]);
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut pos = k;
        while pos > 0 && idx[pos - 1] == n - k + pos - 1 {
            pos -= 1;
        }
        if pos == 0 {
            return;
        }
        idx[pos - 1] += 1;
        for t in pos..k {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

fn check_size(motif: &Motif) -> Result<()> {
    if motif.v() > MAX_COUNT_NODES {
        return Err(Error::UnsupportedMotif(format!(
            "counting supports at most {MAX_COUNT_NODES} nodes, {motif} has {}",
            motif.v()
        )));
    }
    Ok(())
}

fn check_node(a: &AdjacencyMatrix, i: usize) -> Result<()> {
    if i >= a.n() {
        return Err(Error::InvalidArgument(format!("node {i} out of range for n = {}", a.n())));
    }
    Ok(())
}

#[inline]
fn choose2(d: usize) -> u64 {
    (d as u64) * (d as u64).saturating_sub(1) / 2
}

/// Suffix of a sorted neighbour list holding entries greater than `v`.
#[inline]
fn upper(list: &[usize], v: usize) -> &[usize] {
    &list[list.partition_point(|&x| x <= v)..]
}

#[inline]
fn intersect_count(a: &[usize], b: &[usize]) -> u64 {
    let mut n = 0;
    for_each_common(a, b, |_| n += 1);
    n
}

#[inline]
fn for_each_common(a: &[usize], b: &[usize], mut f: impl FnMut(usize)) {
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                f(a[x]);
                x += 1;
                y += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> AdjacencyMatrix {
        let mut e = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                e.push((i, j));
            }
        }
        AdjacencyMatrix::from_edges(n, e)
    }

    fn path(n: usize) -> AdjacencyMatrix {
        AdjacencyMatrix::from_edges(n, (1..n).map(|i| (i - 1, i)))
    }

    #[test]
    fn triangle_examples() {
        assert_eq!(subgraph_count(&complete(4), &Motif::triangle()).unwrap(), 4);
        assert_eq!(subgraph_count(&path(5), &Motif::triangle()).unwrap(), 0);
        let tri = Motif::triangle().rooted(0).unwrap();
        assert_eq!(rooted_subgraph_count(&complete(4), &tri, 0).unwrap(), 3);
        let star = AdjacencyMatrix::from_edges(4, [(0, 1), (0, 2), (0, 3)]);
        assert_eq!(rooted_subgraph_count(&star, &tri, 0).unwrap(), 0);
    }

    #[test]
    fn complete_graph_counts() {
        let k5 = complete(5);
        assert_eq!(subgraph_count(&k5, &Motif::four_clique()).unwrap(), 5);
        // 5 four-subsets, 3 four-cycles each
        assert_eq!(subgraph_count(&k5, &Motif::four_cycle()).unwrap(), 15);
        assert_eq!(subgraph_count(&k5, &Motif::vshape()).unwrap(), 30);
        assert_eq!(triangles_per_node(&k5), vec![6; 5]);
    }

    #[test]
    fn rooted_vshape_positions() {
        let p = path(4);
        let centre = Motif::vshape().rooted(0).unwrap();
        let leaf = Motif::vshape().rooted(1).unwrap();
        assert_eq!(rooted_subgraph_count(&p, &centre, 1).unwrap(), 1);
        assert_eq!(rooted_subgraph_count(&p, &leaf, 0).unwrap(), 1);
        assert_eq!(rooted_subgraph_count(&p, &leaf, 1).unwrap(), 1);
        assert_eq!(rooted_count_by_enumeration(&p, &leaf, 1).unwrap(), 1);
    }

    #[test]
    fn disconnected_motif_uses_subsets() {
        // two disjoint edges in a 4-path: only {01, 23}
        let two_edges = Motif::from_edges(&[(0, 1), (2, 3)]).unwrap();
        assert_eq!(subgraph_count(&path(4), &two_edges).unwrap(), 1);
        assert_eq!(subgraph_count(&complete(4), &two_edges).unwrap(), 3);
    }

    #[test]
    fn errors() {
        let big = Motif::from_edges(&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        assert!(matches!(subgraph_count(&path(7), &big), Err(Error::UnsupportedMotif(_))));
        assert!(subgraph_count(&path(3), &Motif::triangle().rooted(0).unwrap()).is_err());
        assert!(rooted_subgraph_count(&path(3), &Motif::triangle(), 0).is_err());
        let rt = Motif::triangle().rooted(0).unwrap();
        assert!(rooted_subgraph_count(&path(3), &rt, 3).is_err());
    }

    #[test]
    fn combinations_enumerated_once() {
        let mut count = 0;
        for_each_combination(7, 3, |_| count += 1);
        assert_eq!(count, 35);
        let mut zero = 0;
        for_each_combination(2, 3, |_| zero += 1);
        assert_eq!(zero, 0);
    }
}
