use std::fmt;

/// Simple undirected graph stored as sorted adjacency lists in CSR layout.
#[derive(Clone, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    n: usize,
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl AdjacencyMatrix {
    /// Graph on `n` nodes with no edges.
    pub fn empty(n: usize) -> Self {
        Self { n, offsets: vec![0; n + 1], targets: Vec::new() }
    }

    /// Builds a graph from arbitrary node pairs. Duplicates and self-loops
    /// are discarded.
    ///
    /// Panics if a node index is `>= n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut pairs: Vec<(usize, usize)> = edges
            .into_iter()
            .filter(|&(i, j)| i != j)
            .map(|(i, j)| {
                assert!(i < n && j < n, "edge ({i}, {j}) out of range for n = {n}");
                if i < j { (i, j) } else { (j, i) }
            })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        Self::from_sorted_pairs(n, &pairs)
    }

    /// Builds from pairs that are already `i < j`, sorted and unique.
    pub(crate) fn from_sorted_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(i, j) in pairs {
            offsets[i + 1] += 1;
            offsets[j + 1] += 1;
        }
        for k in 0..n {
            offsets[k + 1] += offsets[k];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; 2 * pairs.len()];
        // Lexicographic order keeps every neighbour list sorted.
        for &(i, j) in pairs {
            targets[fill[i]] = j;
            fill[i] += 1;
            targets[fill[j]] = i;
            fill[j] += 1;
        }
        Self { n, offsets, targets }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.degree(i)).collect()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.neighbors(i).binary_search(&j).is_ok()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            self.neighbors(i).iter().copied().filter(move |&j| j > i).map(move |j| (i, j))
        })
    }

    /// Subgraph induced by `nodes`, relabelled `0..nodes.len()` in the given order.
    pub fn induced(&self, nodes: &[usize]) -> AdjacencyMatrix {
        let mut index = vec![usize::MAX; self.n];
        for (k, &v) in nodes.iter().enumerate() {
            index[v] = k;
        }
        let pairs = nodes.iter().enumerate().flat_map(|(k, &v)| {
            let index = &index;
            self.neighbors(v)
                .iter()
                .filter_map(move |&w| (index[w] != usize::MAX).then_some((k, index[w])))
        });
        AdjacencyMatrix::from_edges(nodes.len(), pairs.collect::<Vec<_>>())
    }

    /// Dense row-major bit matrix, used by the enumeration kernels.
    pub(crate) fn bit_rows(&self) -> BitRows {
        let words = self.n.div_ceil(64).max(1);
        let mut bits = vec![0u64; words * self.n];
        for (i, j) in self.edges() {
            bits[i * words + j / 64] |= 1 << (j % 64);
            bits[j * words + i / 64] |= 1 << (i % 64);
        }
        BitRows { words, bits }
    }
}

impl fmt::Debug for AdjacencyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AdjacencyMatrix")
            .field("n", &self.n)
            .field("m", &self.edge_count())
            .finish()
    }
}

pub(crate) struct BitRows {
    words: usize,
    bits: Vec<u64>,
}

impl BitRows {
    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }
}
