use rand::RngCore;

use super::adjacency::AdjacencyMatrix;
use crate::error::{Error, Result};

const TWO_POW_32: f64 = (1u64 << 32) as f64;

/// Symmetric matrix of independent edge probabilities with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeProbMatrix {
    n: usize,
    entries: Vec<f64>,
    clipped: usize,
    // Packed upper triangle of `min(ceil(P_ij * 2^32), 2^32 - 1)`. A pair is an
    // edge when its 32-bit uniform falls below the threshold or the threshold
    // is saturated, so `P_ij` is resolved to 2^-32 and 1 is exact.
    thresholds: Vec<u32>,
    total: f64,
}

impl EdgeProbMatrix {
    /// Validates and wraps a dense row-major `n * n` matrix.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidProbabilities(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        for i in 0..n {
            if entries[i * n + i] != 0.0 {
                return Err(Error::InvalidProbabilities(format!("nonzero diagonal at {i}")));
            }
            for j in (i + 1)..n {
                let v = entries[i * n + j];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidProbabilities(format!("P[{i}][{j}] = {v}")));
                }
                if v != entries[j * n + i] {
                    return Err(Error::InvalidProbabilities(format!("asymmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self::assemble(n, entries, 0))
    }

    /// Fills the upper triangle from `f(i, j)` (called with `i < j`),
    /// clipping each value into `[0, 1]` and counting the pairs that needed it.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = vec![0.0; n * n];
        let mut clipped = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                let raw = f(i, j);
                let v = if raw.is_nan() { 0.0 } else { raw.clamp(0.0, 1.0) };
                if v != raw {
                    clipped += 1;
                }
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        Self::assemble(n, entries, clipped)
    }

    fn assemble(n: usize, entries: Vec<f64>, clipped: usize) -> Self {
        let mut thresholds = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                thresholds.push((entries[i * n + j] * TWO_POW_32).ceil().min(u32::MAX as f64) as u32);
            }
        }
        let total = entries.iter().sum::<f64>();
        Self { n, entries, clipped, thresholds, total }
    }

    pub fn erdos_renyi(n: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbabilities(format!("p = {p}")));
        }
        Ok(Self::from_upper_fn(n, |_, _| p))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    /// Unordered pairs whose value was clipped into `[0, 1]` at construction.
    pub fn clip_count(&self) -> usize {
        self.clipped
    }

    /// Average expected degree `n^{-1} sum_{i != j} P_ij`.
    pub fn expected_degree(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        self.total / self.n as f64
    }

    /// Expected number of edges.
    pub fn expected_edges(&self) -> f64 {
        self.total / 2.0
    }

    pub fn frobenius_distance(&self, other: &EdgeProbMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Draws one network: each pair `i < j` is an edge independently with
    /// probability `P_ij` (rounded up to a multiple of 2^-32). Pairs are
    /// visited in row-major order, four per 64-bit draw, so the result is a
    /// pure function of the generator state.
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> AdjacencyMatrix {
        sample_network(self, rng)
    }
}

/// Decides one pair from 16 uniform bits `h` against the 32-bit threshold
/// `t`. Only when `h` ties the high half of `t` (probability 2^-16) are 16
/// more bits drawn, so the edge probability is exactly `t / 2^32`.
#[inline(always)]
fn edge<R: RngCore + ?Sized>(h: u32, t: u32, rng: &mut R) -> bool {
    let high = t >> 16;
    if h != high {
        // `t == u32::MAX` has high half 0xffff, so `h < high` already holds.
        return h < high;
    }
    t == u32::MAX || (rng.next_u32() & 0xffff) < (t & 0xffff)
}

/// See [`EdgeProbMatrix::sample`].
pub fn sample_network<R: RngCore + ?Sized>(p: &EdgeProbMatrix, rng: &mut R) -> AdjacencyMatrix {
    let n = p.n();
    let th = &p.thresholds;
    // Flat indices of the chosen pairs; each 64-bit draw serves four
    // consecutive pairs, lowest lane first.
    let mut hits = Vec::with_capacity(p.expected_edges().ceil() as usize + 16);
    let mut chunks = th.chunks_exact(4);
    for (c, t) in (&mut chunks).enumerate() {
        let w = rng.next_u64();
        for (lane, &tk) in t.iter().enumerate() {
            if edge((w >> (16 * lane)) as u32 & 0xffff, tk, rng) {
                hits.push(4 * c + lane);
            }
        }
    }
    let rest = chunks.remainder();
    if !rest.is_empty() {
        let w = rng.next_u64();
        let base = th.len() - rest.len();
        for (lane, &tk) in rest.iter().enumerate() {
            if edge((w >> (16 * lane)) as u32 & 0xffff, tk, rng) {
                hits.push(base + lane);
            }
        }
    }
    let mut pairs = Vec::with_capacity(hits.len());
    let (mut i, mut row_start, mut row_end) = (0, 0, n.saturating_sub(1));
    for k in hits {
        while k >= row_end {
            i += 1;
            row_start = row_end;
            row_end += n - i - 1;
        }
        pairs.push((i, i + 1 + k - row_start));
    }
    AdjacencyMatrix::from_sorted_pairs(n, &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SeedSpec;

    #[test]
    fn zero_and_one_probabilities() {
        let mut rng = SeedSpec::new(1).stream(0, 0);
        let zero = EdgeProbMatrix::erdos_renyi(5, 0.0).unwrap();
        assert_eq!(zero.sample(&mut rng).edge_count(), 0);
        let one = EdgeProbMatrix::erdos_renyi(4, 1.0).unwrap();
        assert_eq!(one.sample(&mut rng).edge_count(), 6);
    }

    #[test]
    fn expected_degree_er() {
        let p = EdgeProbMatrix::erdos_renyi(10, 0.5).unwrap();
        assert!((p.expected_degree() - 4.5).abs() < 1e-12);
        assert_eq!(EdgeProbMatrix::erdos_renyi(7, 0.0).unwrap().expected_degree(), 0.0);
    }

    #[test]
    fn rejects_invalid() {
        assert!(EdgeProbMatrix::new(2, vec![0.0, 0.5, 0.4, 0.0]).is_err());
        assert!(EdgeProbMatrix::new(2, vec![0.1, 0.5, 0.5, 0.0]).is_err());
        assert!(EdgeProbMatrix::new(2, vec![0.0, 1.5, 1.5, 0.0]).is_err());
        assert!(EdgeProbMatrix::new(2, vec![0.0, 0.5, 0.5, 0.0]).is_ok());
    }

    #[test]
    fn clipping_is_counted() {
        let p = EdgeProbMatrix::from_upper_fn(3, |i, _| if i == 0 { 1.5 } else { -0.2 });
        assert_eq!(p.clip_count(), 3);
        assert_eq!(p.get(0, 1), 1.0);
        assert_eq!(p.get(1, 2), 0.0);
    }

    #[test]
    fn er_mean_edge_count() {
        // m ~ Binomial(4950, 0.5): mean 2475, SE of the mean over 10k draws.
        let p = EdgeProbMatrix::erdos_renyi(100, 0.5).unwrap();
        let seed = SeedSpec::new(2024);
        let draws = 10_000;
        let total: usize = (0..draws).map(|b| p.sample(&mut seed.stream(0, b)).edge_count()).sum();
        let mean = total as f64 / draws as f64;
        let se = (4950.0f64 * 0.25 / draws as f64).sqrt();
        assert!((mean - 2475.0).abs() < 3.0 * se, "mean {mean}");
    }

    #[test]
    fn pairwise_frequencies_converge() {
        let n = 6;
        let p = EdgeProbMatrix::from_upper_fn(n, |i, j| ((i + 1) * (j + 2)) as f64 / 60.0);
        let seed = SeedSpec::new(99);
        let reps = 10_000;
        let mut counts = vec![0usize; n * n];
        for b in 0..reps {
            let a = p.sample(&mut seed.stream(1, b as u64));
            for (i, j) in a.edges() {
                counts[i * n + j] += 1;
            }
        }
        for (i, j) in [(0, 1), (0, 5), (2, 3), (4, 5)] {
            let pij = p.get(i, j);
            let freq = counts[i * n + j] as f64 / reps as f64;
            assert!((freq - pij).abs() <= 4.0 * (pij * (1.0 - pij) / reps as f64).sqrt());
        }
    }
}
