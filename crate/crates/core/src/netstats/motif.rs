use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest motif order accepted anywhere.
pub const MAX_MOTIF_NODES: usize = 6;

/// Small simple graph `R` on nodes `0..v`, optionally rooted.
#[derive(Clone, PartialEq, Eq, Serialize)]
#[serde(into = "String")]
pub struct Motif {
    v: usize,
    edges: Vec<(usize, usize)>,
    root: Option<usize>,
    preset: Option<&'static str>,
}

const PRESETS: &[(&str, usize, &[(usize, usize)])] = &[
    ("edge", 2, &[(0, 1)]),
    ("vshape", 3, &[(0, 1), (0, 2)]),
    ("triangle", 3, &[(0, 1), (0, 2), (1, 2)]),
    ("4-cycle", 4, &[(0, 1), (0, 3), (1, 2), (2, 3)]),
    ("4-clique", 4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
];

impl Motif {
    /// Builds a motif from an edge list; `v` is one more than the largest
    /// endpoint. Edges are normalized to `(lo, hi)` and sorted.
    pub fn from_edges(edges: &[(usize, usize)]) -> Result<Self> {
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(Error::UnsupportedMotif(format!("self-loop at {a}")));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        norm.dedup();
        if norm.is_empty() {
            return Err(Error::UnsupportedMotif("motif needs at least one edge".into()));
        }
        let v = norm.iter().map(|&(_, b)| b).max().unwrap_or(0) + 1;
        if v > MAX_MOTIF_NODES {
            return Err(Error::UnsupportedMotif(format!(
                "{v} nodes exceeds the limit of {MAX_MOTIF_NODES}"
            )));
        }
        let mut used = vec![false; v];
        for &(a, b) in &norm {
            used[a] = true;
            used[b] = true;
        }
        if let Some(k) = used.iter().position(|u| !u) {
            return Err(Error::UnsupportedMotif(format!("node {k} has no edges")));
        }
        let preset = PRESETS.iter().find(|(_, pv, pe)| *pv == v && *pe == norm.as_slice()).map(|p| p.0);
        Ok(Self { v, edges: norm, root: None, preset })
    }

    pub fn preset(name: &str) -> Result<Self> {
        let &(_, _, edges) = PRESETS
            .iter()
            .find(|(p, _, _)| *p == name)
            .ok_or_else(|| Error::UnsupportedMotif(format!("unknown preset {name:?}")))?;
        Self::from_edges(edges)
    }

    pub fn edge() -> Self {
        Self::preset("edge").expect("preset")
    }

    /// Path on three nodes with centre 0.
    pub fn vshape() -> Self {
        Self::preset("vshape").expect("preset")
    }

    pub fn triangle() -> Self {
        Self::preset("triangle").expect("preset")
    }

    pub fn four_cycle() -> Self {
        Self::preset("4-cycle").expect("preset")
    }

    pub fn four_clique() -> Self {
        Self::preset("4-clique").expect("preset")
    }

    /// Same motif with `root` designated.
    pub fn rooted(mut self, root: usize) -> Result<Self> {
        if root >= self.v {
            return Err(Error::UnsupportedMotif(format!("root {root} out of range")));
        }
        self.root = Some(root);
        Ok(self)
    }

    pub fn unrooted(mut self) -> Self {
        self.root = None;
        self
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn e(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn degree(&self, k: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == k || b == k).count()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = 1u32;
        let mut changed = true;
        while changed {
            changed = false;
            for &(a, b) in &self.edges {
                let (ia, ib) = (seen >> a & 1, seen >> b & 1);
                if ia != ib {
                    seen |= 1 << a | 1 << b;
                    changed = true;
                }
            }
        }
        seen.count_ones() as usize == self.v
    }

    /// `max e(S)/|S|` over vertex subsets `S`, by exhaustive scan.
    pub fn m_density(&self) -> f64 {
        let mut best = 0.0f64;
        for s in 1u32..(1 << self.v) {
            let e = self.edges.iter().filter(|&&(a, b)| s >> a & 1 == 1 && s >> b & 1 == 1).count();
            best = best.max(e as f64 / s.count_ones() as f64);
        }
        best
    }

    /// Distinct labeled copies of the motif on `0..v`, as pair masks. For a
    /// rooted motif only copies placing the root at node 0 are produced.
    pub(crate) fn labeled_copies(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for perm in permutations(self.v) {
            if let Some(r) = self.root {
                if perm[r] != 0 {
                    continue;
                }
            }
            let mask = self
                .edges
                .iter()
                .fold(0u32, |m, &(a, b)| m | 1 << pair_index(self.v, perm[a], perm[b]));
            out.push(mask);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Canonical (minimum) pair mask over relabelings; rooted motifs keep the
    /// root at node 0. Equal keys mean isomorphic (root-preserving) motifs.
    pub fn canonical_key(&self) -> (usize, bool, u32) {
        let key = self.labeled_copies().into_iter().min().unwrap_or(0);
        (self.v, self.root.is_some(), key)
    }

    pub fn is_isomorphic(&self, other: &Motif) -> bool {
        self.canonical_key() == other.canonical_key()
    }

    pub(crate) fn kind(&self) -> MotifKind {
        let edge_like = |m: &Motif| self.v == m.v && self.unrooted_key() == m.canonical_key();
        match self.v {
            2 => MotifKind::Edge,
            3 if edge_like(&Motif::triangle()) => MotifKind::Triangle,
            3 if edge_like(&Motif::vshape()) => match self.root {
                Some(r) if self.degree(r) == 2 => MotifKind::VShapeCentre,
                Some(_) => MotifKind::VShapeLeaf,
                None => MotifKind::VShape,
            },
            _ => MotifKind::General,
        }
    }

    fn unrooted_key(&self) -> (usize, bool, u32) {
        self.clone().unrooted().canonical_key()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum MotifKind {
    Edge,
    VShape,
    VShapeCentre,
    VShapeLeaf,
    Triangle,
    General,
}

/// Index of the pair `{a, b}` in the row-major upper triangle of a `v`-node graph.
#[inline]
pub(crate) fn pair_index(v: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    a * (2 * v - a - 1) / 2 + (b - a - 1)
}

/// All permutations of `0..v` in lexicographic order.
pub(crate) fn permutations(v: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                rec(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(v), &mut vec![false; v], &mut out);
    out
}

impl fmt::Display for Motif {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.preset {
            Some(name) => f.write_str(name)?,
            None => {
                let parts: Vec<String> = self.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
                f.write_str(&parts.join(","))?;
            }
        }
        if let Some(r) = self.root {
            write!(f, "@{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Motif {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Motif({self})")
    }
}

/// Accepts a preset name (`edge`, `vshape`, `triangle`, `4-cycle`, `4-clique`)
/// or an edge list like `0-1,1-2,2-3`, optionally followed by `@root`.
impl FromStr for Motif {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, root) = match s.rsplit_once('@') {
            Some((body, r)) => {
                let r = r
                    .parse::<usize>()
                    .map_err(|_| Error::UnsupportedMotif(format!("bad root in {s:?}")))?;
                (body, Some(r))
            }
            None => (s, None),
        };
        let motif = if PRESETS.iter().any(|(p, _, _)| *p == body) {
            Motif::preset(body)?
        } else {
            let mut edges = Vec::new();
            for part in body.split(',') {
                let (a, b) = part
                    .split_once('-')
                    .ok_or_else(|| Error::UnsupportedMotif(format!("bad edge {part:?}")))?;
                let parse = |t: &str| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::UnsupportedMotif(format!("bad node {t:?}")))
                };
                edges.push((parse(a)?, parse(b)?));
            }
            Motif::from_edges(&edges)?
        };
        match root {
            Some(r) => motif.rooted(r),
            None => Ok(motif),
        }
    }
}

impl<'de> Deserialize<'de> for Motif {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<Motif> for String {
    fn from(m: Motif) -> String {
        m.to_string()
    }
}
