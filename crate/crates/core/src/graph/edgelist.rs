use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::adjacency::AdjacencyMatrix;
use crate::error::{Error, Result};

/// Mapping from dense node indices back to the labels found in the input.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeLabels {
    labels: Vec<String>,
}

impl NodeLabels {
    /// Labels `"0"`, `"1"`, ... for a graph without an external naming.
    pub fn identity(n: usize) -> Self {
        Self { labels: (0..n).map(|i| i.to_string()).collect() }
    }

    /// Labels in index order; duplicates are allowed but `index_of` finds the first.
    pub fn from_labels(labels: Vec<String>) -> Self {
        Self { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Index of `label`, if it appeared in the input.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn as_slice(&self) -> &[String] {
        &self.labels
    }
}

/// Parses whitespace-separated node pairs.
///
/// Blank lines and lines starting with `#` are skipped. Duplicate edges
/// collapse; self-loop lines are ignored entirely (their label is not
/// registered). Labels map to `0..n` in order of first appearance.
pub fn read_edge_list<'a>(text: &'a str) -> Result<(AdjacencyMatrix, NodeLabels)> {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (u, v) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(u), Some(v), None) => (u, v),
            _ => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("expected two node labels, got {trimmed:?}"),
                })
            }
        };
        if u == v {
            continue;
        }
        let mut id = |s: &'a str| -> usize {
            *index.entry(s).or_insert_with(|| {
                labels.push(s.to_owned());
                labels.len() - 1
            })
        };
        let a = id(u);
        let b = id(v);
        pairs.push((a, b));
    }
    let n = labels.len();
    Ok((AdjacencyMatrix::from_edges(n, pairs), NodeLabels { labels }))
}

pub fn read_edge_list_file(path: impl AsRef<Path>) -> Result<(AdjacencyMatrix, NodeLabels)> {
    let text = std::fs::read_to_string(path)?;
    read_edge_list(&text)
}

/// Writes one `i j` line per edge (`i < j`, lexicographic order).
pub fn write_edge_list(a: &AdjacencyMatrix) -> String {
    let mut out = String::new();
    for (i, j) in a.edges() {
        let _ = writeln!(out, "{i} {j}");
    }
    out
}

/// As [`write_edge_list`] but using the original labels.
pub fn write_labeled_edge_list(a: &AdjacencyMatrix, labels: &NodeLabels) -> String {
    let mut out = String::new();
    for (i, j) in a.edges() {
        let _ = writeln!(out, "{} {}", labels.label(i), labels.label(j));
    }
    out
}
