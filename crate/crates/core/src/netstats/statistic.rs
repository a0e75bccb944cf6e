use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::counts::{rooted_subgraph_count, rooted_triangle_count, subgraph_count, triangle_count, vshape_count};
use super::moments::{expected_subgraph_count, expected_triangles, MAX_EXPECTATION_NODES};
use super::motif::Motif;
use super::paths;
use crate::error::{Error, Result};
use crate::graph::{AdjacencyMatrix, EdgeProbMatrix};

/// A network statistic `T(A)`.
///
/// The string form (also used by serde) is one of `average_degree`,
/// `node_count`, `triangle_density`, `transitivity`, `assortativity`,
/// `average_path_length`, `diameter`, `count:<motif>`,
/// `rooted_count:<motif>:<node>`, `local_clustering:<node>`,
/// `betweenness:<node>`, `closeness:<node>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum StatisticSpec {
    AverageDegree,
    /// Number of nodes; constant under every model.
    NodeCount,
    SubgraphCount(Motif),
    RootedSubgraphCount { motif: Motif, node: usize },
    TriangleDensity,
    Transitivity,
    LocalClustering(usize),
    Assortativity,
    AveragePathLength,
    Diameter,
    Betweenness(usize),
    Closeness(usize),
}

impl StatisticSpec {
    pub fn triangles() -> Self {
        Self::SubgraphCount(Motif::triangle())
    }

    pub fn rooted_triangles(node: usize) -> Self {
        Self::RootedSubgraphCount { motif: Motif::triangle().rooted(0).expect("root"), node }
    }

    /// True for the count family, whose expectation has a closed form.
    pub fn analytic_mu_available(&self) -> bool {
        matches!(
            self,
            Self::AverageDegree
                | Self::NodeCount
                | Self::SubgraphCount(_)
                | Self::RootedSubgraphCount { .. }
                | Self::TriangleDensity
        )
    }

    /// Whether [`analytic_mu`] can evaluate this statistic; general motifs
    /// above four nodes are excluded by cost.
    pub fn has_closed_form(&self) -> bool {
        match self {
            Self::SubgraphCount(m) | Self::RootedSubgraphCount { motif: m, .. } => {
                m.v() <= MAX_EXPECTATION_NODES
            }
            other => other.analytic_mu_available(),
        }
    }

    /// Node referenced by the statistic, if any.
    pub fn node(&self) -> Option<usize> {
        match *self {
            Self::RootedSubgraphCount { node, .. }
            | Self::LocalClustering(node)
            | Self::Betweenness(node)
            | Self::Closeness(node) => Some(node),
            _ => None,
        }
    }

    pub fn evaluate(&self, a: &AdjacencyMatrix) -> Result<f64> {
        let n = a.n();
        if n == 0 {
            return Err(Error::UndefinedStatistic("empty graph".into()));
        }
        if let Some(i) = self.node() {
            if i >= n {
                return Err(Error::InvalidArgument(format!("node {i} out of range for n = {n}")));
            }
        }
        match self {
            Self::AverageDegree => Ok(2.0 * a.edge_count() as f64 / n as f64),
            Self::NodeCount => Ok(n as f64),
            Self::SubgraphCount(m) => Ok(subgraph_count(a, m)? as f64),
            Self::RootedSubgraphCount { motif, node } => Ok(rooted_subgraph_count(a, motif, *node)? as f64),
            Self::TriangleDensity => {
                if n < 3 {
                    return Err(Error::UndefinedStatistic("triangle density needs n >= 3".into()));
                }
                Ok(triangle_count(a) as f64 / choose3(n))
            }
            Self::Transitivity => transitivity(a),
            Self::LocalClustering(i) => local_clustering(a, *i),
            Self::Assortativity => degree_assortativity(a),
            Self::AveragePathLength => paths::average_path_length(a),
            Self::Diameter => paths::diameter(a).map(|d| d as f64),
            Self::Betweenness(i) => paths::betweenness(a, *i),
            Self::Closeness(i) => paths::closeness(a, *i),
        }
    }
}

/// Evaluates several statistics on one graph, sharing the all-pairs
/// betweenness pass when more than one node is requested.
pub fn evaluate_all(stats: &[StatisticSpec], a: &AdjacencyMatrix) -> Vec<Result<f64>> {
    let wanted = stats.iter().filter(|s| matches!(s, StatisticSpec::Betweenness(_))).count();
    let shared = (wanted > 1 && a.n() > 0).then(|| paths::betweenness_all(a));
    stats
        .iter()
        .map(|s| match (s, &shared) {
            (StatisticSpec::Betweenness(i), Some(all)) if *i < all.len() => Ok(all[*i]),
            _ => s.evaluate(a),
        })
        .collect()
}

/// `E_P[T]` for statistics with a closed form.
pub fn analytic_mu(stat: &StatisticSpec, p: &EdgeProbMatrix) -> Result<f64> {
    let n = p.n();
    match stat {
        StatisticSpec::AverageDegree => Ok(p.expected_degree()),
        StatisticSpec::NodeCount => Ok(n as f64),
        StatisticSpec::SubgraphCount(m) => expected_subgraph_count(p, m, None),
        StatisticSpec::RootedSubgraphCount { motif, node } => expected_subgraph_count(p, motif, Some(*node)),
        StatisticSpec::TriangleDensity if n >= 3 => Ok(expected_triangles(p) / choose3(n)),
        other => Err(Error::NoAnalyticMu(other.to_string())),
    }
}

/// `3 T_Δ / sum_i C(d_i, 2)`.
pub fn transitivity(a: &AdjacencyMatrix) -> Result<f64> {
    let wedges = vshape_count(a);
    if wedges == 0 {
        return Err(Error::UndefinedStatistic("transitivity with no paths of length two".into()));
    }
    Ok(3.0 * triangle_count(a) as f64 / wedges as f64)
}

pub fn local_clustering(a: &AdjacencyMatrix, i: usize) -> Result<f64> {
    let d = a.degree(i);
    if d < 2 {
        return Err(Error::UndefinedStatistic(format!("local clustering at node {i} with degree {d}")));
    }
    Ok(rooted_triangle_count(a, i) as f64 / (d * (d - 1) / 2) as f64)
}

/// Pearson correlation of the degrees at the two ends of each edge, every
/// edge counted in both directions.
pub fn degree_assortativity(a: &AdjacencyMatrix) -> Result<f64> {
    let m = a.edge_count();
    if m == 0 {
        return Err(Error::UndefinedStatistic("assortativity of an edgeless graph".into()));
    }
    let (mut sxy, mut sx, mut sxx) = (0.0, 0.0, 0.0);
    for (i, j) in a.edges() {
        let (x, y) = (a.degree(i) as f64, a.degree(j) as f64);
        sxy += x * y;
        sx += (x + y) / 2.0;
        sxx += (x * x + y * y) / 2.0;
    }
    let m = m as f64;
    let mean = sx / m;
    let var = sxx / m - mean * mean;
    if var <= 1e-12 * (sxx / m) {
        return Err(Error::UndefinedStatistic("assortativity with constant endpoint degrees".into()));
    }
    Ok((sxy / m - mean * mean) / var)
}

fn choose3(n: usize) -> f64 {
    let n = n as f64;
    n * (n - 1.0) * (n - 2.0) / 6.0
}

impl fmt::Display for StatisticSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::AverageDegree => f.write_str("average_degree"),
            Self::NodeCount => f.write_str("node_count"),
            Self::SubgraphCount(m) => write!(f, "count:{m}"),
            Self::RootedSubgraphCount { motif, node } => write!(f, "rooted_count:{motif}:{node}"),
            Self::TriangleDensity => f.write_str("triangle_density"),
            Self::Transitivity => f.write_str("transitivity"),
            Self::LocalClustering(i) => write!(f, "local_clustering:{i}"),
            Self::Assortativity => f.write_str("assortativity"),
            Self::AveragePathLength => f.write_str("average_path_length"),
            Self::Diameter => f.write_str("diameter"),
            Self::Betweenness(i) => write!(f, "betweenness:{i}"),
            Self::Closeness(i) => write!(f, "closeness:{i}"),
        }
    }
}

impl FromStr for StatisticSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("unknown statistic {s:?}"));
        let node = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s, None),
        };
        Ok(match (head, rest) {
            ("average_degree", None) => Self::AverageDegree,
            ("node_count", None) => Self::NodeCount,
            ("triangle_density", None) => Self::TriangleDensity,
            ("transitivity", None) => Self::Transitivity,
            ("assortativity", None) => Self::Assortativity,
            ("average_path_length", None) => Self::AveragePathLength,
            ("diameter", None) => Self::Diameter,
            ("count", Some(m)) => {
                let motif: Motif = m.parse()?;
                if motif.root().is_some() {
                    return Err(Error::InvalidArgument(format!("{s:?}: use rooted_count for rooted motifs")));
                }
                Self::SubgraphCount(motif)
            }
            ("rooted_count", Some(r)) => {
                let (m, i) = r.rsplit_once(':').ok_or_else(bad)?;
                let mut motif: Motif = m.parse()?;
                if motif.root().is_none() {
                    motif = motif.rooted(0)?;
                }
                Self::RootedSubgraphCount { motif, node: node(i)? }
            }
            ("local_clustering", Some(i)) => Self::LocalClustering(node(i)?),
            ("betweenness", Some(i)) => Self::Betweenness(node(i)?),
            ("closeness", Some(i)) => Self::Closeness(node(i)?),
            _ => return Err(bad()),
        })
    }
}

impl TryFrom<String> for StatisticSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<StatisticSpec> for String {
    fn from(s: StatisticSpec) -> String {
        s.to_string()
    }
}
