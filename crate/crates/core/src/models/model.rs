use std::sync::{Arc, OnceLock};

use rand::RngCore;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::chung_lu::{estimate_chung_lu, ChungLuParams};
use super::dcsbm::{estimate_dcsbm, estimate_sbm, DcsbmParams};
use super::spectral::{estimate_spectral, spectral_cluster, SpectralEstimate};
use crate::error::{Error, Result};
use crate::graph::{AdjacencyMatrix, EdgeProbMatrix, SeedSpec};
use crate::netstats::{analytic_mu, StatisticSpec};

/// An explicit probability matrix stored as its upper triangle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseParams {
    pub n: usize,
    /// Row-major upper triangle, `n (n - 1) / 2` entries.
    pub upper: Vec<f64>,
}

/// Parameters of a model family; serialized with a `family` tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ModelParams {
    Dense(DenseParams),
    ChungLu(ChungLuParams),
    Dcsbm(DcsbmParams),
    Spectral(SpectralEstimate),
}

/// A fixed edge-probability model. The probability matrix is built on first use.
#[derive(Debug)]
pub struct Model {
    params: ModelParams,
    probs: OnceLock<EdgeProbMatrix>,
}

impl Clone for Model {
    fn clone(&self) -> Self {
        Self { params: self.params.clone(), probs: self.probs.clone() }
    }
}

impl PartialEq for Model {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params
    }
}

impl Model {
    pub fn new(params: ModelParams) -> Result<Self> {
        if let ModelParams::Dense(d) = &params {
            if d.upper.len() != d.n * d.n.saturating_sub(1) / 2 {
                return Err(Error::InvalidProbabilities(format!(
                    "dense model with n = {} needs {} upper entries",
                    d.n,
                    d.n * d.n.saturating_sub(1) / 2
                )));
            }
            if let Some(v) = d.upper.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::InvalidProbabilities(format!("entry {v} outside [0, 1]")));
            }
        }
        Ok(Self { params, probs: OnceLock::new() })
    }

    /// Wraps an already materialized matrix.
    pub fn from_matrix(p: EdgeProbMatrix) -> Self {
        let n = p.n();
        let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            upper.extend_from_slice(&p.row(i)[i + 1..]);
        }
        let probs = OnceLock::new();
        let _ = probs.set(p);
        Self { params: ModelParams::Dense(DenseParams { n, upper }), probs }
    }

    pub fn chung_lu(params: ChungLuParams) -> Self {
        Self { params: ModelParams::ChungLu(params), probs: OnceLock::new() }
    }

    pub fn dcsbm(params: DcsbmParams) -> Self {
        Self { params: ModelParams::Dcsbm(params), probs: OnceLock::new() }
    }

    pub fn spectral(params: SpectralEstimate) -> Self {
        Self { params: ModelParams::Spectral(params), probs: OnceLock::new() }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        match &self.params {
            ModelParams::Dense(d) => d.n,
            ModelParams::ChungLu(c) => c.n(),
            ModelParams::Dcsbm(d) => d.n(),
            ModelParams::Spectral(s) => s.n,
        }
    }

    pub fn probs(&self) -> &EdgeProbMatrix {
        self.probs.get_or_init(|| match &self.params {
            ModelParams::Dense(d) => {
                let n = d.n;
                let mut idx = 0;
                let mut rows = vec![0.0; n * n];
                for i in 0..n {
                    for j in (i + 1)..n {
                        rows[i * n + j] = d.upper[idx];
                        rows[j * n + i] = d.upper[idx];
                        idx += 1;
                    }
                }
                EdgeProbMatrix::new(n, rows).expect("validated at construction")
            }
            ModelParams::ChungLu(c) => c.materialize(),
            ModelParams::Dcsbm(d) => d.materialize(),
            ModelParams::Spectral(s) => s.materialize(),
        })
    }

    pub fn clip_count(&self) -> usize {
        self.probs().clip_count()
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> AdjacencyMatrix {
        self.probs().sample(rng)
    }

    /// `E[T]` under this model for statistics with a closed form. Triangle
    /// counts use `O(n)` family formulas when no entry is clipped.
    pub fn expected(&self, stat: &StatisticSpec) -> Result<f64> {
        if let Some(v) = self.fast_triangles(stat) {
            return Ok(v);
        }
        analytic_mu(stat, self.probs())
    }

    fn fast_triangles(&self, stat: &StatisticSpec) -> Option<f64> {
        let n = self.n();
        let (rooted, density) = match stat {
            StatisticSpec::SubgraphCount(m) if m.is_isomorphic(&crate::netstats::Motif::triangle()) => (None, false),
            StatisticSpec::TriangleDensity if n >= 3 => (None, true),
            StatisticSpec::RootedSubgraphCount { motif, node }
                if *node < n && motif.is_isomorphic(&crate::netstats::Motif::triangle().rooted(0).ok()?) =>
            {
                (Some(*node), false)
            }
            _ => return None,
        };
        let value = match (&self.params, rooted) {
            (ModelParams::ChungLu(c), None) => c.expected_triangles(),
            (ModelParams::ChungLu(c), Some(i)) => c.expected_rooted_triangles(i),
            (ModelParams::Dcsbm(d), None) => d.expected_triangles(),
            (ModelParams::Dcsbm(d), Some(i)) => d.expected_rooted_triangles(i),
            _ => None,
        }?;
        let n = n as f64;
        Some(if density { value / (n * (n - 1.0) * (n - 2.0) / 6.0) } else { value })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.params)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::new(serde_json::from_str(text)?)
    }
}

impl Serialize for Model {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.params.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Model {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let params = ModelParams::deserialize(d)?;
        Model::new(params).map_err(serde::de::Error::custom)
    }
}

/// Where community labels come from for block-model estimators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelSource {
    /// Fixed labels; `k` is one more than the largest label.
    Given(Vec<usize>),
    /// Regularized spectral clustering on the graph being fitted.
    Spectral { k: usize, tau: Option<f64> },
}

impl LabelSource {
    fn resolve(&self, a: &AdjacencyMatrix, seed: SeedSpec) -> Result<(Vec<usize>, usize)> {
        match self {
            LabelSource::Given(labels) => {
                let k = labels.iter().copied().max().map_or(0, |m| m + 1);
                Ok((labels.clone(), k))
            }
            LabelSource::Spectral { k, tau } => Ok((spectral_cluster(a, *k, *tau, seed)?, *k)),
        }
    }
}

/// How `P` is estimated from an observed graph. The same estimator is used
/// at every bootstrap level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Estimator {
    /// Returns the true model regardless of the data.
    Oracle {
        #[serde(skip)]
        model: Option<Arc<Model>>,
    },
    /// Chung-Lu MLE; `p` estimated when absent.
    ChungLu { p: Option<f64> },
    Dcsbm { labels: LabelSource },
    Sbm { labels: LabelSource },
    /// Truncated eigendecomposition of rank `k`.
    Svd { k: usize },
}

impl Estimator {
    pub fn oracle(model: Arc<Model>) -> Self {
        Estimator::Oracle { model: Some(model) }
    }

    /// Attaches the truth to an oracle estimator; other kinds are unchanged.
    pub fn with_truth(self, truth: &Arc<Model>) -> Self {
        match self {
            Estimator::Oracle { .. } => Estimator::oracle(Arc::clone(truth)),
            other => other,
        }
    }

    pub fn fit(&self, a: &AdjacencyMatrix, seed: SeedSpec) -> Result<Arc<Model>> {
        Ok(match self {
            Estimator::Oracle { model } => Arc::clone(
                model.as_ref().ok_or_else(|| Error::InvalidArgument("oracle estimator without a model".into()))?,
            ),
            Estimator::ChungLu { p } => Arc::new(Model::chung_lu(estimate_chung_lu(a, *p)?)),
            Estimator::Dcsbm { labels } => {
                let (g, k) = labels.resolve(a, seed)?;
                Arc::new(Model::dcsbm(estimate_dcsbm(a, &g, k)?))
            }
            Estimator::Sbm { labels } => {
                let (g, k) = labels.resolve(a, seed)?;
                Arc::new(Model::dcsbm(estimate_sbm(a, &g, k)?))
            }
            Estimator::Svd { k } => Arc::new(Model::spectral(estimate_spectral(a, *k)?)),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Estimator::Oracle { .. } => "oracle",
            Estimator::ChungLu { .. } => "chung_lu",
            Estimator::Dcsbm { .. } => "dcsbm",
            Estimator::Sbm { .. } => "sbm",
            Estimator::Svd { .. } => "svd",
        }
    }
}
