use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bootstrap::{CiKind, TwoLevelConfig};
use crate::error::{Error, Result};
use crate::graph::{level, SeedSpec};
use crate::models::{DcsbmParams, Estimator, Model};
use crate::netstats::StatisticSpec;

/// Above this clipped fraction of pairs a simulation model is flagged.
pub const CLIP_WARN_FRACTION: f64 = 0.01;

/// Law of the degree parameters before rescaling to mean 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum ThetaLaw {
    Uniform { low: f64, high: f64 },
    /// Density proportional to `x^{-(alpha + 1)}` on `[1, inf)`.
    Pareto { alpha: f64 },
    Constant,
}

impl Default for ThetaLaw {
    fn default() -> Self {
        ThetaLaw::Uniform { low: 0.2, high: 1.0 }
    }
}

/// Desired average expected degree: a number, or `{"log_n_multiple": c}` for `c log n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TargetDegree {
    Value(f64),
    LogMultiple { log_n_multiple: f64 },
}

impl TargetDegree {
    pub fn resolve(&self, n: usize) -> f64 {
        match *self {
            TargetDegree::Value(v) => v,
            TargetDegree::LogMultiple { log_n_multiple } => log_n_multiple * (n as f64).ln(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelLayout {
    /// `K` contiguous blocks of `n / K` nodes.
    Equal,
    Explicit(Vec<usize>),
}

fn default_levels() -> Vec<f64> {
    vec![0.95]
}

fn default_kinds() -> Vec<CiKind> {
    CiKind::ALL.to_vec()
}

fn default_truth_samples() -> usize {
    50_000
}

fn default_true() -> bool {
    true
}

/// A complete simulation study. Defaults are the desk-scale preset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub n: usize,
    pub k: usize,
    /// Row-major `k x k` block matrix.
    pub block_matrix: Vec<f64>,
    #[serde(default)]
    pub theta_law: ThetaLaw,
    pub target_lambda: TargetDegree,
    #[serde(default = "default_layout")]
    pub label_layout: LabelLayout,
    pub root_seed: u64,
    pub b1: usize,
    pub b2: usize,
    pub outer_repetitions: usize,
    pub estimator: Estimator,
    pub statistics: Vec<StatisticSpec>,
    /// Nominal coverages to evaluate, each on the same runs.
    #[serde(default = "default_levels")]
    pub alphas: Vec<f64>,
    #[serde(default = "default_kinds")]
    pub ci_kinds: Vec<CiKind>,
    /// Monte Carlo draws for `mu(P)` when no closed form exists.
    #[serde(default = "default_truth_samples")]
    pub truth_samples: usize,
    /// Use closed forms for `mu` where available.
    #[serde(default = "default_true")]
    pub analytic_mu: bool,
    /// Keep every repetition's intervals in the report.
    #[serde(default)]
    pub keep_repetitions: bool,
}

fn default_layout() -> LabelLayout {
    LabelLayout::Equal
}

impl SimulationConfig {
    /// The desk-scale study: `n = 300`, three blocks with `B = (5 1 1; 1 5 1; 1 1 5)`,
    /// uniform theta, `lambda = 2 log n`, `B1 = B2 = 200`, 250 repetitions,
    /// DCSBM refits with spectral labels.
    pub fn desk_scale(statistics: Vec<StatisticSpec>) -> Self {
        Self {
            n: 300,
            k: 3,
            block_matrix: vec![5.0, 1.0, 1.0, 1.0, 5.0, 1.0, 1.0, 1.0, 5.0],
            theta_law: ThetaLaw::default(),
            target_lambda: TargetDegree::LogMultiple { log_n_multiple: 2.0 },
            label_layout: LabelLayout::Equal,
            root_seed: 2024,
            b1: 200,
            b2: 200,
            outer_repetitions: 250,
            estimator: Estimator::Dcsbm { labels: crate::models::LabelSource::Spectral { k: 3, tau: None } },
            statistics,
            alphas: default_levels(),
            ci_kinds: default_kinds(),
            truth_samples: default_truth_samples(),
            analytic_mu: true,
            keep_repetitions: false,
        }
    }

    /// The full-scale study: `n = 600` and 1000 replicates at every level.
    pub fn full_scale(statistics: Vec<StatisticSpec>) -> Self {
        Self { n: 600, b1: 1000, b2: 1000, outer_repetitions: 1000, ..Self::desk_scale(statistics) }
    }

    pub fn seed(&self) -> SeedSpec {
        SeedSpec::new(self.root_seed)
    }

    pub fn two_level(&self) -> TwoLevelConfig {
        TwoLevelConfig { b1: self.b1, b2: self.b2, analytic: self.analytic_mu }
    }

    pub fn labels(&self) -> Result<Vec<usize>> {
        match &self.label_layout {
            LabelLayout::Equal => {
                if self.k == 0 || self.n % self.k != 0 {
                    return Err(Error::InvalidArgument(format!("n = {} not divisible by K = {}", self.n, self.k)));
                }
                let size = self.n / self.k;
                Ok((0..self.n).map(|i| i / size).collect())
            }
            LabelLayout::Explicit(l) if l.len() == self.n => Ok(l.clone()),
            LabelLayout::Explicit(l) => {
                Err(Error::InvalidArgument(format!("{} explicit labels for n = {}", l.len(), self.n)))
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let lambda = self.target_lambda.resolve(self.n);
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidArgument(format!("target average degree {lambda} must be positive")));
        }
        if self.block_matrix.len() != self.k * self.k {
            return Err(Error::InvalidArgument(format!("block matrix needs {} entries", self.k * self.k)));
        }
        if self.outer_repetitions == 0 || self.b1 < 2 {
            return Err(Error::InvalidArgument("need at least one repetition and B1 >= 2".into()));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(Error::Domain(*a));
        }
        self.labels().map(|_| ())
    }
}

/// The true model of a study together with its frozen parameters.
#[derive(Debug, Clone)]
pub struct SimulationModel {
    pub model: Arc<Model>,
    pub params: DcsbmParams,
    pub clip_count: usize,
    /// More than 1% of pairs were clipped.
    pub clip_warning: bool,
}

/// Draws theta once (stream `(THETA, 0)`), rescales it to mean 1 and solves
/// for `rho` so the unclipped average expected degree hits the target.
pub fn build_simulation_model(cfg: &SimulationConfig) -> Result<SimulationModel> {
    cfg.validate()?;
    let n = cfg.n;
    let labels = cfg.labels()?;
    let mut rng = cfg.seed().stream(level::THETA, 0);
    let mut theta: Vec<f64> = (0..n)
        .map(|_| match cfg.theta_law {
            ThetaLaw::Uniform { low, high } => low + (high - low) * rng.random::<f64>(),
            ThetaLaw::Pareto { alpha } => (1.0 - rng.random::<f64>()).powf(-1.0 / alpha),
            ThetaLaw::Constant => 1.0,
        })
        .collect();
    let mean = theta.iter().sum::<f64>() / n as f64;
    if !(mean.is_finite() && mean > 0.0) {
        return Err(Error::InvalidArgument("theta law produced a non-positive mean".into()));
    }
    theta.iter_mut().for_each(|t| *t /= mean);

    let k = cfg.k;
    let b = &cfg.block_matrix;
    let mut sums = vec![0.0; k];
    let mut diagonal = 0.0;
    for (&g, &t) in labels.iter().zip(&theta) {
        sums[g] += t;
        diagonal += b[g * k + g] * t * t;
    }
    let mut full = 0.0;
    for r in 0..k {
        for c in 0..k {
            full += b[r * k + c] * sums[r] * sums[c];
        }
    }
    let unit_degree = (full - diagonal) / n as f64;
    if unit_degree <= 0.0 {
        return Err(Error::DegenerateModel("target degree unreachable: zero expected degree at rho = 1".into()));
    }
    let rho = cfg.target_lambda.resolve(n) / unit_degree;
    let params = DcsbmParams::new(labels, k, b.clone(), theta, rho)?;
    let model = Model::dcsbm(params.clone());
    let clip_count = model.clip_count();
    let pairs = n * (n - 1) / 2;
    let clip_warning = clip_count as f64 > CLIP_WARN_FRACTION * pairs as f64;
    if clip_warning {
        log::warn!("{clip_count} of {pairs} pairs clipped to probability 1");
    }
    Ok(SimulationModel { model: Arc::new(model), params, clip_count, clip_warning })
}
