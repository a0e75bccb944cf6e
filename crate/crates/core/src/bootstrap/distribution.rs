use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{level, SeedSpec};
use crate::models::{Estimator, Model};
use crate::netstats::{evaluate_all, StatisticSpec};

/// Draws of a statistic under a fixed model, with undefined draws dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapDistribution {
    pub values: Vec<f64>,
    pub mean: f64,
    /// Unbiased sample variance; 0 for a single value.
    pub variance: f64,
    pub dropped_count: usize,
    pub root_seed: u64,
    pub level: u32,
}

impl BootstrapDistribution {
    /// Summarizes `values`; `dropped_count` replicates were discarded.
    pub fn from_values(values: Vec<f64>, dropped_count: usize, seed: SeedSpec, level: u32) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyDistribution(dropped_count));
        }
        let (mean, variance) = mean_variance(&values);
        Ok(Self { values, mean, variance, dropped_count, root_seed: seed.root_seed, level })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Replicates requested, kept plus dropped.
    pub fn requested(&self) -> usize {
        self.values.len() + self.dropped_count
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    pub fn sorted_values(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    /// One value per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.values.len() * 20);
        for v in &self.values {
            let _ = writeln!(out, "{v}");
        }
        out
    }
}

/// Mean and unbiased variance, summed in slice order. `values` is nonempty.
pub(crate) fn mean_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    // Shifting by the first value keeps constant samples exact.
    let base = values[0];
    let mean = base + values.iter().map(|v| v - base).sum::<f64>() / n;
    let variance = if values.len() > 1 {
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, variance)
}

/// Sorts per-replicate outcomes into kept values and a drop count.
/// Only undefined statistics are dropped; other errors propagate.
pub(crate) fn split_outcomes(outcomes: impl IntoIterator<Item = Result<f64>>) -> Result<(Vec<f64>, usize)> {
    let mut values = Vec::new();
    let mut dropped = 0;
    for o in outcomes {
        match o {
            Ok(v) => values.push(v),
            Err(Error::UndefinedStatistic(_)) => dropped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((values, dropped))
}

/// Direct parametric bootstrap: `T(A_b)` for `A_b ~ model`, `b < replicates`,
/// drawn from streams `(seed, FIRST, b)`.
pub fn bootstrap_distribution(
    model: &Model,
    stat: &StatisticSpec,
    replicates: usize,
    seed: SeedSpec,
) -> Result<BootstrapDistribution> {
    Ok(bootstrap_distributions(model, std::slice::from_ref(stat), replicates, seed)?
        .pop()
        .expect("one statistic"))
}

/// As [`bootstrap_distribution`] for several statistics on shared replicates.
pub fn bootstrap_distributions(
    model: &Model,
    stats: &[StatisticSpec],
    replicates: usize,
    seed: SeedSpec,
) -> Result<Vec<BootstrapDistribution>> {
    if replicates < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 replicates, got {replicates}")));
    }
    let model_probs = model.probs();
    let per_rep: Vec<Vec<Result<f64>>> = (0..replicates as u64)
        .into_par_iter()
        .map(|b| evaluate_all(stats, &model_probs.sample(&mut seed.stream(level::FIRST, b))))
        .collect();
    transpose(per_rep, stats.len())
        .into_iter()
        .map(|col| {
            let (values, dropped) = split_outcomes(col)?;
            BootstrapDistribution::from_values(values, dropped, seed, level::FIRST)
        })
        .collect()
}

pub(crate) fn transpose<T>(rows: Vec<Vec<T>>, width: usize) -> Vec<Vec<T>> {
    let mut cols: Vec<Vec<T>> = (0..width).map(|_| Vec::with_capacity(rows.len())).collect();
    for row in rows {
        for (c, v) in cols.iter_mut().zip(row) {
            c.push(v);
        }
    }
    cols
}

/// Refits `estimator` to each replicate `A_b ~ model`. Replicates come from
/// the same streams as [`bootstrap_distribution`]; the refit for `b` gets
/// the seed `seed.child(REFIT, b)`.
pub fn bootstrap_refits(
    model: &Model,
    estimator: &Estimator,
    replicates: usize,
    seed: SeedSpec,
) -> Vec<Result<Arc<Model>>> {
    let probs = model.probs();
    (0..replicates as u64)
        .into_par_iter()
        .map(|b| {
            let a = probs.sample(&mut seed.stream(level::FIRST, b));
            estimator.fit(&a, seed.child(level::REFIT, b))
        })
        .collect()
}

/// How `mu(model) = E_model[T]` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MuMethod {
    Analytic,
    MonteCarlo { samples: usize },
}

impl MuMethod {
    /// Closed form when one exists, otherwise `samples` Monte Carlo draws.
    pub fn auto(stat: &StatisticSpec, samples: usize) -> Self {
        if stat.has_closed_form() {
            MuMethod::Analytic
        } else {
            MuMethod::MonteCarlo { samples }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuEstimate {
    pub value: f64,
    pub method: MuMethod,
    /// Zero for the analytic method.
    pub mc_standard_error: f64,
}

/// `E_model[T]`. The Monte Carlo path averages `T` over draws from streams
/// `(seed, INNER, j)`; undefined draws are skipped.
pub fn estimate_mu(model: &Model, stat: &StatisticSpec, method: MuMethod, seed: SeedSpec) -> Result<MuEstimate> {
    estimate_mus(model, std::slice::from_ref(stat), &[method], seed)
        .pop()
        .expect("one statistic")
}

/// [`estimate_mu`] for several statistics. Monte Carlo statistics share draws,
/// using the largest requested sample count's streams as a common prefix.
pub fn estimate_mus(
    model: &Model,
    stats: &[StatisticSpec],
    methods: &[MuMethod],
    seed: SeedSpec,
) -> Vec<Result<MuEstimate>> {
    assert_eq!(stats.len(), methods.len());
    let mut out: Vec<Option<Result<MuEstimate>>> = stats
        .iter()
        .zip(methods)
        .map(|(s, m)| match m {
            MuMethod::Analytic => Some(analytic(model, s)),
            MuMethod::MonteCarlo { samples } if *samples < 2 => {
                Some(Err(Error::InvalidArgument(format!("Monte Carlo needs at least 2 samples, got {samples}"))))
            }
            MuMethod::MonteCarlo { .. } => None,
        })
        .collect();
    let mc: Vec<usize> = (0..stats.len()).filter(|&k| out[k].is_none()).collect();
    if !mc.is_empty() {
        let draws = mc
            .iter()
            .map(|&k| match methods[k] {
                MuMethod::MonteCarlo { samples } => samples,
                MuMethod::Analytic => 0,
            })
            .max()
            .unwrap_or(0);
        let mc_stats: Vec<StatisticSpec> = mc.iter().map(|&k| stats[k].clone()).collect();
        let probs = model.probs();
        let evaluate = |j: u64| evaluate_all(&mc_stats, &probs.sample(&mut seed.stream(level::INNER, j)));
        // Nested inside an already parallel outer loop the inner draws stay sequential.
        let per_draw: Vec<Vec<Result<f64>>> = if rayon::current_thread_index().is_some() {
            (0..draws as u64).map(evaluate).collect()
        } else {
            (0..draws as u64).into_par_iter().map(evaluate).collect()
        };
        for (slot, col) in mc.iter().zip(transpose(per_draw, mc_stats.len())) {
            let samples = match methods[*slot] {
                MuMethod::MonteCarlo { samples } => samples,
                MuMethod::Analytic => unreachable!(),
            };
            out[*slot] = Some(monte_carlo(col.into_iter().take(samples), samples));
        }
    }
    out.into_iter().map(|o| o.expect("filled")).collect()
}

fn analytic(model: &Model, stat: &StatisticSpec) -> Result<MuEstimate> {
    if !stat.analytic_mu_available() {
        return Err(Error::NoAnalyticMu(stat.to_string()));
    }
    Ok(MuEstimate { value: model.expected(stat)?, method: MuMethod::Analytic, mc_standard_error: 0.0 })
}

fn monte_carlo(draws: impl Iterator<Item = Result<f64>>, samples: usize) -> Result<MuEstimate> {
    let (values, dropped) = split_outcomes(draws)?;
    if values.is_empty() {
        return Err(Error::UndefinedStatistic(format!("all {dropped} inner draws undefined")));
    }
    let (mean, variance) = mean_variance(&values);
    Ok(MuEstimate {
        value: mean,
        method: MuMethod::MonteCarlo { samples },
        mc_standard_error: (variance / values.len() as f64).sqrt(),
    })
}
