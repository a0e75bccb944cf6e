use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::distribution::{
    estimate_mus, mean_variance, split_outcomes, transpose, BootstrapDistribution, MuEstimate, MuMethod,
};
use crate::error::{Error, Result};
use crate::graph::{level, AdjacencyMatrix, SeedSpec};
use crate::models::{Estimator, Model};
use crate::netstats::{evaluate_all, StatisticSpec};

/// Above this dropped fraction a result carries a warning.
pub const WARN_DROPPED_FRACTION: f64 = 0.10;
/// Above this dropped fraction a result is an error.
pub const MAX_DROPPED_FRACTION: f64 = 0.50;

/// Replicate counts for the two-level bootstrap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoLevelConfig {
    /// First-level replicates `B1`.
    pub b1: usize,
    /// Inner Monte Carlo draws `B2` for statistics evaluated without a closed form.
    pub b2: usize,
    /// Use the closed form for `mu` whenever one exists.
    pub analytic: bool,
}

impl Default for TwoLevelConfig {
    fn default() -> Self {
        Self { b1: 1000, b2: 1000, analytic: true }
    }
}

impl TwoLevelConfig {
    pub fn mu_method(&self, stat: &StatisticSpec) -> MuMethod {
        if self.analytic {
            MuMethod::auto(stat, self.b2)
        } else {
            MuMethod::MonteCarlo { samples: self.b2 }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelResult {
    pub statistic: StatisticSpec,
    pub observed: f64,
    /// `mu(P-hat)`.
    pub mu_hat: MuEstimate,
    /// `mu(P-hat-hat_b)` for every kept replicate, in replicate order.
    pub mu_hathat: Vec<MuEstimate>,
    /// `T(A_b)` for `A_b ~ P-hat`.
    pub first_level: BootstrapDistribution,
    pub bias_hat: f64,
    pub corrected_estimate: f64,
    pub second_level_mean: f64,
    pub second_level_variance: f64,
    pub second_level_values: Vec<f64>,
    /// Replicates whose refit or `mu` evaluation failed.
    pub dropped: usize,
    /// More than 10% of either level was dropped.
    pub warning: bool,
    pub b1: usize,
}

/// Two-level parametric bootstrap for one statistic.
pub fn two_level(
    a_obs: &AdjacencyMatrix,
    estimator: &Estimator,
    stat: &StatisticSpec,
    config: TwoLevelConfig,
    seed: SeedSpec,
) -> Result<TwoLevelResult> {
    two_level_multi(a_obs, estimator, std::slice::from_ref(stat), config, seed)?
        .pop()
        .expect("one statistic")
}

/// Two-level parametric bootstrap for several statistics sharing one set of
/// replicates and refits.
///
/// Fits `P-hat` to `a_obs` (seed `child(FIT, 0)`), evaluates `mu(P-hat)`
/// (seed `child(MU, 0)`), then for each `b < B1` samples `A_b` from stream
/// `(FIRST, b)`, records `T(A_b)`, refits with the same estimator (seed
/// `child(REFIT, b)`) and evaluates `mu(P-hat-hat_b)` (seed `child(INNER, b)`).
/// Replicates are reduced in index order, so the result does not depend on
/// the number of worker threads.
///
/// The outer error is a failure to fit `a_obs`; per-statistic errors cover
/// an undefined observed value and too many dropped replicates.
pub fn two_level_multi(
    a_obs: &AdjacencyMatrix,
    estimator: &Estimator,
    stats: &[StatisticSpec],
    config: TwoLevelConfig,
    seed: SeedSpec,
) -> Result<Vec<Result<TwoLevelResult>>> {
    if config.b1 < 2 {
        return Err(Error::InvalidArgument(format!("B1 = {} must be at least 2", config.b1)));
    }
    let p_hat = estimator.fit(a_obs, seed.child(level::FIT, 0))?;
    let methods: Vec<MuMethod> = stats.iter().map(|s| config.mu_method(s)).collect();
    let observed = evaluate_all(stats, a_obs);
    let mu_hat = estimate_mus(&p_hat, stats, &methods, seed.child(level::MU, 0));

    let replicates: Vec<(Vec<Result<f64>>, Vec<Result<MuEstimate>>)> = (0..config.b1 as u64)
        .into_par_iter()
        .map(|b| replicate(&p_hat, estimator, stats, &methods, seed, b))
        .collect();
    let (firsts, seconds): (Vec<_>, Vec<_>) = replicates.into_iter().unzip();
    let firsts = transpose(firsts, stats.len());
    let seconds = transpose(seconds, stats.len());

    Ok(stats
        .iter()
        .zip(observed)
        .zip(mu_hat)
        .zip(firsts.into_iter().zip(seconds))
        .map(|(((stat, obs), mu), (first, second))| assemble(stat, obs, mu, first, second, config.b1, seed))
        .collect())
}

fn replicate(
    p_hat: &Model,
    estimator: &Estimator,
    stats: &[StatisticSpec],
    methods: &[MuMethod],
    seed: SeedSpec,
    b: u64,
) -> (Vec<Result<f64>>, Vec<Result<MuEstimate>>) {
    let a = p_hat.sample(&mut seed.stream(level::FIRST, b));
    let first = evaluate_all(stats, &a);
    let second = match estimator.fit(&a, seed.child(level::REFIT, b)) {
        Ok(refit) => estimate_mus(&refit, stats, methods, seed.child(level::INNER, b)),
        Err(e) => {
            let msg = e.to_string();
            stats.iter().map(|_| Err(Error::DegenerateModel(msg.clone()))).collect()
        }
    };
    (first, second)
}

fn assemble(
    stat: &StatisticSpec,
    observed: Result<f64>,
    mu_hat: Result<MuEstimate>,
    first: Vec<Result<f64>>,
    second: Vec<Result<MuEstimate>>,
    b1: usize,
    seed: SeedSpec,
) -> Result<TwoLevelResult> {
    let observed = observed?;
    let mu_hat = mu_hat?;
    let (first_values, first_dropped) = split_outcomes(first)?;
    check_dropped(first_dropped, b1)?;
    let first_level = BootstrapDistribution::from_values(first_values, first_dropped, seed, level::FIRST)?;

    let mut mu_hathat = Vec::with_capacity(b1);
    let mut dropped = 0;
    for s in second {
        match s {
            Ok(m) => mu_hathat.push(m),
            Err(Error::UndefinedStatistic(_) | Error::DegenerateModel(_)) => dropped += 1,
            Err(e @ (Error::EmptyCommunity { .. } | Error::ZeroDegreeCommunity { .. } | Error::NoConvergence { .. })) => {
                log::debug!("replicate dropped: {e}");
                dropped += 1;
            }
            Err(e) => return Err(e),
        }
    }
    check_dropped(dropped, b1)?;
    if mu_hathat.is_empty() {
        return Err(Error::EmptyDistribution(dropped));
    }
    let second_level_values: Vec<f64> = mu_hathat.iter().map(|m| m.value).collect();
    let (second_level_mean, second_level_variance) = mean_variance(&second_level_values);
    let limit = WARN_DROPPED_FRACTION * b1 as f64;
    let warning = dropped as f64 > limit || first_dropped as f64 > limit;
    if warning {
        log::warn!("{stat}: dropped {first_dropped} first-level and {dropped} second-level replicates of {b1}");
    }
    Ok(TwoLevelResult {
        statistic: stat.clone(),
        observed,
        bias_hat: second_level_mean - mu_hat.value,
        corrected_estimate: 2.0 * mu_hat.value - second_level_mean,
        mu_hat,
        mu_hathat,
        first_level,
        second_level_mean,
        second_level_variance,
        second_level_values,
        dropped,
        warning,
        b1,
    })
}

fn check_dropped(dropped: usize, total: usize) -> Result<()> {
    if dropped as f64 > MAX_DROPPED_FRACTION * total as f64 {
        return Err(Error::TooManyDropped { dropped, total });
    }
    Ok(())
}

/// Wraps a shared model so it can be handed to an oracle estimator.
pub fn oracle_estimator(model: &Arc<Model>) -> Estimator {
    Estimator::oracle(Arc::clone(model))
}
