use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{build_simulation_model, SimulationConfig};
use crate::bootstrap::{build_ci, estimate_mu, two_level_multi, CiInputs, CiKind, MuEstimate, MuMethod};
use crate::error::Result;
use crate::graph::{level, SeedSpec};
use crate::netstats::StatisticSpec;

/// `mu(P)` used to score coverage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthEntry {
    pub statistic: StatisticSpec,
    pub mu: MuEstimate,
}

/// One interval from one repetition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub kind: CiKind,
    pub alpha: f64,
    pub lower: f64,
    pub upper: f64,
    pub covered: bool,
}

/// Everything one repetition produced for one statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepetitionRecord {
    pub repetition: usize,
    pub statistic: StatisticSpec,
    pub observed: f64,
    pub mu_hat: f64,
    pub bias_hat: f64,
    pub corrected_estimate: f64,
    pub intervals: Vec<IntervalRecord>,
}

/// Aggregate over repetitions for one `(statistic, kind, alpha)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub statistic: StatisticSpec,
    pub kind: CiKind,
    pub alpha: f64,
    pub coverage: f64,
    pub mean_width: f64,
    pub mean_lower: f64,
    pub mean_upper: f64,
    /// Repetitions that produced this interval.
    pub repetitions: usize,
    /// Repetitions where the two-level run or the interval failed.
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub config: SimulationConfig,
    pub clip_count: usize,
    pub clip_warning: bool,
    pub truth: Vec<TruthEntry>,
    pub rows: Vec<CoverageRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub repetitions: Vec<RepetitionRecord>,
}

impl CoverageReport {
    pub fn row(&self, statistic: &StatisticSpec, kind: CiKind, alpha: f64) -> Option<&CoverageRow> {
        self.rows.iter().find(|r| &r.statistic == statistic && r.kind == kind && r.alpha == alpha)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Long format, one row per `(statistic, kind, alpha)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("statistic,kind,alpha,coverage,mean_width,mean_lower,mean_upper,repetitions,failures\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.statistic, r.kind, r.alpha, r.coverage, r.mean_width, r.mean_lower, r.mean_upper, r.repetitions, r.failures
            );
        }
        out
    }

    /// Wide format at one level: a coverage line (percent) and a width line
    /// per statistic, one column per interval kind.
    pub fn to_table_csv(&self, alpha: f64) -> String {
        let kinds = &self.config.ci_kinds;
        let mut out = String::from("statistic,metric");
        for k in kinds {
            let _ = write!(out, ",{k}");
        }
        out.push('\n');
        for stat in &self.config.statistics {
            for (metric, pick) in [("coverage_percent", 0), ("mean_width", 1)] {
                let _ = write!(out, "{stat},{metric}");
                for k in kinds {
                    match self.row(stat, *k, alpha) {
                        Some(r) if pick == 0 => write!(out, ",{:.1}", 100.0 * r.coverage),
                        Some(r) => write!(out, ",{:.3e}", r.mean_width),
                        None => write!(out, ","),
                    }
                    .ok();
                }
                out.push('\n');
            }
        }
        out
    }
}

/// `mu(P)` for each statistic: closed form when available, otherwise
/// `truth_samples` Monte Carlo draws from seed `child(TRUTH, s)`.
pub fn simulation_truth(cfg: &SimulationConfig, model: &crate::models::Model) -> Result<Vec<TruthEntry>> {
    let seed = cfg.seed();
    cfg.statistics
        .iter()
        .enumerate()
        .map(|(s, stat)| {
            let method = if cfg.analytic_mu { MuMethod::auto(stat, cfg.truth_samples) } else { MuMethod::MonteCarlo { samples: cfg.truth_samples } };
            let mu = estimate_mu(model, stat, method, seed.child(level::TRUTH, s as u64))?;
            Ok(TruthEntry { statistic: stat.clone(), mu })
        })
        .collect()
}

/// Repeats "observe `A ~ P`, run the two-level bootstrap, build every
/// requested interval" and scores each interval against `mu(P)`.
///
/// Repetition `r` uses seed `child(REPETITION, r)`; the observed graph comes
/// from its stream `(OBSERVED, 0)`. Repetitions run in parallel and are
/// reduced in order.
pub fn run_coverage_experiment(cfg: &SimulationConfig) -> Result<CoverageReport> {
    let sim = build_simulation_model(cfg)?;
    let truth = simulation_truth(cfg, &sim.model)?;
    let estimator = cfg.estimator.clone().with_truth(&sim.model);
    let probs = sim.model.probs();
    let seed = cfg.seed();
    let tl = cfg.two_level();

    let per_rep: Vec<Vec<Option<RepetitionRecord>>> = (0..cfg.outer_repetitions)
        .into_par_iter()
        .map(|r| {
            let rep_seed: SeedSpec = seed.child(level::REPETITION, r as u64);
            let a_obs = probs.sample(&mut rep_seed.stream(level::OBSERVED, 0));
            let results = match two_level_multi(&a_obs, &estimator, &cfg.statistics, tl, rep_seed) {
                Ok(v) => v,
                Err(e) => {
                    log::debug!("repetition {r}: {e}");
                    return vec![None; cfg.statistics.len()];
                }
            };
            results
                .into_iter()
                .zip(&truth)
                .map(|(res, t)| {
                    let res = res.map_err(|e| log::debug!("repetition {r}, {}: {e}", t.statistic)).ok()?;
                    let inputs = CiInputs::from_two_level(&res);
                    let mut intervals = Vec::new();
                    for &alpha in &cfg.alphas {
                        for &kind in &cfg.ci_kinds {
                            if let Ok(ci) = build_ci(kind, alpha, &inputs) {
                                let covered = ci.contains(t.mu.value);
                                intervals.push(IntervalRecord { kind, alpha, lower: ci.lower, upper: ci.upper, covered });
                            }
                        }
                    }
                    Some(RepetitionRecord {
                        repetition: r,
                        statistic: res.statistic,
                        observed: res.observed,
                        mu_hat: res.mu_hat.value,
                        bias_hat: res.bias_hat,
                        corrected_estimate: res.corrected_estimate,
                        intervals,
                    })
                })
                .collect()
        })
        .collect();

    let mut rows = Vec::new();
    for (s, stat) in cfg.statistics.iter().enumerate() {
        for &alpha in &cfg.alphas {
            for &kind in &cfg.ci_kinds {
                let (mut hits, mut count, mut width, mut lower, mut upper) = (0usize, 0usize, 0.0, 0.0, 0.0);
                for rep in &per_rep {
                    let found = rep[s].as_ref().and_then(|rec| rec.intervals.iter().find(|i| i.kind == kind && i.alpha == alpha));
                    if let Some(i) = found {
                        count += 1;
                        hits += usize::from(i.covered);
                        width += i.upper - i.lower;
                        lower += i.lower;
                        upper += i.upper;
                    }
                }
                let c = count.max(1) as f64;
                rows.push(CoverageRow {
                    statistic: stat.clone(),
                    kind,
                    alpha,
                    coverage: hits as f64 / c,
                    mean_width: width / c,
                    mean_lower: lower / c,
                    mean_upper: upper / c,
                    repetitions: count,
                    failures: cfg.outer_repetitions - count,
                });
            }
        }
    }
    let repetitions = if cfg.keep_repetitions { per_rep.into_iter().flatten().flatten().collect() } else { Vec::new() };
    Ok(CoverageReport {
        config: cfg.clone(),
        clip_count: sim.clip_count,
        clip_warning: sim.clip_warning,
        truth,
        rows,
        repetitions,
    })
}
