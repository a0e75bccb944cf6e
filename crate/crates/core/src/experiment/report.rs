use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bootstrap::{bonferroni_level, build_ci, two_level_multi, CiInputs, CiKind, TwoLevelConfig};
use crate::error::Result;
use crate::graph::{read_edge_list_file, AdjacencyMatrix, SeedSpec};
use crate::models::Estimator;
use crate::netstats::{largest_component, StatisticSpec};

/// Where the observed value sits relative to its interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    Above,
    Below,
}

impl Flag {
    pub fn arrow(&self) -> &'static str {
        match self {
            Flag::Above => "↑",
            Flag::Below => "↓",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub statistic: StatisticSpec,
    pub observed: f64,
    pub corrected_estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub flag: Option<Flag>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFailure {
    pub statistic: StatisticSpec,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetReport {
    pub dataset: String,
    pub nodes: usize,
    pub edges: usize,
    pub estimator: String,
    pub kind: CiKind,
    pub alpha_family: f64,
    /// Bonferroni level of each interval.
    pub alpha_per_test: f64,
    pub rows: Vec<ReportRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<ReportFailure>,
}

impl DatasetReport {
    pub fn row(&self, statistic: &StatisticSpec) -> Option<&ReportRow> {
        self.rows.iter().find(|r| &r.statistic == statistic)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Columns `statistic,observed,flag,lower,upper,corrected_estimate`; `lower <= upper` always.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("statistic,observed,flag,lower,upper,corrected_estimate\n");
        for r in &self.rows {
            let flag = r.flag.map_or("", |f| f.arrow());
            let _ = writeln!(out, "{},{},{},{},{},{}", r.statistic, r.observed, flag, r.lower, r.upper, r.corrected_estimate);
        }
        out
    }
}

/// Options for [`report_dataset`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportOptions {
    pub alpha_family: f64,
    pub kind: CiKind,
    pub two_level: TwoLevelConfig,
    pub seed: SeedSpec,
    /// Restrict to the largest connected component first.
    pub largest_component: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            alpha_family: 0.95,
            kind: CiKind::MuCorrectedAsym,
            two_level: TwoLevelConfig::default(),
            seed: SeedSpec::new(0),
            largest_component: false,
        }
    }
}

/// The subgraph induced by the largest connected component, with the
/// original indices of its nodes.
pub fn giant_component(a: &AdjacencyMatrix) -> (AdjacencyMatrix, Vec<usize>) {
    let nodes = largest_component(a);
    (a.induced(&nodes), nodes)
}

/// Observed values and simultaneous intervals for `statistics` on one network.
/// Each interval is built at the Bonferroni level for the whole list; a
/// statistic outside its interval is flagged up or down.
pub fn report_dataset(
    name: &str,
    a: &AdjacencyMatrix,
    estimator: &Estimator,
    statistics: &[StatisticSpec],
    options: &ReportOptions,
) -> Result<DatasetReport> {
    let owned;
    let a = if options.largest_component {
        owned = giant_component(a).0;
        &owned
    } else {
        a
    };
    let k = statistics.len();
    let alpha_per_test = if k == 0 { options.alpha_family } else { bonferroni_level(options.alpha_family, k) };
    let mut report = DatasetReport {
        dataset: name.to_string(),
        nodes: a.n(),
        edges: a.edge_count(),
        estimator: estimator.name().to_string(),
        kind: options.kind,
        alpha_family: options.alpha_family,
        alpha_per_test,
        rows: Vec::new(),
        failures: Vec::new(),
    };
    if k == 0 {
        return Ok(report);
    }
    let results = two_level_multi(a, estimator, statistics, options.two_level, options.seed)?;
    for (stat, res) in statistics.iter().zip(results) {
        let built = res.and_then(|r| {
            let ci = build_ci(options.kind, alpha_per_test, &CiInputs::from_two_level(&r))?;
            Ok((r, ci))
        });
        match built {
            Ok((r, ci)) => {
                let flag = if r.observed > ci.upper {
                    Some(Flag::Above)
                } else if r.observed < ci.lower {
                    Some(Flag::Below)
                } else {
                    None
                };
                report.rows.push(ReportRow {
                    statistic: stat.clone(),
                    observed: r.observed,
                    corrected_estimate: r.corrected_estimate,
                    lower: ci.lower,
                    upper: ci.upper,
                    flag,
                });
            }
            Err(e) => report.failures.push(ReportFailure { statistic: stat.clone(), error: e.to_string() }),
        }
    }
    Ok(report)
}

/// [`report_dataset`] on an edge-list file.
pub fn report_dataset_file(
    path: &Path,
    estimator: &Estimator,
    statistics: &[StatisticSpec],
    options: &ReportOptions,
) -> Result<DatasetReport> {
    let (a, _) = read_edge_list_file(path)?;
    let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    report_dataset(&name, &a, estimator, statistics, options)
}
