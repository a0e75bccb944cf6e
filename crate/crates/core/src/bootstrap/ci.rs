use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::distribution::BootstrapDistribution;
use super::quantile::{empirical_quantile_sorted, normal_quantile};
use super::two_level::TwoLevelResult;
use crate::error::{Error, Result};

/// Fewest bootstrap values behind any quantile-based interval.
pub const MIN_QUANTILE_SAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CiKind {
    ObsSym,
    ObsAsym,
    MuNaiveSym,
    MuNaiveAsym,
    MuCorrectedSym,
    MuCorrectedAsym,
}

impl CiKind {
    pub const ALL: [CiKind; 6] = [
        CiKind::ObsSym,
        CiKind::ObsAsym,
        CiKind::MuNaiveSym,
        CiKind::MuNaiveAsym,
        CiKind::MuCorrectedSym,
        CiKind::MuCorrectedAsym,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CiKind::ObsSym => "obs_sym",
            CiKind::ObsAsym => "obs_asym",
            CiKind::MuNaiveSym => "mu_naive_sym",
            CiKind::MuNaiveAsym => "mu_naive_asym",
            CiKind::MuCorrectedSym => "mu_corrected_sym",
            CiKind::MuCorrectedAsym => "mu_corrected_asym",
        }
    }

    pub fn is_symmetric(&self) -> bool {
        matches!(self, CiKind::ObsSym | CiKind::MuNaiveSym | CiKind::MuCorrectedSym)
    }
}

impl fmt::Display for CiKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CiKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CiKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown interval kind '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub kind: CiKind,
    /// Nominal coverage, e.g. 0.95.
    pub alpha: f64,
    pub lower: f64,
    pub upper: f64,
    /// Midpoint for symmetric kinds; the point estimate otherwise.
    pub center: f64,
}

impl ConfidenceInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// What an interval is built from. `obs_*` kinds need `observed`,
/// `first_level` and (for `obs_asym`) `mu_hat`; `mu_*` kinds need `mu_hat`
/// and `second_level`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CiInputs<'a> {
    pub observed: Option<f64>,
    pub first_level: Option<&'a BootstrapDistribution>,
    pub mu_hat: Option<f64>,
    pub second_level: Option<&'a [f64]>,
}

impl<'a> CiInputs<'a> {
    pub fn from_two_level(r: &'a TwoLevelResult) -> Self {
        Self {
            observed: Some(r.observed),
            first_level: Some(&r.first_level),
            mu_hat: Some(r.mu_hat.value),
            second_level: Some(&r.second_level_values),
        }
    }
}

fn missing(what: &str, kind: CiKind) -> Error {
    Error::InvalidArgument(format!("{kind} needs {what}"))
}

/// Builds one interval at nominal coverage `alpha`.
///
/// With `z = Phi^{-1}((1 + alpha) / 2)` and `Q_lo, Q_hi` the `(1 - alpha) / 2`
/// and `(1 + alpha) / 2` order statistics:
/// - obs_sym: `T_obs -/+ z sd(T_b)`
/// - obs_asym: `[T_obs - (Q_hi(T_b) - mu), T_obs - (Q_lo(T_b) - mu)]`
/// - mu_naive_sym: `mu -/+ z sd(mu_b)`
/// - mu_naive_asym: `[mu + m - Q_hi(mu_b), mu + m - Q_lo(mu_b)]`, `m = mean(mu_b)`
/// - mu_corrected_sym: `(2 mu - m) -/+ z sd(mu_b)`
/// - mu_corrected_asym: `[2 mu - Q_hi(mu_b), 2 mu - Q_lo(mu_b)]`
pub fn build_ci(kind: CiKind, alpha: f64, inputs: &CiInputs<'_>) -> Result<ConfidenceInterval> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(alpha));
    }
    let z = || normal_quantile((1.0 + alpha) / 2.0);
    let (q_lo, q_hi) = ((1.0 - alpha) / 2.0, (1.0 + alpha) / 2.0);
    let sym = |center: f64, variance: f64| -> Result<ConfidenceInterval> {
        let half = z()? * variance.sqrt();
        Ok(ConfidenceInterval { kind, alpha, lower: center - half, upper: center + half, center })
    };
    let quantiles = |values: &[f64]| -> Result<(f64, f64)> {
        if values.len() < MIN_QUANTILE_SAMPLES {
            return Err(Error::InsufficientSamples { needed: MIN_QUANTILE_SAMPLES, have: values.len() });
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok((empirical_quantile_sorted(&sorted, q_lo)?, empirical_quantile_sorted(&sorted, q_hi)?))
    };
    let observed = || inputs.observed.ok_or_else(|| missing("an observed value", kind));
    let first = || inputs.first_level.ok_or_else(|| missing("a first-level distribution", kind));
    let mu = || inputs.mu_hat.ok_or_else(|| missing("mu(P-hat)", kind));
    let second = || {
        let v = inputs.second_level.ok_or_else(|| missing("second-level values", kind))?;
        if v.len() < 2 {
            return Err(Error::InsufficientSamples { needed: 2, have: v.len() });
        }
        Ok(v)
    };
    let moments = |v: &[f64]| super::distribution::mean_variance(v);
    match kind {
        CiKind::ObsSym => sym(observed()?, first()?.variance),
        CiKind::ObsAsym => {
            let (t, m) = (observed()?, mu()?);
            let (lo, hi) = quantiles(&first()?.values)?;
            Ok(ConfidenceInterval { kind, alpha, lower: t - (hi - m), upper: t - (lo - m), center: t })
        }
        CiKind::MuNaiveSym => sym(mu()?, moments(second()?).1),
        CiKind::MuCorrectedSym => {
            let (mean, var) = moments(second()?);
            sym(2.0 * mu()? - mean, var)
        }
        CiKind::MuNaiveAsym => {
            let m = mu()?;
            let v = second()?;
            let (lo, hi) = quantiles(v)?;
            let shift = m + moments(v).0;
            Ok(ConfidenceInterval { kind, alpha, lower: shift - hi, upper: shift - lo, center: m })
        }
        CiKind::MuCorrectedAsym => {
            let m = mu()?;
            let v = second()?;
            let (lo, hi) = quantiles(v)?;
            let center = 2.0 * m - moments(v).0;
            Ok(ConfidenceInterval { kind, alpha, lower: 2.0 * m - hi, upper: 2.0 * m - lo, center })
        }
    }
}

/// Per-test coverage giving family-wise coverage `alpha_family` over `k` tests.
pub fn bonferroni_level(alpha_family: f64, k: usize) -> f64 {
    1.0 - (1.0 - alpha_family) / k as f64
}

/// Bonferroni-adjusted intervals, each built at `1 - (1 - alpha_family) / k`.
pub fn simultaneous_cis(requests: &[(CiKind, CiInputs<'_>)], alpha_family: f64) -> Result<Vec<ConfidenceInterval>> {
    if requests.is_empty() {
        return Err(Error::InvalidArgument("no intervals requested".into()));
    }
    let level = bonferroni_level(alpha_family, requests.len());
    requests.iter().map(|(kind, inputs)| build_ci(*kind, level, inputs)).collect()
}
