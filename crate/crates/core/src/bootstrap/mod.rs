//! Parametric bootstrap: one-level distributions, the two-level bias
//! correction and confidence intervals.

mod ci;
mod distribution;
mod quantile;
mod two_level;

pub use ci::{bonferroni_level, build_ci, simultaneous_cis, CiInputs, CiKind, ConfidenceInterval, MIN_QUANTILE_SAMPLES};
pub use distribution::{
    bootstrap_distribution, bootstrap_distributions, bootstrap_refits, estimate_mu, estimate_mus,
    BootstrapDistribution, MuEstimate, MuMethod,
};
pub use quantile::{empirical_quantile, empirical_quantile_sorted, normal_quantile};
pub use two_level::{
    oracle_estimator, two_level, two_level_multi, TwoLevelConfig, TwoLevelResult, MAX_DROPPED_FRACTION,
    WARN_DROPPED_FRACTION,
};
