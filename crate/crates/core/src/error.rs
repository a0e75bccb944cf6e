use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid probability matrix: {0}")]
    InvalidProbabilities(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("degenerate model: {0}")]
    DegenerateModel(String),

    #[error("community {community} is empty")]
    EmptyCommunity { community: usize },

    #[error("community {community} has zero total degree")]
    ZeroDegreeCommunity { community: usize },

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("unsupported motif: {0}")]
    UnsupportedMotif(String),

    #[error("statistic undefined: {0}")]
    UndefinedStatistic(String),

    #[error("no closed-form expectation for {0}")]
    NoAnalyticMu(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("all {0} bootstrap replicates were dropped")]
    EmptyDistribution(usize),

    #[error("{dropped} of {total} replicates dropped (more than half)")]
    TooManyDropped { dropped: usize, total: usize },

    #[error("need at least {needed} samples, have {have}")]
    InsufficientSamples { needed: usize, have: usize },

    #[error("argument {0} outside (0, 1)")]
    Domain(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
