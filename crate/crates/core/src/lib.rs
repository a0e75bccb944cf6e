pub mod bootstrap;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod models;
pub mod netstats;

pub use error::{Error, Result};
pub use graph::{AdjacencyMatrix, EdgeProbMatrix, NodeLabels, SeedSpec};
pub use models::{Estimator, Model};
pub use netstats::{Motif, StatisticSpec};
