//! Edge-probability model families and their estimators.

mod chung_lu;
mod dcsbm;
pub mod eigen;
mod model;
mod spectral;

pub use chung_lu::{estimate_chung_lu, ChungLuParams};
pub use dcsbm::{estimate_dcsbm, estimate_sbm, DcsbmParams};
pub use model::{DenseParams, Estimator, LabelSource, Model, ModelParams};
pub use spectral::{estimate_spectral, spectral_cluster, SpectralEstimate, DENSE_CLUSTER_LIMIT, DENSE_EIGEN_LIMIT};
