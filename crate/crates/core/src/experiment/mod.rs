//! Simulation studies and real-data reports built on the bootstrap engine.

mod config;
mod coverage;
mod report;

pub use config::{
    build_simulation_model, LabelLayout, SimulationConfig, SimulationModel, TargetDegree, ThetaLaw, CLIP_WARN_FRACTION,
};
pub use coverage::{
    run_coverage_experiment, simulation_truth, CoverageReport, CoverageRow, IntervalRecord, RepetitionRecord, TruthEntry,
};
pub use report::{
    giant_component, report_dataset, report_dataset_file, DatasetReport, Flag, ReportFailure, ReportOptions, ReportRow,
};
