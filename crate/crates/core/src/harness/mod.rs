//! Experiment plans, resumable runs, record files, fits and plots.

mod fit;
mod plan;
mod records;
mod run;
pub mod svg;

pub use crate::extrapolate::{richardson_extrapolate, Richardson};
pub use fit::{
    compare_rates, deficit_points, fit_power_exponent, fit_power_law, log_period, log_periodic_extract, predicted_exponent,
    FitResult, LogPeriodic, Prediction, RateReport, RateRow,
};
pub use plan::{Cell, Estimator, ExperimentPlan, TimeGrid};
pub use records::{read_records, select, timing_path, write_csv, RecordWriter, RunRecord, SCHEMA};
pub use run::{run_plan, RunSummary};
