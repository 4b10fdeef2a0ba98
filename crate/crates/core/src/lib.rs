//! Deterministic swarm-learning simulator for battery capacity estimation.
//!
//! Nodes train local feedforward regressors on relaxation-curve features,
//! periodically merging parameters through credibility-weighted averaging.
//! Everything is reproducible: all randomness flows from explicit 64-bit
//! seeds through counter-based streams.

pub mod data;
pub mod error;
pub mod harness;
pub mod model;
pub mod rng;
pub mod swarm;

pub use data::condition::Condition;
pub use data::csv_io::{load_csv, save_csv};
pub use data::curve::{extract_features, FeatureVector, RelaxationCurve};
pub use data::generator::{generate_cell, generate_dataset, ConditionOffsets, GeneratorConfig};
pub use data::normalize::{apply_norm, fit_norm, NormStats};
pub use data::partition::{kfold, partition, Partition};
pub use data::point::DataPoint;
pub use data::scenario::{
    sensor_bias, tamper_labels, Assignment, Corruption, ScenarioName, ScenarioSpec,
};
pub use error::{Error, Result};
pub use harness::modes::{prepare_run, run_cl, run_ll, run_sl, Mode, RunContext, SlOutcome, StudyConfig};
pub use harness::report::{
    emit_report, load_report, parse_report_csv, parse_report_json, plot_rows, render_plot_rows,
    render_report, PlotRow, ReportFormat,
};
pub use harness::study::{
    node_label, run_case_study, HistoryEntry, RawRecord, RunReport, StudyOutput, SummaryRecord,
    WeightRecord,
};
pub use model::arch::{axpy_params, Architecture, ParamVector};
pub use model::metrics::{evaluate, Metrics};
pub use model::net::{gradient, init_params, mse_loss, predict};
pub use model::train::{train_epoch, Optimizer, TrainHyper};
pub use swarm::cwpa::{credibility, cwpa_step, CwpaState};
pub use swarm::history::{load_history_json, save_history_csv, save_history_json};
pub use swarm::merge::merge;
pub use swarm::runner::{
    epoch_seed, run_swarm, sync_round, NodeCycleRecord, NodeState, SwarmConfig, SyncRecord,
};
