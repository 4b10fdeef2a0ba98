//! Case-study driver: runs the requested modes over a folds-by-seeds grid
//! and aggregates every raw metric into a report.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::point::DataPoint;
use crate::data::scenario::{ScenarioName, ScenarioSpec};
use crate::error::{Error, Result};
use crate::harness::modes::{prepare_run, run_cl, run_ll, run_sl, Mode, SlOutcome, StudyConfig};
use crate::model::metrics::Metrics;
use crate::swarm::runner::SyncRecord;

/// One test-set measurement from one run of one mode. Local learning yields
/// a row per node (label `node<i>`); the other modes yield one `global` row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRecord {
    pub mode: Mode,
    pub label: String,
    pub fold: usize,
    pub seed: u64,
    pub mape: f64,
    pub rmse: f64,
}

/// Mean and population standard deviation of one raw-record series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub mode: Mode,
    pub label: String,
    pub mean_mape: f64,
    pub std_mape: f64,
    pub mean_rmse: f64,
    pub std_rmse: f64,
}

/// Final normalized merge weight of one node after the last sync cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightRecord {
    pub mode: Mode,
    pub fold: usize,
    pub seed: u64,
    pub node_id: usize,
    pub w_norm: f64,
}

/// Everything a case study produced, minus the cycle histories. Wall time is
/// measured but never serialized, so emitted reports stay byte-identical
/// across repeat runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: ScenarioName,
    pub raw: Vec<RawRecord>,
    pub summaries: Vec<SummaryRecord>,
    pub weights: Vec<WeightRecord>,
    #[serde(skip)]
    pub wall_time: Duration,
}

/// Full sync history of one swarm run, kept for separate export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub mode: Mode,
    pub fold: usize,
    pub seed: u64,
    pub records: Vec<SyncRecord>,
}

/// Report plus the swarm histories backing it.
#[derive(Debug, Clone)]
pub struct StudyOutput {
    pub report: RunReport,
    pub histories: Vec<HistoryEntry>,
}

/// Label used for the per-run mean over a local-learning cohort and for the
/// single series of the global modes.
pub const NODE_MEAN_LABEL: &str = "node_mean";
pub const GLOBAL_LABEL: &str = "global";

pub fn node_label(node_id: usize) -> String {
    format!("node{node_id}")
}

struct PerRun {
    fold: usize,
    seed: u64,
    ll: Option<Vec<Metrics>>,
    sl: Option<SlOutcome>,
    sl_no_cwpa: Option<SlOutcome>,
    cl: Option<Metrics>,
}

fn canonical_modes(modes: &[Mode]) -> Result<Vec<Mode>> {
    if modes.is_empty() {
        return Err(Error::Config("no modes requested".into()));
    }
    let mut out: Vec<Mode> = modes.to_vec();
    out.sort();
    out.dedup();
    Ok(out)
}

fn check_grid(spec: &ScenarioSpec, folds: usize, seeds: &[u64]) -> Result<()> {
    if folds < 2 {
        return Err(Error::Config(format!(
            "folds must be at least 2, got {folds}"
        )));
    }
    if seeds.is_empty() {
        return Err(Error::Config("no seeds requested".into()));
    }
    let mut sorted = seeds.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != seeds.len() {
        return Err(Error::Config("seeds list contains duplicates".into()));
    }
    spec.validate()
}

/// Runs `modes` of the named built-in scenario over every (fold, seed) pair
/// and aggregates the results. `folds` overrides the scenario's fold count;
/// all of 0..folds are run. The grid is evaluated in parallel, but records
/// are always reduced in canonical order, so the report is deterministic.
pub fn run_case_study(
    pool: &[DataPoint],
    name: ScenarioName,
    modes: &[Mode],
    folds: usize,
    seeds: &[u64],
    study: &StudyConfig,
) -> Result<StudyOutput> {
    let start = Instant::now();
    let modes = canonical_modes(modes)?;
    let mut spec = ScenarioSpec::builtin(name);
    spec.cv_folds = folds;
    check_grid(&spec, folds, seeds)?;
    study.swarm.validate()?;

    let tasks: Vec<(usize, u64)> = (0..folds)
        .flat_map(|fold| seeds.iter().map(move |&seed| (fold, seed)))
        .collect();
    let runs: Vec<PerRun> = tasks
        .par_iter()
        .map(|&(fold, seed)| -> Result<PerRun> {
            let ctx = prepare_run(pool, &spec, fold, seed)?;
            let mut run = PerRun {
                fold,
                seed,
                ll: None,
                sl: None,
                sl_no_cwpa: None,
                cl: None,
            };
            for mode in &modes {
                match mode {
                    Mode::Ll => run.ll = Some(run_ll(&ctx, study, fold, seed)?),
                    Mode::Sl => run.sl = Some(run_sl(&ctx, study, fold, seed, true)?),
                    Mode::SlNoCwpa => {
                        run.sl_no_cwpa = Some(run_sl(&ctx, study, fold, seed, false)?)
                    }
                    Mode::Cl => run.cl = Some(run_cl(&ctx, study, fold, seed)?),
                }
            }
            Ok(run)
        })
        .collect::<Result<_>>()?;

    let mut raw = Vec::new();
    let mut weights = Vec::new();
    let mut histories = Vec::new();
    for mode in &modes {
        for run in &runs {
            match mode {
                Mode::Ll => {
                    for (node_id, m) in run.ll.as_ref().unwrap().iter().enumerate() {
                        raw.push(RawRecord {
                            mode: *mode,
                            label: node_label(node_id),
                            fold: run.fold,
                            seed: run.seed,
                            mape: m.mape,
                            rmse: m.rmse,
                        });
                    }
                }
                Mode::Sl | Mode::SlNoCwpa => {
                    let outcome = match mode {
                        Mode::Sl => run.sl.as_ref().unwrap(),
                        _ => run.sl_no_cwpa.as_ref().unwrap(),
                    };
                    raw.push(RawRecord {
                        mode: *mode,
                        label: GLOBAL_LABEL.into(),
                        fold: run.fold,
                        seed: run.seed,
                        mape: outcome.test_metrics.mape,
                        rmse: outcome.test_metrics.rmse,
                    });
                    for (node_id, &w_norm) in outcome.final_weights.iter().enumerate() {
                        weights.push(WeightRecord {
                            mode: *mode,
                            fold: run.fold,
                            seed: run.seed,
                            node_id,
                            w_norm,
                        });
                    }
                    histories.push(HistoryEntry {
                        mode: *mode,
                        fold: run.fold,
                        seed: run.seed,
                        records: outcome.history.clone(),
                    });
                }
                Mode::Cl => {
                    let m = run.cl.as_ref().unwrap();
                    raw.push(RawRecord {
                        mode: *mode,
                        label: GLOBAL_LABEL.into(),
                        fold: run.fold,
                        seed: run.seed,
                        mape: m.mape,
                        rmse: m.rmse,
                    });
                }
            }
        }
    }

    let summaries = summarize(&modes, &raw, &runs);
    Ok(StudyOutput {
        report: RunReport {
            scenario: name,
            raw,
            summaries,
            weights,
            wall_time: start.elapsed(),
        },
        histories,
    })
}

fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn summary_of(mode: Mode, label: &str, pairs: &[(f64, f64)]) -> SummaryRecord {
    let mapes: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let rmses: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let (mean_mape, std_mape) = mean_and_std(&mapes);
    let (mean_rmse, std_rmse) = mean_and_std(&rmses);
    SummaryRecord {
        mode,
        label: label.into(),
        mean_mape,
        std_mape,
        mean_rmse,
        std_rmse,
    }
}

fn summarize(modes: &[Mode], raw: &[RawRecord], runs: &[PerRun]) -> Vec<SummaryRecord> {
    let mut out = Vec::new();
    for mode in modes {
        match mode {
            Mode::Ll => {
                let n_nodes = runs
                    .first()
                    .and_then(|r| r.ll.as_ref())
                    .map_or(0, |m| m.len());
                for node_id in 0..n_nodes {
                    let label = node_label(node_id);
                    let pairs: Vec<(f64, f64)> = raw
                        .iter()
                        .filter(|r| r.mode == *mode && r.label == label)
                        .map(|r| (r.mape, r.rmse))
                        .collect();
                    out.push(summary_of(*mode, &label, &pairs));
                }
                let pairs: Vec<(f64, f64)> = runs
                    .iter()
                    .map(|run| {
                        let metrics = run.ll.as_ref().unwrap();
                        let k = metrics.len() as f64;
                        (
                            metrics.iter().map(|m| m.mape).sum::<f64>() / k,
                            metrics.iter().map(|m| m.rmse).sum::<f64>() / k,
                        )
                    })
                    .collect();
                out.push(summary_of(*mode, NODE_MEAN_LABEL, &pairs));
            }
            _ => {
                let pairs: Vec<(f64, f64)> = raw
                    .iter()
                    .filter(|r| r.mode == *mode)
                    .map(|r| (r.mape, r.rmse))
                    .collect();
                out.push(summary_of(*mode, GLOBAL_LABEL, &pairs));
            }
        }
    }
    out
}
