//! The three learning modes compared by the case studies.
//!
//! Local learning (LL) trains each node in isolation; central learning (CL)
//! trains one model on the pooled node data; swarm learning (SL) merges
//! parameters every cycle, optionally credibility-weighted. LL and CL are
//! executed as single-node swarms, which makes the training budget and the
//! seed path bitwise identical to SL's per-node schedule: a merge over one
//! node is the identity, so the only variable left is the aggregation
//! strategy.

use serde::{Deserialize, Serialize};

use crate::data::normalize::{fit_norm, NormStats};
use crate::data::partition::{partition, Partition};
use crate::data::point::DataPoint;
use crate::data::scenario::ScenarioSpec;
use crate::error::{Error, Result};
use crate::model::arch::Architecture;
use crate::model::metrics::{evaluate, Metrics};
use crate::rng;
use crate::swarm::runner::{run_swarm, NodeState, SwarmConfig, SyncRecord};

/// Learning mode, in canonical report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Ll,
    Sl,
    SlNoCwpa,
    Cl,
}

impl Mode {
    pub fn all() -> [Mode; 4] {
        [Mode::Ll, Mode::Sl, Mode::SlNoCwpa, Mode::Cl]
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Ll => "ll",
            Mode::Sl => "sl",
            Mode::SlNoCwpa => "sl_no_cwpa",
            Mode::Cl => "cl",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::all()
            .into_iter()
            .find(|m| m.as_str() == text)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown mode {text:?}; expected one of: {}",
                    Self::all().map(|m| m.as_str()).join(", ")
                ))
            })
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Architecture plus protocol settings shared by every mode of a study.
/// The swarm seed field is ignored; each run derives its own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudyConfig {
    pub arch: Architecture,
    pub swarm: SwarmConfig,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            arch: Architecture::default(),
            swarm: SwarmConfig::default(),
        }
    }
}

/// The shared inputs of one (fold, seed) run: the sampled partition and the
/// normalization stats fit on the pooled node training data.
#[derive(Debug, Clone)]
pub struct RunContext {
    pub partition: Partition,
    pub stats: NormStats,
}

const STUDY_STREAM: u64 = 0x5354_5544_59;

/// Samples the fold and fits normalization on the union of node data, so
/// every mode of this run sees identical inputs.
pub fn prepare_run(
    pool: &[DataPoint],
    spec: &ScenarioSpec,
    fold: usize,
    seed: u64,
) -> Result<RunContext> {
    let part = partition(pool, spec, fold, seed)?;
    let pooled: Vec<DataPoint> = part.nodes.iter().flatten().cloned().collect();
    let stats = fit_norm(&pooled)?;
    Ok(RunContext {
        partition: part,
        stats,
    })
}

fn swarm_for_run(study: &StudyConfig, fold: usize, seed: u64, use_cwpa: bool) -> SwarmConfig {
    SwarmConfig {
        seed: rng::mix(&[STUDY_STREAM, seed, fold as u64]),
        use_cwpa,
        ..study.swarm.clone()
    }
}

/// Local learning: each node trains alone for the full budget and is scored
/// on the shared test set. Returns one Metrics per node, in node order.
pub fn run_ll(
    ctx: &RunContext,
    study: &StudyConfig,
    fold: usize,
    seed: u64,
) -> Result<Vec<Metrics>> {
    let config = swarm_for_run(study, fold, seed, false);
    let mut out = Vec::with_capacity(ctx.partition.nodes.len());
    for (node_id, data) in ctx.partition.nodes.iter().enumerate() {
        let node = NodeState::new(node_id, data.clone(), study.arch.clone())?;
        let (params, _) = run_swarm(
            vec![node],
            &ctx.partition.validation,
            &ctx.stats,
            &config,
        )?;
        out.push(evaluate(&params, &ctx.partition.test, &ctx.stats)?);
    }
    Ok(out)
}

/// Central learning: one model over the union of all node data.
pub fn run_cl(ctx: &RunContext, study: &StudyConfig, fold: usize, seed: u64) -> Result<Metrics> {
    let pooled: Vec<DataPoint> = ctx.partition.nodes.iter().flatten().cloned().collect();
    let node = NodeState::new(0, pooled, study.arch.clone())?;
    let config = swarm_for_run(study, fold, seed, false);
    let (params, _) = run_swarm(
        vec![node],
        &ctx.partition.validation,
        &ctx.stats,
        &config,
    )?;
    evaluate(&params, &ctx.partition.test, &ctx.stats)
}

/// What a swarm run yields: global test metrics, the final normalized merge
/// weight per node, and the full cycle history.
#[derive(Debug, Clone, PartialEq)]
pub struct SlOutcome {
    pub test_metrics: Metrics,
    pub final_weights: Vec<f64>,
    pub history: Vec<SyncRecord>,
}

/// Swarm learning over all nodes, with or without credibility weighting.
pub fn run_sl(
    ctx: &RunContext,
    study: &StudyConfig,
    fold: usize,
    seed: u64,
    use_cwpa: bool,
) -> Result<SlOutcome> {
    let nodes: Vec<NodeState> = ctx
        .partition
        .nodes
        .iter()
        .enumerate()
        .map(|(node_id, data)| NodeState::new(node_id, data.clone(), study.arch.clone()))
        .collect::<Result<_>>()?;
    let config = swarm_for_run(study, fold, seed, use_cwpa);
    let (params, history) = run_swarm(
        nodes,
        &ctx.partition.validation,
        &ctx.stats,
        &config,
    )?;
    let last = history.last().expect("sync_cycles >= 1");
    let final_weights = last.nodes.iter().map(|n| n.w_norm).collect();
    Ok(SlOutcome {
        test_metrics: evaluate(&params, &ctx.partition.test, &ctx.stats)?,
        final_weights,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::generator::{generate_dataset, GeneratorConfig};
    use crate::data::scenario::ScenarioName;
    use std::sync::OnceLock;

    fn pool() -> &'static Vec<DataPoint> {
        static POOL: OnceLock<Vec<DataPoint>> = OnceLock::new();
        POOL.get_or_init(|| generate_dataset(&GeneratorConfig::default(), 0).unwrap())
    }

    fn quick_study() -> StudyConfig {
        StudyConfig {
            swarm: SwarmConfig {
                sync_cycles: 3,
                ..SwarmConfig::default()
            },
            ..StudyConfig::default()
        }
    }

    #[test]
    fn mode_names_roundtrip_in_canonical_order() {
        assert_eq!(
            Mode::all().map(|m| m.as_str()),
            ["ll", "sl", "sl_no_cwpa", "cl"]
        );
        for mode in Mode::all() {
            assert_eq!(Mode::parse(mode.as_str()).unwrap(), mode);
        }
        assert!(Mode::parse("federated").is_err());
        let mut shuffled = vec![Mode::Cl, Mode::Ll, Mode::SlNoCwpa, Mode::Sl];
        shuffled.sort();
        assert_eq!(shuffled, Mode::all().to_vec());
    }

    #[test]
    fn ll_yields_one_metrics_entry_per_node() {
        let spec = ScenarioSpec::builtin(ScenarioName::VolumeBiased);
        let ctx = prepare_run(pool(), &spec, 0, 1).unwrap();
        let study = quick_study();
        let metrics = run_ll(&ctx, &study, 0, 1).unwrap();
        assert_eq!(metrics.len(), 3);
    }

    #[test]
    fn identical_node_data_gives_identical_ll_metrics() {
        let spec = ScenarioSpec::builtin(ScenarioName::Balanced);
        let mut ctx = prepare_run(pool(), &spec, 0, 2).unwrap();
        ctx.partition.nodes[1] = ctx.partition.nodes[0].clone();
        let study = quick_study();
        let metrics = run_ll(&ctx, &study, 0, 2).unwrap();
        assert_eq!(metrics[0], metrics[1]);
    }

    #[test]
    fn modes_are_deterministic() {
        let spec = ScenarioSpec::builtin(ScenarioName::Balanced);
        let ctx = prepare_run(pool(), &spec, 1, 3).unwrap();
        let study = quick_study();
        assert_eq!(
            run_cl(&ctx, &study, 1, 3).unwrap(),
            run_cl(&ctx, &study, 1, 3).unwrap()
        );
        let a = run_sl(&ctx, &study, 1, 3, true).unwrap();
        let b = run_sl(&ctx, &study, 1, 3, true).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sl_reports_normalized_final_weights_and_full_history() {
        let spec = ScenarioSpec::builtin(ScenarioName::Balanced);
        let ctx = prepare_run(pool(), &spec, 0, 4).unwrap();
        let study = quick_study();
        let outcome = run_sl(&ctx, &study, 0, 4, true).unwrap();
        assert_eq!(outcome.history.len(), 3);
        assert_eq!(outcome.final_weights.len(), 4);
        let total: f64 = outcome.final_weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cwpa_toggle_separates_the_tampered_node() {
        let spec = ScenarioSpec::builtin(ScenarioName::QualityBiased);
        let ctx = prepare_run(pool(), &spec, 0, 5).unwrap();
        let study = StudyConfig {
            swarm: SwarmConfig {
                sync_cycles: 10,
                ..SwarmConfig::default()
            },
            ..StudyConfig::default()
        };
        let with = run_sl(&ctx, &study, 0, 5, true).unwrap();
        let without = run_sl(&ctx, &study, 0, 5, false).unwrap();
        let n = ctx.partition.nodes.len() as f64;
        for w in &without.final_weights {
            assert!((w - 1.0 / n).abs() < 1e-12);
        }
        assert_ne!(with.final_weights, without.final_weights);
        let tampered = with.final_weights[2];
        assert!(with.final_weights[..2].iter().all(|&w| tampered < w));
    }
}
