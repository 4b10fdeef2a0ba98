//! The swarm state machine: local training, credibility comparison,
//! counter updates, weighted merge, and synchronous parameter replacement.

use serde::{Deserialize, Serialize};

use crate::data::normalize::{apply_norm, NormStats};
use crate::data::point::DataPoint;
use crate::error::{Error, Result};
use crate::model::arch::{Architecture, ParamVector};
use crate::model::metrics::{evaluate, Metrics};
use crate::model::net::init_params;
use crate::model::train::{train_epoch, TrainHyper};
use crate::rng;
use crate::swarm::cwpa::{credibility, cwpa_step, CwpaState};
use crate::swarm::merge::merge;

/// One participant: its raw local data, current parameters, and counters.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeState {
    pub node_id: usize,
    pub local_data: Vec<DataPoint>,
    pub params: ParamVector,
    pub cwpa: CwpaState,
}

impl NodeState {
    pub fn new(node_id: usize, local_data: Vec<DataPoint>, arch: Architecture) -> Result<Self> {
        if local_data.is_empty() {
            return Err(Error::Input(format!("node {node_id} has no local data")));
        }
        Ok(Self {
            node_id,
            local_data,
            params: ParamVector::zeros(arch),
            cwpa: CwpaState::new(1.0)?,
        })
    }
}

/// Protocol parameters for one swarm run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SwarmConfig {
    pub sync_cycles: usize,
    pub local_epochs_per_cycle: usize,
    pub alpha: f64,
    pub use_cwpa: bool,
    pub hyper: TrainHyper,
    pub seed: u64,
    /// Shifts the round-robin coordinator election. The coordinator is
    /// simulated plumbing and never affects any numeric output.
    pub coordinator_offset: usize,
}

impl Default for SwarmConfig {
    fn default() -> Self {
        Self {
            sync_cycles: 100,
            local_epochs_per_cycle: 1,
            alpha: 1.0,
            use_cwpa: true,
            hyper: TrainHyper::default(),
            seed: 0,
            coordinator_offset: 0,
        }
    }
}

impl SwarmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sync_cycles == 0 {
            return Err(Error::Config("sync_cycles must be >= 1".into()));
        }
        if self.local_epochs_per_cycle == 0 {
            return Err(Error::Config("local_epochs_per_cycle must be >= 1".into()));
        }
        if !self.alpha.is_finite() || self.alpha < 0.0 {
            return Err(Error::Config(format!(
                "alpha must be finite and >= 0, got {}",
                self.alpha
            )));
        }
        self.hyper.validate()
    }
}

/// One node's numbers within a [`SyncRecord`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeCycleRecord {
    pub node_id: usize,
    pub credibility: f64,
    pub p: u32,
    pub n: u32,
    pub w_raw: f64,
    pub w_norm: f64,
}

/// Everything observable about one sync cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyncRecord {
    pub cycle: usize,
    pub coordinator: usize,
    pub c_global: f64,
    pub nodes: Vec<NodeCycleRecord>,
    pub val_metrics: Metrics,
}

const SWARM_INIT_STREAM: u64 = 0x5357_494e_4954;
const EPOCH_STREAM: u64 = 0x4550_5345_4544;

/// The shuffle seed for one local epoch. Node-independent by design: nodes
/// with identical data train identically in the same cycle. Public so the
/// per-node training of any cycle can be replayed outside the runner.
pub fn epoch_seed(config_seed: u64, cycle: usize, epoch: usize) -> u64 {
    rng::mix(&[EPOCH_STREAM, config_seed, cycle as u64, epoch as u64])
}

/// One full cycle. `train_sets[i]` is node `i`'s pre-normalized training
/// set; `validation` stays raw and is scored through `stats`. Every node
/// trains from its current params, credibilities are compared against the
/// incoming global model, counters update, and the weighted merge replaces
/// every node's params. The epoch seed depends only on (config seed, cycle,
/// epoch), so nodes with identical data train identically.
pub fn sync_round(
    nodes: &mut [NodeState],
    global_prev: &ParamVector,
    train_sets: &[Vec<DataPoint>],
    validation: &[DataPoint],
    stats: &NormStats,
    config: &SwarmConfig,
    cycle: usize,
) -> Result<(ParamVector, SyncRecord)> {
    if nodes.is_empty() {
        return Err(Error::Input("sync_round over zero nodes".into()));
    }
    if nodes.len() != train_sets.len() {
        return Err(Error::Shape(format!(
            "{} nodes vs {} training sets",
            nodes.len(),
            train_sets.len()
        )));
    }
    let coordinator =
        (cycle.wrapping_sub(1).wrapping_add(config.coordinator_offset)) % nodes.len();
    let c_global = credibility(global_prev, validation, stats)?;

    for (node, train) in nodes.iter_mut().zip(train_sets) {
        for epoch in 0..config.local_epochs_per_cycle {
            let seed = epoch_seed(config.seed, cycle, epoch);
            let (next, _) = train_epoch(&node.params, train, &config.hyper, seed)?;
            node.params = next;
        }
    }

    let mut raw_weights = Vec::with_capacity(nodes.len());
    let mut credibilities = Vec::with_capacity(nodes.len());
    for node in nodes.iter_mut() {
        let c_node = credibility(&node.params, validation, stats)?;
        node.cwpa = cwpa_step(&node.cwpa, c_node, c_global)?;
        credibilities.push(c_node);
        raw_weights.push(if config.use_cwpa {
            node.cwpa.weight()?
        } else {
            1.0
        });
    }

    let params_list: Vec<ParamVector> = nodes.iter().map(|n| n.params.clone()).collect();
    let global_new = merge(&params_list, &raw_weights)?;
    let weight_total: f64 = raw_weights.iter().sum();
    let val_metrics = evaluate(&global_new, validation, stats)?;

    let records = nodes
        .iter()
        .zip(&credibilities)
        .zip(&raw_weights)
        .map(|((node, &credibility), &w_raw)| NodeCycleRecord {
            node_id: node.node_id,
            credibility,
            p: node.cwpa.p,
            n: node.cwpa.n,
            w_raw,
            w_norm: w_raw / weight_total,
        })
        .collect();

    for node in nodes.iter_mut() {
        node.params = global_new.clone();
    }
    Ok((
        global_new,
        SyncRecord {
            cycle,
            coordinator,
            c_global,
            nodes: records,
            val_metrics,
        },
    ))
}

/// Runs the full protocol: shared seed-derived initialization, then
/// `sync_cycles` rounds. Returns the final global model and one record per
/// cycle. Bitwise deterministic in (nodes, validation, stats, config).
pub fn run_swarm(
    mut nodes: Vec<NodeState>,
    validation: &[DataPoint],
    stats: &NormStats,
    config: &SwarmConfig,
) -> Result<(ParamVector, Vec<SyncRecord>)> {
    config.validate()?;
    if nodes.is_empty() {
        return Err(Error::Input("run_swarm over zero nodes".into()));
    }
    if validation.is_empty() {
        return Err(Error::Input("run_swarm needs validation data".into()));
    }
    for pair in nodes.windows(2) {
        if pair[1].node_id <= pair[0].node_id {
            return Err(Error::Input(
                "node ids must be unique and ascending".into(),
            ));
        }
    }
    let arch = nodes[0].params.arch().clone();
    if nodes.iter().any(|n| n.params.arch() != &arch) {
        return Err(Error::Shape("nodes disagree on architecture".into()));
    }

    let shared_init = init_params(&arch, rng::mix(&[SWARM_INIT_STREAM, config.seed]));
    for node in &mut nodes {
        node.params = shared_init.clone();
        node.cwpa = CwpaState::new(config.alpha)?;
    }
    let train_sets: Vec<Vec<DataPoint>> = nodes
        .iter()
        .map(|n| apply_norm(stats, &n.local_data))
        .collect();

    let mut global = shared_init;
    let mut history = Vec::with_capacity(config.sync_cycles);
    for cycle in 1..=config.sync_cycles {
        let (next, record) = sync_round(
            &mut nodes,
            &global,
            &train_sets,
            validation,
            stats,
            config,
            cycle,
        )?;
        global = next;
        history.push(record);
    }
    Ok((global, history))
}
