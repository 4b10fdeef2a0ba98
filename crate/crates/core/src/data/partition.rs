//! Sampling scenario datasets out of the generated pool.
//!
//! Each condition's points form a seeded ring: one shuffle per (seed,
//! condition), independent of the fold. A fold reads its blocks starting at
//! `fold * len / cv_folds`, wrapping modularly, in a fixed order: validation
//! first, then test, then every node assignment. Blocks within one fold are
//! contiguous reads of a ring and therefore pairwise disjoint; rotating the
//! start offset is what varies the evaluation data across folds. (Scenario
//! demands can exceed `len / cv_folds` for the scarcer conditions, so fully
//! disjoint per-fold blocks are not generally possible.)

use std::collections::BTreeMap;

use rand::seq::SliceRandom;

use crate::data::point::DataPoint;
use crate::data::scenario::{Corruption, ScenarioSpec};
use crate::data::scenario::{sensor_bias, tamper_labels};
use crate::error::{Error, Result};
use crate::rng;

/// Node training sets plus the shared validation and test sets for one fold.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub nodes: Vec<Vec<DataPoint>>,
    pub validation: Vec<DataPoint>,
    pub test: Vec<DataPoint>,
}

const KFOLD_STREAM: u64 = 0x4b46_4f4c_44;
const PARTITION_STREAM: u64 = 0x5041_5254;
const TAMPER_SLOT_STREAM: u64 = 0x5441_534c;

/// Splits `indices` into `k` folds: seeded shuffle, then contiguous chunks.
/// The first `len % k` folds carry one extra element.
pub fn kfold(indices: &[usize], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::Input(format!("kfold needs k >= 2, got {k}")));
    }
    if k > indices.len() {
        return Err(Error::Input(format!(
            "kfold with k = {k} over only {} indices",
            indices.len()
        )));
    }
    let mut shuffled = indices.to_vec();
    shuffled.shuffle(&mut rng::rng_from(&[KFOLD_STREAM, seed]));
    let base = shuffled.len() / k;
    let remainder = shuffled.len() % k;
    let mut folds = Vec::with_capacity(k);
    let mut cursor = 0;
    for fold_idx in 0..k {
        let size = base + usize::from(fold_idx < remainder);
        folds.push(shuffled[cursor..cursor + size].to_vec());
        cursor += size;
    }
    Ok(folds)
}

/// Materializes one fold of a scenario from the pool. Deterministic in
/// `(pool, spec, fold, seed)`; node, validation, and test sets are pairwise
/// disjoint by point identity.
pub fn partition(
    pool: &[DataPoint],
    spec: &ScenarioSpec,
    fold: usize,
    seed: u64,
) -> Result<Partition> {
    spec.validate()?;
    if fold >= spec.cv_folds {
        return Err(Error::Input(format!(
            "fold {fold} out of range for {} folds",
            spec.cv_folds
        )));
    }

    // One shuffled ring and one read cursor per condition tag.
    let mut rings: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (idx, point) in pool.iter().enumerate() {
        rings.entry(point.condition.tag()).or_default().push(idx);
    }
    for (ring_idx, ring) in rings.values_mut().enumerate() {
        ring.shuffle(&mut rng::rng_from(&[PARTITION_STREAM, seed, ring_idx as u64]));
    }
    let mut cursors: BTreeMap<String, usize> = rings
        .iter()
        .map(|(tag, ring)| (tag.clone(), fold * (ring.len() / spec.cv_folds)))
        .collect();
    let mut consumed: BTreeMap<String, usize> =
        rings.keys().map(|tag| (tag.clone(), 0)).collect();

    let mut take = |tag: &str, count: usize| -> Result<Vec<DataPoint>> {
        let ring = rings
            .get(tag)
            .ok_or_else(|| Error::Config(format!("pool has no points of condition {tag}")))?;
        let used = consumed.get_mut(tag).expect("tracked tag");
        if *used + count > ring.len() {
            return Err(Error::Config(format!(
                "scenario demands {} points of {tag}, pool holds {}",
                *used + count,
                ring.len()
            )));
        }
        *used += count;
        let cursor = cursors.get_mut(tag).expect("tracked tag");
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            out.push(pool[ring[*cursor % ring.len()]].clone());
            *cursor += 1;
        }
        Ok(out)
    };

    let mut sample_eval = |assignment: &[(crate::Condition, usize)]| -> Result<Vec<DataPoint>> {
        let mut out = Vec::new();
        for (condition, count) in assignment {
            out.extend(take(&condition.tag(), *count)?);
        }
        Ok(out)
    };
    let validation = sample_eval(&spec.val_assignment)?;
    let test = sample_eval(&spec.test_assignment)?;

    let mut nodes = Vec::with_capacity(spec.n_nodes());
    for (node_idx, assignments) in spec.node_assignments.iter().enumerate() {
        let mut node_points = Vec::new();
        for (slot_idx, assignment) in assignments.iter().enumerate() {
            let chunk = take(&assignment.condition.tag(), assignment.count)?;
            let chunk = match &assignment.corruption {
                Corruption::None => chunk,
                Corruption::TamperLabels => {
                    let tamper_seed = rng::mix(&[
                        TAMPER_SLOT_STREAM,
                        seed,
                        fold as u64,
                        node_idx as u64,
                        slot_idx as u64,
                    ]);
                    tamper_labels(&chunk, tamper_seed)?
                }
                Corruption::SensorBias { recorded } => sensor_bias(&chunk, recorded),
            };
            node_points.extend(chunk);
        }
        nodes.push(node_points);
    }

    Ok(Partition {
        nodes,
        validation,
        test,
    })
}
