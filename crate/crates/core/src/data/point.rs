//! One labeled sample: feature triple plus measured capacity.

use serde::{Deserialize, Serialize};

use crate::data::condition::Condition;
use crate::data::curve::FeatureVector;

/// A single (features, capacity) sample from one cycle of one cell.
///
/// `condition` is the condition the data was generated under;
/// `recorded_condition` is what the node's metadata claims, and differs only
/// after a sensor-bias corruption. `tampered` is generator-side ground truth
/// and is never consulted by any learner.
///
/// Training operates on copies whose features and capacity have been min-max
/// normalized; those copies may carry capacities outside (0, inf). Points in
/// original units always have `capacity_ah > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataPoint {
    pub cell_id: String,
    pub cycle_index: u32,
    pub condition: Condition,
    pub recorded_condition: Condition,
    pub features: FeatureVector,
    pub capacity_ah: f64,
    #[serde(default)]
    pub tampered: bool,
}

impl DataPoint {
    pub fn new(
        cell_id: impl Into<String>,
        cycle_index: u32,
        condition: Condition,
        features: FeatureVector,
        capacity_ah: f64,
    ) -> Self {
        Self {
            cell_id: cell_id.into(),
            cycle_index,
            recorded_condition: condition.clone(),
            condition,
            features,
            capacity_ah,
            tampered: false,
        }
    }

    /// Identity key used for disjointness checks: a pool never holds two
    /// points from the same cell and cycle.
    pub fn key(&self) -> (&str, u32) {
        (&self.cell_id, self.cycle_index)
    }
}
