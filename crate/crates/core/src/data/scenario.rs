//! Case-study scenarios: how the pool is distributed across nodes, which
//! corruption operators apply, and what the shared validation and test sets
//! look like.

use serde::{Deserialize, Serialize};

use crate::data::condition::Condition;
use crate::data::point::DataPoint;
use crate::error::{Error, Result};
use crate::rng;

/// The six built-in case studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioName {
    Balanced,
    VolumeBiased,
    FeatureBiasedAbsolute,
    FeatureBiasedStrong,
    FeatureBiasedLight,
    QualityBiased,
}

impl ScenarioName {
    pub fn all() -> [ScenarioName; 6] {
        [
            ScenarioName::Balanced,
            ScenarioName::VolumeBiased,
            ScenarioName::FeatureBiasedAbsolute,
            ScenarioName::FeatureBiasedStrong,
            ScenarioName::FeatureBiasedLight,
            ScenarioName::QualityBiased,
        ]
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioName::Balanced => "balanced",
            ScenarioName::VolumeBiased => "volume_biased",
            ScenarioName::FeatureBiasedAbsolute => "feature_biased_absolute",
            ScenarioName::FeatureBiasedStrong => "feature_biased_strong",
            ScenarioName::FeatureBiasedLight => "feature_biased_light",
            ScenarioName::QualityBiased => "quality_biased",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::all()
            .into_iter()
            .find(|name| name.as_str() == text)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown scenario {text:?}; expected one of: {}",
                    Self::all().map(|n| n.as_str()).join(", ")
                ))
            })
    }
}

impl std::fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Data corruption applied to one node assignment after sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Corruption {
    #[default]
    None,
    /// Capacity labels are permuted among the assigned points.
    TamperLabels,
    /// The condition metadata is overwritten; data itself stays intact.
    SensorBias { recorded: Condition },
}

/// One sampling instruction: `count` points of `condition`, then the
/// corruption operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub condition: Condition,
    pub count: usize,
    #[serde(default)]
    pub corruption: Corruption,
}

impl Assignment {
    pub fn clean(condition: Condition, count: usize) -> Self {
        Self {
            condition,
            count,
            corruption: Corruption::None,
        }
    }
}

/// Declarative description of one case study's data distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub name: ScenarioName,
    /// Outer index is the node; each node samples its assignments in order.
    pub node_assignments: Vec<Vec<Assignment>>,
    pub val_assignment: Vec<(Condition, usize)>,
    pub test_assignment: Vec<(Condition, usize)>,
    pub cv_folds: usize,
}

impl ScenarioSpec {
    /// The built-in distribution for each case study.
    pub fn builtin(name: ScenarioName) -> Self {
        let cy45 = Condition::new(45.0, 0.5, 1.0);
        let cy25 = Condition::new(25.0, 0.5, 1.0);
        let eval_cy45 = vec![(cy45.clone(), 1000)];
        let eval_mixed = vec![(cy45.clone(), 400), (cy25.clone(), 400)];
        let (node_assignments, val_assignment, test_assignment) = match name {
            ScenarioName::Balanced => (
                vec![vec![Assignment::clean(cy45.clone(), 2000)]; 4],
                eval_cy45.clone(),
                eval_cy45,
            ),
            ScenarioName::VolumeBiased => (
                vec![
                    vec![Assignment::clean(cy45.clone(), 1000)],
                    vec![Assignment::clean(cy45.clone(), 2000)],
                    vec![Assignment::clean(cy45.clone(), 5000)],
                ],
                eval_cy45.clone(),
                eval_cy45,
            ),
            ScenarioName::FeatureBiasedAbsolute => (
                vec![
                    vec![Assignment::clean(cy25.clone(), 2400)],
                    vec![Assignment::clean(cy45.clone(), 2400)],
                ],
                eval_mixed.clone(),
                eval_mixed,
            ),
            ScenarioName::FeatureBiasedStrong => (
                vec![
                    vec![
                        Assignment::clean(cy45.clone(), 200),
                        Assignment::clean(cy25.clone(), 2200),
                    ],
                    vec![
                        Assignment::clean(cy45.clone(), 2200),
                        Assignment::clean(cy25.clone(), 200),
                    ],
                ],
                eval_mixed.clone(),
                eval_mixed,
            ),
            ScenarioName::FeatureBiasedLight => (
                vec![
                    vec![
                        Assignment::clean(cy45.clone(), 800),
                        Assignment::clean(cy25.clone(), 1600),
                    ],
                    vec![
                        Assignment::clean(cy45.clone(), 1600),
                        Assignment::clean(cy25.clone(), 800),
                    ],
                ],
                eval_mixed.clone(),
                eval_mixed,
            ),
            ScenarioName::QualityBiased => (
                vec![
                    vec![Assignment::clean(cy45.clone(), 2000)],
                    vec![Assignment {
                        condition: cy45.clone(),
                        count: 2000,
                        corruption: Corruption::SensorBias {
                            recorded: cy25.clone(),
                        },
                    }],
                    vec![
                        Assignment::clean(cy45.clone(), 1000),
                        Assignment {
                            condition: cy45.clone(),
                            count: 1000,
                            corruption: Corruption::TamperLabels,
                        },
                    ],
                ],
                eval_cy45.clone(),
                eval_cy45,
            ),
        };
        Self {
            name,
            node_assignments,
            val_assignment,
            test_assignment,
            cv_folds: 5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.node_assignments.len() < 2 {
            return Err(Error::Config("a scenario needs at least 2 nodes".into()));
        }
        if self.cv_folds < 2 {
            return Err(Error::Config("cv_folds must be >= 2".into()));
        }
        for (idx, node) in self.node_assignments.iter().enumerate() {
            if node.iter().map(|a| a.count).sum::<usize>() == 0 {
                return Err(Error::Config(format!("node {idx} has no data assigned")));
            }
            if node.iter().any(|a| a.count == 0) {
                return Err(Error::Config(format!(
                    "node {idx} has a zero-count assignment; drop it instead"
                )));
            }
        }
        for (label, assignment) in [("val", &self.val_assignment), ("test", &self.test_assignment)]
        {
            if assignment.is_empty() || assignment.iter().any(|(_, count)| *count == 0) {
                return Err(Error::Config(format!(
                    "{label} assignment must list positive counts"
                )));
            }
        }
        Ok(())
    }

    pub fn n_nodes(&self) -> usize {
        self.node_assignments.len()
    }
}

const TAMPER_STREAM: u64 = 0x5441_4d50_4552;

/// Replaces the capacity labels by a seeded permutation of themselves,
/// preferring a derangement (no label stays at its own index; guaranteed for
/// 2 or more points). Features and identity fields are untouched; every
/// returned point carries `tampered = true`.
pub fn tamper_labels(points: &[DataPoint], seed: u64) -> Result<Vec<DataPoint>> {
    if points.len() < 2 {
        return Err(Error::Input(format!(
            "label tampering needs >= 2 points, got {}",
            points.len()
        )));
    }
    let n = points.len();
    let mut perm: Vec<usize> = (0..n).collect();
    use rand::seq::SliceRandom;
    perm.shuffle(&mut rng::rng_from(&[TAMPER_STREAM, seed]));
    let fixed: Vec<usize> = (0..n).filter(|&i| perm[i] == i).collect();
    match fixed.len() {
        0 => {}
        1 => {
            let f = fixed[0];
            let neighbor = (f + 1) % n;
            perm.swap(f, neighbor);
        }
        _ => {
            // Rotate the stuck labels among themselves.
            for (j, &f) in fixed.iter().enumerate() {
                perm[f] = fixed[(j + 1) % fixed.len()];
            }
        }
    }
    Ok(points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut out = p.clone();
            out.capacity_ah = points[perm[i]].capacity_ah;
            out.tampered = true;
            out
        })
        .collect())
}

/// Overwrites the recorded condition while leaving features, labels, and
/// the true generation condition untouched. Idempotent.
pub fn sensor_bias(points: &[DataPoint], recorded: &Condition) -> Vec<DataPoint> {
    points
        .iter()
        .map(|p| {
            let mut out = p.clone();
            out.recorded_condition = recorded.clone();
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::curve::FeatureVector;

    fn points(n: usize) -> Vec<DataPoint> {
        (0..n)
            .map(|i| {
                DataPoint::new(
                    format!("cell-{i}"),
                    i as u32,
                    Condition::new(45.0, 0.5, 1.0),
                    FeatureVector::new(0.001 * i as f64, 0.1, 4.1),
                    3.0 + 0.001 * i as f64,
                )
            })
            .collect()
    }

    #[test]
    fn scenario_names_roundtrip() {
        for name in ScenarioName::all() {
            assert_eq!(ScenarioName::parse(name.as_str()).unwrap(), name);
        }
        assert!(ScenarioName::parse("no_such_case").is_err());
    }

    #[test]
    fn builtin_scenarios_validate_and_match_published_counts() {
        for name in ScenarioName::all() {
            let spec = ScenarioSpec::builtin(name);
            spec.validate().unwrap();
            assert_eq!(spec.cv_folds, 5);
        }
        let balanced = ScenarioSpec::builtin(ScenarioName::Balanced);
        assert_eq!(balanced.n_nodes(), 4);
        let node_counts: Vec<usize> = balanced
            .node_assignments
            .iter()
            .map(|n| n.iter().map(|a| a.count).sum())
            .collect();
        assert_eq!(node_counts, vec![2000; 4]);

        let volume = ScenarioSpec::builtin(ScenarioName::VolumeBiased);
        let node_counts: Vec<usize> = volume
            .node_assignments
            .iter()
            .map(|n| n.iter().map(|a| a.count).sum())
            .collect();
        assert_eq!(node_counts, vec![1000, 2000, 5000]);

        let strong = ScenarioSpec::builtin(ScenarioName::FeatureBiasedStrong);
        assert_eq!(strong.node_assignments[0][0].count, 200);
        assert_eq!(strong.node_assignments[0][1].count, 2200);

        let quality = ScenarioSpec::builtin(ScenarioName::QualityBiased);
        assert!(matches!(
            quality.node_assignments[1][0].corruption,
            Corruption::SensorBias { .. }
        ));
        assert!(matches!(
            quality.node_assignments[2][1].corruption,
            Corruption::TamperLabels
        ));
    }

    #[test]
    fn tampering_preserves_the_label_multiset() {
        let original = points(50);
        let tampered = tamper_labels(&original, 3).unwrap();
        let mut before: Vec<f64> = original.iter().map(|p| p.capacity_ah).collect();
        let mut after: Vec<f64> = tampered.iter().map(|p| p.capacity_ah).collect();
        before.sort_by(f64::total_cmp);
        after.sort_by(f64::total_cmp);
        assert_eq!(before, after);
        for (a, b) in original.iter().zip(&tampered) {
            assert_eq!(a.features, b.features);
            assert_eq!(a.cell_id, b.cell_id);
            assert!(b.tampered);
        }
    }

    #[test]
    fn tampering_is_deterministic_per_seed() {
        let original = points(40);
        let a = tamper_labels(&original, 9).unwrap();
        let b = tamper_labels(&original, 9).unwrap();
        assert_eq!(a, b);
        let c = tamper_labels(&original, 10).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn tampering_leaves_no_label_in_place() {
        for seed in 0..20u64 {
            let original = points(1000);
            let tampered = tamper_labels(&original, seed).unwrap();
            let fixed = original
                .iter()
                .zip(&tampered)
                .filter(|(a, b)| a.capacity_ah == b.capacity_ah)
                .count();
            assert!(
                (fixed as f64) < 0.01 * original.len() as f64,
                "seed {seed}: {fixed} labels unmoved"
            );
        }
    }

    #[test]
    fn tampering_rejects_tiny_inputs() {
        assert!(tamper_labels(&points(1), 0).is_err());
        assert!(tamper_labels(&[], 0).is_err());
    }

    #[test]
    fn sensor_bias_touches_only_metadata() {
        let original = points(5);
        let recorded = Condition::new(25.0, 0.5, 1.0);
        let biased = sensor_bias(&original, &recorded);
        for (a, b) in original.iter().zip(&biased) {
            assert_eq!(b.recorded_condition, recorded);
            assert_eq!(a.condition, b.condition);
            assert_eq!(a.features, b.features);
            assert_eq!(a.capacity_ah, b.capacity_ah);
            assert!(!b.tampered);
        }
        let twice = sensor_bias(&biased, &recorded);
        assert_eq!(biased, twice);
    }
}
