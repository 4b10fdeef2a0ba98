//! Min-max scaling of features and capacity into the unit interval.
//!
//! Stats are fit once on a scenario's pooled training data and shared with
//! every node as public metadata, so all models see one input scaling.

use serde::{Deserialize, Serialize};

use crate::data::curve::FeatureVector;
use crate::data::point::DataPoint;
use crate::error::{Error, Result};

/// Per-dimension min/max of the fit set. Applying to unseen data does not
/// clamp, so values outside the fit range land outside [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormStats {
    pub feature_min: [f64; 3],
    pub feature_max: [f64; 3],
    pub capacity_min: f64,
    pub capacity_max: f64,
}

impl NormStats {
    /// Stats that leave values unchanged (unit range on every dimension).
    /// Handy when data is already expressed in model space.
    pub fn identity() -> Self {
        Self {
            feature_min: [0.0; 3],
            feature_max: [1.0; 3],
            capacity_min: 0.0,
            capacity_max: 1.0,
        }
    }

    pub fn normalize_features(&self, features: &FeatureVector) -> [f64; 3] {
        let raw = features.as_array();
        let mut out = [0.0; 3];
        for d in 0..3 {
            out[d] = (raw[d] - self.feature_min[d]) / (self.feature_max[d] - self.feature_min[d]);
        }
        out
    }

    pub fn normalize_capacity(&self, capacity_ah: f64) -> f64 {
        (capacity_ah - self.capacity_min) / (self.capacity_max - self.capacity_min)
    }

    pub fn denormalize_capacity(&self, normalized: f64) -> f64 {
        self.capacity_min + normalized * (self.capacity_max - self.capacity_min)
    }
}

/// Fits min-max stats on `train`. Every dimension must have spread:
/// a constant feature column or constant capacity is a configuration error.
pub fn fit_norm(train: &[DataPoint]) -> Result<NormStats> {
    if train.is_empty() {
        return Err(Error::Input("fit_norm over empty training set".into()));
    }
    let mut feature_min = [f64::INFINITY; 3];
    let mut feature_max = [f64::NEG_INFINITY; 3];
    let mut capacity_min = f64::INFINITY;
    let mut capacity_max = f64::NEG_INFINITY;
    for p in train {
        let f = p.features.as_array();
        for d in 0..3 {
            feature_min[d] = feature_min[d].min(f[d]);
            feature_max[d] = feature_max[d].max(f[d]);
        }
        capacity_min = capacity_min.min(p.capacity_ah);
        capacity_max = capacity_max.max(p.capacity_ah);
    }
    for d in 0..3 {
        if !(feature_max[d] > feature_min[d]) {
            return Err(Error::Config(format!(
                "feature dimension {d} is degenerate (min = max = {})",
                feature_min[d]
            )));
        }
    }
    if !(capacity_max > capacity_min) {
        return Err(Error::Config(format!(
            "capacity is degenerate (min = max = {capacity_min})"
        )));
    }
    Ok(NormStats {
        feature_min,
        feature_max,
        capacity_min,
        capacity_max,
    })
}

/// Returns normalized copies of `points`: features and capacity mapped
/// through `stats`. Identity metadata (cell, cycle, conditions) is kept.
pub fn apply_norm(stats: &NormStats, points: &[DataPoint]) -> Vec<DataPoint> {
    points
        .iter()
        .map(|p| {
            let f = stats.normalize_features(&p.features);
            let mut out = p.clone();
            out.features = FeatureVector::new(f[0], f[1], f[2]);
            out.capacity_ah = stats.normalize_capacity(p.capacity_ah);
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::condition::Condition;

    fn point(features: [f64; 3], capacity: f64) -> DataPoint {
        DataPoint::new(
            "n",
            0,
            Condition::new(25.0, 0.5, 1.0),
            FeatureVector::new(features[0], features[1], features[2]),
            capacity,
        )
    }

    fn sample_set() -> Vec<DataPoint> {
        vec![
            point([0.0, -1.0, 3.9], 2.8),
            point([2.0, 1.0, 4.2], 3.5),
            point([1.0, 0.0, 4.0], 3.1),
        ]
    }

    #[test]
    fn fit_set_maps_into_unit_interval() {
        let set = sample_set();
        let stats = fit_norm(&set).unwrap();
        for p in apply_norm(&stats, &set) {
            for v in p.features.as_array() {
                assert!((0.0..=1.0).contains(&v), "feature {v}");
            }
            assert!((0.0..=1.0).contains(&p.capacity_ah));
        }
    }

    #[test]
    fn extremes_hit_zero_and_one() {
        let set = sample_set();
        let stats = fit_norm(&set).unwrap();
        let normed = apply_norm(&stats, &set);
        assert_eq!(normed[0].features.as_array()[0], 0.0);
        assert_eq!(normed[1].features.as_array()[0], 1.0);
        assert_eq!(normed[0].capacity_ah, 0.0);
        assert_eq!(normed[1].capacity_ah, 1.0);
    }

    #[test]
    fn constant_column_is_rejected() {
        let set = vec![point([1.0, 2.0, 4.2], 3.0), point([1.0, 3.0, 4.1], 3.2)];
        let err = fit_norm(&set).unwrap_err();
        assert!(err.to_string().contains("dimension 0"));
        let set = vec![point([1.0, 2.0, 4.2], 3.0), point([2.0, 3.0, 4.1], 3.0)];
        assert!(fit_norm(&set).is_err());
    }

    #[test]
    fn roundtrip_recovers_original_values() {
        let set = sample_set();
        let stats = fit_norm(&set).unwrap();
        for (orig, normed) in set.iter().zip(apply_norm(&stats, &set)) {
            let back = stats.denormalize_capacity(normed.capacity_ah);
            assert!((back - orig.capacity_ah).abs() < 1e-12);
        }
    }

    #[test]
    fn out_of_range_values_are_not_clamped() {
        let stats = fit_norm(&sample_set()).unwrap();
        let outside = point([4.0, 2.0, 4.4], 4.2);
        let normed = apply_norm(&stats, &[outside]);
        assert!(normed[0].features.as_array()[0] > 1.0);
        assert!(normed[0].capacity_ah > 1.0);
    }

    #[test]
    fn identity_stats_leave_values_unchanged() {
        let stats = NormStats::identity();
        let p = point([0.3, 0.7, 0.5], 0.9);
        let normed = apply_norm(&stats, &[p.clone()]);
        assert_eq!(normed[0], p);
    }
}
