//! Relaxation voltage curves and the statistical features extracted from
//! them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum number of samples a curve must carry to yield stable moments.
pub const MIN_CURVE_SAMPLES: usize = 8;

/// Threshold below which the second central moment is treated as zero: the
/// curve counts as constant, with variance reported as 0 and skewness
/// defined as 0.
const SKEW_M2_FLOOR: f64 = 1e-15;

/// Voltage-vs-time trace after charging stops.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationCurve {
    samples: Vec<(f64, f64)>,
}

impl RelaxationCurve {
    /// Validates: at least [`MIN_CURVE_SAMPLES`] samples, strictly increasing
    /// times, finite voltages.
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < MIN_CURVE_SAMPLES {
            return Err(Error::Input(format!(
                "relaxation curve needs >= {MIN_CURVE_SAMPLES} samples, got {}",
                samples.len()
            )));
        }
        for pair in samples.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::Input("curve times must be strictly increasing".into()));
            }
        }
        if samples.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(Error::Input("curve samples must be finite".into()));
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn voltages(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|&(_, v)| v)
    }
}

/// The three statistics a capacity estimator consumes: voltage variance,
/// skewness, and maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub variance: f64,
    pub skewness: f64,
    pub max_voltage: f64,
}

impl FeatureVector {
    pub fn new(variance: f64, skewness: f64, max_voltage: f64) -> Self {
        Self {
            variance,
            skewness,
            max_voltage,
        }
    }

    /// Population moments of a voltage sample: variance divides by n,
    /// skewness is m3 / m2^(3/2) and defined as 0 for near-constant input.
    pub fn from_voltages(voltages: &[f64]) -> Self {
        let n = voltages.len() as f64;
        let mean = voltages.iter().sum::<f64>() / n;
        let mut m2 = 0.0;
        let mut m3 = 0.0;
        let mut max = f64::NEG_INFINITY;
        for &v in voltages {
            let d = v - mean;
            m2 += d * d;
            m3 += d * d * d;
            if v > max {
                max = v;
            }
        }
        m2 /= n;
        m3 /= n;
        if m2 < SKEW_M2_FLOOR {
            return Self {
                variance: 0.0,
                skewness: 0.0,
                max_voltage: max,
            };
        }
        Self {
            variance: m2,
            skewness: m3 / m2.powf(1.5),
            max_voltage: max,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.variance, self.skewness, self.max_voltage]
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|v| v.is_finite())
    }
}

/// Extracts the feature triple from a validated curve.
pub fn extract_features(curve: &RelaxationCurve) -> FeatureVector {
    let voltages: Vec<f64> = curve.voltages().collect();
    FeatureVector::from_voltages(&voltages)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(voltages: &[f64]) -> Vec<(f64, f64)> {
        voltages
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as f64, v))
            .collect()
    }

    #[test]
    fn constant_curve_yields_zero_variance_and_skew() {
        let curve = RelaxationCurve::new(grid(&[4.2; 12])).unwrap();
        let f = extract_features(&curve);
        assert_eq!(f.variance, 0.0);
        assert_eq!(f.skewness, 0.0);
        assert_eq!(f.max_voltage, 4.2);
    }

    #[test]
    fn symmetric_sample_moments() {
        let f = FeatureVector::from_voltages(&[1.0, 2.0, 3.0]);
        assert!((f.variance - 2.0 / 3.0).abs() < 1e-12);
        assert!(f.skewness.abs() < 1e-12);
        assert_eq!(f.max_voltage, 3.0);
    }

    #[test]
    fn skewed_sample_moments() {
        // mean 2, m2 = 2, m3 = 2 -> skew = 2 / 2^1.5
        let f = FeatureVector::from_voltages(&[1.0, 1.0, 4.0]);
        assert!((f.variance - 2.0).abs() < 1e-12);
        assert!((f.skewness - 2.0 / 2.0_f64.powf(1.5)).abs() < 1e-9);
        assert!((f.skewness - 0.7071).abs() < 1e-4);
        assert_eq!(f.max_voltage, 4.0);
    }

    #[test]
    fn short_curve_is_rejected() {
        let err = RelaxationCurve::new(grid(&[4.0; 7])).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn non_increasing_time_is_rejected() {
        let mut samples = grid(&[4.0; 10]);
        samples[5].0 = samples[4].0;
        assert!(RelaxationCurve::new(samples).is_err());
    }

    #[test]
    fn features_are_order_free() {
        let base = [4.01, 3.98, 4.12, 4.05, 3.97, 4.2, 4.0, 3.99, 4.03];
        let f0 = FeatureVector::from_voltages(&base);
        let mut perm = base;
        perm.reverse();
        perm.swap(2, 6);
        let f1 = FeatureVector::from_voltages(&perm);
        for (a, b) in f0.as_array().iter().zip(f1.as_array()) {
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{a} vs {b}");
        }
    }
}
