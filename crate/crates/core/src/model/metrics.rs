//! Capacity-space error metrics: MAPE (percent) and RMSE (Ah).

use serde::{Deserialize, Serialize};

use crate::data::normalize::NormStats;
use crate::data::point::DataPoint;
use crate::error::{Error, Result};
use crate::model::arch::ParamVector;
use crate::model::net::predict;

/// Evaluation result over `n` points. `mape` is in percent, `rmse` in Ah.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub mape: f64,
    pub rmse: f64,
    pub n: usize,
}

impl Metrics {
    /// Computes both metrics from paired (prediction, label) capacities in
    /// Ah. Labels must be strictly positive for MAPE to be well-defined.
    pub fn from_pairs(predictions: &[f64], labels: &[f64]) -> Result<Self> {
        if predictions.is_empty() {
            return Err(Error::Input("metrics over empty set".into()));
        }
        if predictions.len() != labels.len() {
            return Err(Error::Shape(format!(
                "{} predictions vs {} labels",
                predictions.len(),
                labels.len()
            )));
        }
        let mut ape_sum = 0.0;
        let mut sq_sum = 0.0;
        for (&q_hat, &q) in predictions.iter().zip(labels) {
            if !(q > 0.0) {
                return Err(Error::Input(format!("nonpositive capacity label {q}")));
            }
            if !q_hat.is_finite() {
                return Err(Error::Input(format!("non-finite prediction {q_hat}")));
            }
            ape_sum += (q_hat - q).abs() / q;
            sq_sum += (q_hat - q) * (q_hat - q);
        }
        let n = predictions.len();
        Ok(Self {
            mape: 100.0 * ape_sum / n as f64,
            rmse: (sq_sum / n as f64).sqrt(),
            n,
        })
    }
}

/// Runs the model over raw (un-normalized) `data` and reports errors in
/// capacity space: features are scaled through `stats` on the way in and
/// predictions mapped back to Ah on the way out.
pub fn evaluate(params: &ParamVector, data: &[DataPoint], stats: &NormStats) -> Result<Metrics> {
    if data.is_empty() {
        return Err(Error::Input("evaluate over empty set".into()));
    }
    let mut predictions = Vec::with_capacity(data.len());
    let mut labels = Vec::with_capacity(data.len());
    for p in data {
        let f = stats.normalize_features(&p.features);
        let y = predict(params, &f)?;
        predictions.push(stats.denormalize_capacity(y));
        labels.push(p.capacity_ah);
    }
    Metrics::from_pairs(&predictions, &labels)
}
