//! Credibility scoring and the credibility-weighted parameter averaging
//! counters.
//!
//! Every sync cycle, each node's freshly trained model is scored on the
//! shared validation set and compared against the score of the current
//! global model. Nodes that beat the global model collect positive counts;
//! the counter ratio, softened by the offset `alpha`, becomes the node's
//! raw merge weight.

use serde::{Deserialize, Serialize};

use crate::data::normalize::NormStats;
use crate::data::point::DataPoint;
use crate::error::{Error, Result};
use crate::model::arch::ParamVector;
use crate::model::metrics::evaluate;

/// Per-node counters and the credibility offset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CwpaState {
    pub p: u32,
    pub n: u32,
    pub alpha: f64,
}

impl CwpaState {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::Config(format!(
                "alpha must be finite and >= 0, got {alpha}"
            )));
        }
        Ok(Self { p: 0, n: 0, alpha })
    }

    /// Raw merge weight `(p + alpha) / (p + n + alpha)`.
    pub fn weight(&self) -> Result<f64> {
        let denominator = self.p as f64 + self.n as f64 + self.alpha;
        if denominator == 0.0 {
            return Err(Error::UndefinedWeight(
                "p = n = 0 with alpha = 0 leaves the weight undefined".into(),
            ));
        }
        Ok((self.p as f64 + self.alpha) / denominator)
    }
}

/// Credibility of a model: the negated validation MAPE as a fraction, so
/// higher is better and a perfect model scores 0.
pub fn credibility(
    params: &ParamVector,
    validation: &[DataPoint],
    stats: &NormStats,
) -> Result<f64> {
    let metrics = evaluate(params, validation, stats)?;
    Ok(-(metrics.mape / 100.0))
}

/// One counter update: the positive counter if the node strictly beats the
/// global score, the negative counter otherwise (ties count negative).
pub fn cwpa_step(state: &CwpaState, c_node: f64, c_global: f64) -> Result<CwpaState> {
    if !c_node.is_finite() || !c_global.is_finite() {
        return Err(Error::Input(format!(
            "credibility scores must be finite, got C_i = {c_node}, C_a = {c_global}"
        )));
    }
    let mut next = *state;
    if c_node > c_global {
        next.p += 1;
    } else {
        next.n += 1;
    }
    Ok(next)
}
