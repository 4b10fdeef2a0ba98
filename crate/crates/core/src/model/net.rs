//! Forward pass, backpropagation, and parameter initialization for the
//! fully connected regressor.
//!
//! Hidden layers use ReLU, the output is linear. The loss this module
//! differentiates is the mean squared error over a batch:
//! `L = (1/B) * sum_b (y_hat_b - y_b)^2`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::point::DataPoint;
use crate::error::{Error, Result};
use crate::model::arch::{Architecture, ParamVector};

/// Deterministic Glorot-uniform initialization.
///
/// Layer `l` draws its weights from `U(-sqrt(6/(fan_in+fan_out)), +...)`
/// using a ChaCha8 stream on `seed` with the layer index as the stream id,
/// so layers are decorrelated and the whole vector is reproducible from one
/// 64-bit seed. Biases start at zero.
pub fn init_params(arch: &Architecture, seed: u64) -> ParamVector {
    let mut values = Vec::with_capacity(arch.param_count());
    for (layer_idx, (fan_in, fan_out)) in arch.transitions().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(layer_idx as u64 + 1);
        let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
        for _ in 0..fan_in * fan_out {
            values.push(rng.gen_range(-limit..limit));
        }
        values.extend(std::iter::repeat(0.0).take(fan_out));
    }
    ParamVector::new(arch.clone(), values).expect("init layout matches arch")
}

/// Activations for every layer of one forward evaluation.
pub(crate) struct Activations {
    /// `layers[0]` is the input; `layers.last()` the network output.
    pub layers: Vec<Vec<f64>>,
}

/// Runs the network on `input` (length must equal the input width), keeping
/// per-layer activations for backprop.
pub(crate) fn forward(params: &ParamVector, input: &[f64]) -> Activations {
    let arch = params.arch();
    debug_assert_eq!(input.len(), arch.input_width());
    let n_transitions = arch.layer_sizes().len() - 1;
    let mut layers = Vec::with_capacity(n_transitions + 1);
    layers.push(input.to_vec());
    let values = params.values();
    let mut offset = 0;
    for (t, (fan_in, fan_out)) in arch.transitions().enumerate() {
        let weights = &values[offset..offset + fan_in * fan_out];
        let biases = &values[offset + fan_in * fan_out..offset + fan_in * fan_out + fan_out];
        offset += fan_in * fan_out + fan_out;
        let prev = layers.last().expect("at least input layer");
        let mut next = Vec::with_capacity(fan_out);
        let last = t == n_transitions - 1;
        for j in 0..fan_out {
            let row = &weights[j * fan_in..(j + 1) * fan_in];
            let mut z = biases[j];
            for (w, a) in row.iter().zip(prev) {
                z += w * a;
            }
            next.push(if last { z } else { z.max(0.0) });
        }
        layers.push(next);
    }
    Activations { layers }
}

/// Scalar network output for one feature triple.
///
/// Inputs are expected in normalized feature space; the result is the
/// normalized capacity estimate.
pub fn predict(params: &ParamVector, features: &[f64]) -> Result<f64> {
    if features.len() != params.arch().input_width() {
        return Err(Error::Shape(format!(
            "expected {} inputs, got {}",
            params.arch().input_width(),
            features.len()
        )));
    }
    if features.iter().any(|v| !v.is_finite()) {
        return Err(Error::Input("non-finite feature input".into()));
    }
    let acts = forward(params, features);
    Ok(acts.layers.last().expect("output layer")[0])
}

/// Mean squared error over `points` in normalized space.
pub fn mse_loss(params: &ParamVector, points: &[DataPoint]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Input("mse_loss over empty set".into()));
    }
    let mut total = 0.0;
    for p in points {
        let y = predict(params, &p.features.as_array())?;
        let d = y - p.capacity_ah;
        total += d * d;
    }
    Ok(total / points.len() as f64)
}

/// Batch-mean loss and its gradient in one pass.
///
/// Returns `(loss, grad)` where `grad` has the canonical flat layout of
/// [`ParamVector`]. ReLU uses the zero subgradient at the kink.
pub fn loss_and_gradient(params: &ParamVector, batch: &[DataPoint]) -> Result<(f64, Vec<f64>)> {
    if batch.is_empty() {
        return Err(Error::Input("gradient over empty batch".into()));
    }
    let arch = params.arch();
    let dims: Vec<(usize, usize)> = arch.transitions().collect();
    let n_transitions = dims.len();
    let values = params.values();
    let mut grad = vec![0.0; values.len()];
    let inv_b = 1.0 / batch.len() as f64;
    let mut loss = 0.0;

    // Per-transition parameter offsets into the flat layout.
    let mut offsets = Vec::with_capacity(n_transitions);
    let mut off = 0;
    for &(fan_in, fan_out) in &dims {
        offsets.push(off);
        off += fan_in * fan_out + fan_out;
    }

    for point in batch {
        let input = point.features.as_array();
        if !point.features.is_finite() || !point.capacity_ah.is_finite() {
            return Err(Error::Input("non-finite training sample".into()));
        }
        let acts = forward(params, &input);
        let y = acts.layers[n_transitions][0];
        let err = y - point.capacity_ah;
        loss += err * err * inv_b;

        // delta over the output layer, then walk transitions backwards.
        let mut delta = vec![2.0 * err * inv_b];
        for t in (0..n_transitions).rev() {
            let (fan_in, fan_out) = dims[t];
            let base = offsets[t];
            let prev = &acts.layers[t];
            for j in 0..fan_out {
                let dj = delta[j];
                if dj == 0.0 {
                    continue;
                }
                let w_row = base + j * fan_in;
                for i in 0..fan_in {
                    grad[w_row + i] += dj * prev[i];
                }
                grad[base + fan_in * fan_out + j] += dj;
            }
            if t == 0 {
                break;
            }
            // Propagate into the previous hidden layer through W^T, gated by
            // the ReLU mask (activation > 0 implies the unit was live).
            let weights = &values[base..base + fan_in * fan_out];
            let mut next_delta = vec![0.0; fan_in];
            for (i, nd) in next_delta.iter_mut().enumerate() {
                if prev[i] <= 0.0 {
                    continue;
                }
                let mut s = 0.0;
                for (j, dj) in delta.iter().enumerate() {
                    s += weights[j * fan_in + i] * dj;
                }
                *nd = s;
            }
            delta = next_delta;
        }
    }
    Ok((loss, grad))
}

/// Gradient of the batch-mean squared error, canonical flat layout.
pub fn gradient(params: &ParamVector, batch: &[DataPoint]) -> Result<Vec<f64>> {
    loss_and_gradient(params, batch).map(|(_, g)| g)
}
