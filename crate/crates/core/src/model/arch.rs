//! Network architecture and the flat parameter vector exchanged between
//! nodes.
//!
//! Parameters live in one canonical flat layout so that merging is plain
//! vector arithmetic: for each layer transition, the weight matrix in
//! row-major order (one row per output unit), then that layer's biases.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Layer widths of a fully connected regressor, input first, output last.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Architecture {
    layer_sizes: Vec<usize>,
}

impl Architecture {
    /// Validates layer sizes: at least two layers, every width >= 1, and a
    /// scalar output.
    pub fn new(layer_sizes: Vec<usize>) -> Result<Self> {
        if layer_sizes.len() < 2 {
            return Err(Error::Config(format!(
                "architecture needs at least 2 layers, got {}",
                layer_sizes.len()
            )));
        }
        if layer_sizes.iter().any(|&s| s == 0) {
            return Err(Error::Config(format!(
                "architecture layer sizes must be >= 1, got {layer_sizes:?}"
            )));
        }
        let out = *layer_sizes.last().expect("len checked");
        if out != 1 {
            return Err(Error::Config(format!(
                "output layer must have exactly 1 unit, got {out}"
            )));
        }
        Ok(Self { layer_sizes })
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn input_width(&self) -> usize {
        self.layer_sizes[0]
    }

    /// (fan_in, fan_out) per layer transition.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.layer_sizes.windows(2).map(|w| (w[0], w[1]))
    }

    /// Total number of weights and biases.
    pub fn param_count(&self) -> usize {
        self.transitions().map(|(i, o)| i * o + o).sum()
    }
}

impl Default for Architecture {
    /// Three input features feeding hidden layers of 12 and 8 units and a
    /// scalar capacity output.
    fn default() -> Self {
        Self {
            layer_sizes: vec![3, 12, 8, 1],
        }
    }
}

/// All weights and biases of one network, flattened in canonical order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamVector {
    arch: Architecture,
    values: Vec<f64>,
}

impl ParamVector {
    /// Wraps raw values; the length must match the architecture and every
    /// value must be finite.
    pub fn new(arch: Architecture, values: Vec<f64>) -> Result<Self> {
        if values.len() != arch.param_count() {
            return Err(Error::Shape(format!(
                "expected {} parameters for {:?}, got {}",
                arch.param_count(),
                arch.layer_sizes(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("non-finite parameter value".into()));
        }
        Ok(Self { arch, values })
    }

    /// All-zero parameters.
    pub fn zeros(arch: Architecture) -> Self {
        let n = arch.param_count();
        Self {
            arch,
            values: vec![0.0; n],
        }
    }

    pub fn arch(&self) -> &Architecture {
        &self.arch
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Element-wise linear combination `sum_i coefficients[i] * params[i]`.
///
/// All vectors must share one architecture; the sum runs in list order so the
/// result is bit-reproducible for a fixed input order.
pub fn axpy_params(coefficients: &[f64], params: &[&ParamVector]) -> Result<ParamVector> {
    if params.is_empty() {
        return Err(Error::Input("axpy_params needs at least one vector".into()));
    }
    if coefficients.len() != params.len() {
        return Err(Error::Input(format!(
            "coefficient count {} != vector count {}",
            coefficients.len(),
            params.len()
        )));
    }
    let arch = params[0].arch();
    for p in &params[1..] {
        if p.arch() != arch {
            return Err(Error::Shape(format!(
                "architecture mismatch: {:?} vs {:?}",
                arch.layer_sizes(),
                p.arch().layer_sizes()
            )));
        }
    }
    let mut out = vec![0.0; params[0].len()];
    for (&c, p) in coefficients.iter().zip(params) {
        for (o, v) in out.iter_mut().zip(p.values()) {
            *o += c * v;
        }
    }
    ParamVector::new(arch.clone(), out)
}
