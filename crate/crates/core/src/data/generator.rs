//! Parametric synthetic generator standing in for the real cycling dataset.
//!
//! Each cell fades as `Q(k) = Q0 * (1 - a * (k/K)^b)` and emits one
//! relaxation curve per cycle, modeled as a two-exponential decay toward the
//! open-circuit voltage: `V(t) = V_ocv(SOH) + A1 * exp(-t/tau1) + A2 *
//! exp(-t/tau2)` plus Gaussian sensor noise. Amplitudes and time constants
//! stretch with age through a `(2 - SOH)` factor, and every cycling
//! condition shifts the fade depth, time constants, and amplitudes so
//! conditions stay distribution-distinct.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::data::condition::Condition;
use crate::data::curve::{extract_features, RelaxationCurve, MIN_CURVE_SAMPLES};
use crate::data::point::DataPoint;
use crate::error::{Error, Result};
use crate::rng;

/// Per-condition shifts applied on top of the baseline cell model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConditionOffsets {
    pub fade_depth_delta: f64,
    pub tau1_delta_s: f64,
    pub tau2_delta_s: f64,
    pub amp_scale: f64,
}

impl Default for ConditionOffsets {
    fn default() -> Self {
        Self {
            fade_depth_delta: 0.0,
            tau1_delta_s: 0.0,
            tau2_delta_s: 0.0,
            amp_scale: 1.0,
        }
    }
}

/// All generator constants. Every field is overridable from config files;
/// the defaults produce the documented dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorConfig {
    /// Nameplate capacity Q0 in Ah.
    pub nominal_capacity_ah: f64,
    /// Relative per-cell jitter of the initial capacity.
    pub capacity_spread: f64,
    /// Per-cell fade depth `a` is drawn uniformly from this range.
    pub fade_depth_range: [f64; 2],
    /// Per-cell fade shape `b` is drawn uniformly from this range.
    pub fade_shape_range: [f64; 2],
    /// Reference cycle count K in the fade law.
    pub reference_cycles: f64,
    /// Baseline fast and slow relaxation time constants in seconds.
    pub base_tau1_s: f64,
    pub base_tau2_s: f64,
    /// Baseline overpotential amplitudes in volts.
    pub base_amp1_v: f64,
    pub base_amp2_v: f64,
    /// Open-circuit voltage range; SOH in [0, 1] maps affinely into it.
    pub ocv_range_v: [f64; 2],
    /// Relative per-cell jitter of time constants and amplitudes. These
    /// nuisance draws perturb features without moving labels.
    pub cell_param_spread: f64,
    /// Standard deviation of additive voltage noise in volts.
    pub noise_sigma_v: f64,
    /// Samples per relaxation curve and total observation window.
    pub curve_samples: usize,
    pub curve_duration_s: f64,
    /// Per-condition shifts, keyed by condition tag. Generating a condition
    /// absent from this table is a configuration error.
    pub condition_offsets: BTreeMap<String, ConditionOffsets>,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        let mut condition_offsets = BTreeMap::new();
        condition_offsets.insert(
            "CY25-0.25/1".to_string(),
            ConditionOffsets {
                fade_depth_delta: -0.05,
                tau1_delta_s: 3.0,
                tau2_delta_s: 30.0,
                amp_scale: 1.10,
            },
        );
        condition_offsets.insert(
            "CY25-0.5/1".to_string(),
            ConditionOffsets {
                fade_depth_delta: -0.02,
                tau1_delta_s: 2.0,
                tau2_delta_s: 15.0,
                amp_scale: 1.00,
            },
        );
        condition_offsets.insert(
            "CY25-1/1".to_string(),
            ConditionOffsets {
                fade_depth_delta: 0.03,
                tau1_delta_s: 1.0,
                tau2_delta_s: 5.0,
                amp_scale: 0.95,
            },
        );
        condition_offsets.insert(
            "CY45-0.5/1".to_string(),
            ConditionOffsets {
                fade_depth_delta: 0.06,
                tau1_delta_s: -4.0,
                tau2_delta_s: -35.0,
                amp_scale: 0.75,
            },
        );
        Self {
            nominal_capacity_ah: 3.5,
            capacity_spread: 0.05,
            fade_depth_range: [0.15, 0.35],
            fade_shape_range: [0.8, 1.2],
            reference_cycles: 600.0,
            base_tau1_s: 10.0,
            base_tau2_s: 100.0,
            base_amp1_v: 0.08,
            base_amp2_v: 0.07,
            ocv_range_v: [3.9, 4.2],
            cell_param_spread: 0.01,
            noise_sigma_v: 0.0005,
            curve_samples: 120,
            curve_duration_s: 1800.0,
            condition_offsets,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        let check_pos = |name: &str, v: f64| {
            if !(v > 0.0) || !v.is_finite() {
                Err(Error::Config(format!("{name} must be finite and > 0, got {v}")))
            } else {
                Ok(())
            }
        };
        check_pos("nominal_capacity_ah", self.nominal_capacity_ah)?;
        check_pos("reference_cycles", self.reference_cycles)?;
        check_pos("base_tau1_s", self.base_tau1_s)?;
        check_pos("base_tau2_s", self.base_tau2_s)?;
        check_pos("curve_duration_s", self.curve_duration_s)?;
        for (name, v) in [
            ("capacity_spread", self.capacity_spread),
            ("cell_param_spread", self.cell_param_spread),
            ("noise_sigma_v", self.noise_sigma_v),
            ("base_amp1_v", self.base_amp1_v),
            ("base_amp2_v", self.base_amp2_v),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Config(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        if self.capacity_spread >= 1.0 || self.cell_param_spread >= 1.0 {
            return Err(Error::Config("relative spreads must be < 1".into()));
        }
        for (name, range) in [
            ("fade_depth_range", self.fade_depth_range),
            ("fade_shape_range", self.fade_shape_range),
            ("ocv_range_v", self.ocv_range_v),
        ] {
            if !(range[0] < range[1]) || !range[0].is_finite() || !range[1].is_finite() {
                return Err(Error::Config(format!(
                    "{name} must be an increasing finite pair, got [{}, {}]",
                    range[0], range[1]
                )));
            }
        }
        if self.fade_depth_range[0] <= 0.0 || self.fade_depth_range[1] >= 1.0 {
            return Err(Error::Config("fade_depth_range must lie inside (0, 1)".into()));
        }
        if self.curve_samples < MIN_CURVE_SAMPLES {
            return Err(Error::Config(format!(
                "curve_samples must be >= {MIN_CURVE_SAMPLES}, got {}",
                self.curve_samples
            )));
        }
        for (tag, offsets) in &self.condition_offsets {
            Condition::parse(tag)?;
            if self.base_tau1_s + offsets.tau1_delta_s <= 0.0
                || self.base_tau2_s + offsets.tau2_delta_s <= 0.0
            {
                return Err(Error::Config(format!(
                    "condition {tag}: offset time constants must stay positive"
                )));
            }
            if offsets.amp_scale < 0.0 || !offsets.amp_scale.is_finite() {
                return Err(Error::Config(format!(
                    "condition {tag}: amp_scale must be finite and >= 0"
                )));
            }
        }
        Ok(())
    }

    fn offsets_for(&self, condition: &Condition) -> Result<&ConditionOffsets> {
        self.condition_offsets.get(&condition.tag()).ok_or_else(|| {
            Error::Config(format!(
                "no generator offsets for condition {}",
                condition.tag()
            ))
        })
    }
}

/// Cell counts and point totals of the generated pool, in condition table
/// order. The totals are exact for any seed.
pub const POOL_COMPOSITION: [(usize, usize); 4] = [(7, 1853), (19, 3278), (9, 260), (28, 15775)];

/// Total number of points in the generated pool.
pub const POOL_TOTAL_POINTS: usize = 21166;

/// Total number of distinct cells in the generated pool.
pub const POOL_TOTAL_CELLS: usize = 63;

const CELL_STREAM: u64 = 0x4345_4c4c;
const DATASET_STREAM: u64 = 0x504f_4f4c;

/// Simulates one cell for `n_cycles` cycles. Deterministic in
/// `(config, condition, cell_seed, n_cycles)`; the id only names the cell.
pub fn generate_cell(
    config: &GeneratorConfig,
    condition: &Condition,
    cell_id: &str,
    cell_seed: u64,
    n_cycles: usize,
) -> Result<Vec<DataPoint>> {
    config.validate()?;
    if n_cycles == 0 {
        return Err(Error::Config("n_cycles must be >= 1".into()));
    }
    let offsets = config.offsets_for(condition)?;
    let mut rng = rng::rng_from(&[CELL_STREAM, cell_seed]);

    let q0 = config.nominal_capacity_ah
        * (1.0 + config.capacity_spread * rng.gen_range(-1.0..1.0));
    let fade_depth = (rng.gen_range(config.fade_depth_range[0]..config.fade_depth_range[1])
        + offsets.fade_depth_delta)
        .clamp(0.01, 0.95);
    let fade_shape = rng.gen_range(config.fade_shape_range[0]..config.fade_shape_range[1]);
    let jitter = |rng: &mut rand_chacha::ChaCha8Rng, spread: f64| {
        1.0 + spread * rng.gen_range(-1.0..1.0)
    };
    let tau1_jit = jitter(&mut rng, config.cell_param_spread);
    let tau2_jit = jitter(&mut rng, config.cell_param_spread);
    let amp1_jit = jitter(&mut rng, config.cell_param_spread);
    let amp2_jit = jitter(&mut rng, config.cell_param_spread);

    let noise = if config.noise_sigma_v > 0.0 {
        Some(Normal::new(0.0, config.noise_sigma_v).expect("validated sigma"))
    } else {
        None
    };
    let dt = config.curve_duration_s / (config.curve_samples - 1) as f64;
    let (ocv_lo, ocv_hi) = (config.ocv_range_v[0], config.ocv_range_v[1]);

    let mut points = Vec::with_capacity(n_cycles);
    for k in 1..=n_cycles {
        let wear = (k as f64 / config.reference_cycles).powf(fade_shape);
        let capacity = q0 * (1.0 - fade_depth * wear);
        if !(capacity > 0.0) {
            return Err(Error::Config(format!(
                "cell {cell_id} fades to nonpositive capacity at cycle {k}"
            )));
        }
        let soh = capacity / config.nominal_capacity_ah;
        let age = 2.0 - soh;
        let v_ocv = ocv_lo + (ocv_hi - ocv_lo) * soh;
        let tau1 = (config.base_tau1_s + offsets.tau1_delta_s) * age * tau1_jit;
        let tau2 = (config.base_tau2_s + offsets.tau2_delta_s) * age * tau2_jit;
        let amp1 = config.base_amp1_v * offsets.amp_scale * age * amp1_jit;
        let amp2 = config.base_amp2_v * offsets.amp_scale * age * amp2_jit;

        let mut samples = Vec::with_capacity(config.curve_samples);
        for i in 0..config.curve_samples {
            let t = i as f64 * dt;
            let mut v = v_ocv + amp1 * (-t / tau1).exp() + amp2 * (-t / tau2).exp();
            if let Some(n) = &noise {
                v += n.sample(&mut rng);
            }
            samples.push((t, v));
        }
        let curve = RelaxationCurve::new(samples)?;
        points.push(DataPoint::new(
            cell_id,
            k as u32,
            condition.clone(),
            extract_features(&curve),
            capacity,
        ));
    }
    Ok(points)
}

/// Generates the full pool: four conditions with fixed cell counts and
/// exact point totals. Cells are numbered `cell-01` through `cell-63` in
/// condition table order; within a condition, points per cell differ by at
/// most one so the totals come out exact.
pub fn generate_dataset(config: &GeneratorConfig, seed: u64) -> Result<Vec<DataPoint>> {
    config.validate()?;
    let conditions = Condition::table();
    let mut pool = Vec::with_capacity(POOL_TOTAL_POINTS);
    let mut cell_number = 0usize;
    for (cond_idx, (condition, (n_cells, total_points))) in
        conditions.iter().zip(POOL_COMPOSITION).enumerate()
    {
        let base = total_points / n_cells;
        let remainder = total_points % n_cells;
        for cell_idx in 0..n_cells {
            cell_number += 1;
            let n_cycles = base + usize::from(cell_idx < remainder);
            let cell_id = format!("cell-{cell_number:02}");
            let cell_seed = rng::mix(&[DATASET_STREAM, seed, cond_idx as u64, cell_idx as u64]);
            pool.extend(generate_cell(config, condition, &cell_id, cell_seed, n_cycles)?);
        }
    }
    debug_assert_eq!(pool.len(), POOL_TOTAL_POINTS);
    debug_assert_eq!(cell_number, POOL_TOTAL_CELLS);
    Ok(pool)
}
