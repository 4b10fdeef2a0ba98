//! Mini-batch training: one seeded-shuffled pass over a training set.

use rand::seq::SliceRandom;

use crate::data::point::DataPoint;
use crate::error::{Error, Result};
use crate::model::arch::ParamVector;
use crate::model::net::loss_and_gradient;
use crate::rng;

/// Gradient-descent flavor applied per mini-batch.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Optimizer {
    Sgd,
    Adam { beta1: f64, beta2: f64, epsilon: f64 },
}

impl Default for Optimizer {
    fn default() -> Self {
        Optimizer::Adam {
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Training hyperparameters. The loss is fixed: mean squared error on the
/// normalized capacity label.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainHyper {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub optimizer: Optimizer,
}

impl Default for TrainHyper {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            batch_size: 32,
            optimizer: Optimizer::default(),
        }
    }
}

impl TrainHyper {
    /// Plain SGD with the given step size, default batch size.
    pub fn sgd(learning_rate: f64) -> Self {
        Self {
            learning_rate,
            optimizer: Optimizer::Sgd,
            ..Self::default()
        }
    }

    /// A zero learning rate is allowed: it turns the epoch into a pure
    /// loss evaluation, which is useful as a probe.
    pub fn validate(&self) -> Result<()> {
        if !self.learning_rate.is_finite() || self.learning_rate < 0.0 {
            return Err(Error::Config(format!(
                "learning_rate must be finite and >= 0, got {}",
                self.learning_rate
            )));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch_size must be >= 1".into()));
        }
        if let Optimizer::Adam {
            beta1,
            beta2,
            epsilon,
        } = self.optimizer
        {
            if !(0.0..1.0).contains(&beta1) || !(0.0..1.0).contains(&beta2) {
                return Err(Error::Config(format!(
                    "adam betas must lie in [0, 1), got ({beta1}, {beta2})"
                )));
            }
            if !(epsilon > 0.0) || !epsilon.is_finite() {
                return Err(Error::Config(format!(
                    "adam epsilon must be finite and > 0, got {epsilon}"
                )));
            }
        }
        Ok(())
    }
}

/// Per-epoch optimizer state. Fresh state per [`train_epoch`] call keeps the
/// function pure in (params, train, hyper, seed).
struct AdamState {
    m: Vec<f64>,
    v: Vec<f64>,
    t: u32,
}

/// One full pass over `train` in seeded-shuffled mini-batches.
///
/// Returns the updated parameters and the mean per-sample loss of the epoch
/// (each batch loss weighted by its size). Deterministic in all arguments.
pub fn train_epoch(
    params: &ParamVector,
    train: &[DataPoint],
    hyper: &TrainHyper,
    seed: u64,
) -> Result<(ParamVector, f64)> {
    if train.is_empty() {
        return Err(Error::Input("train_epoch over empty training set".into()));
    }
    hyper.validate()?;

    let mut order: Vec<usize> = (0..train.len()).collect();
    order.shuffle(&mut rng::rng_from(&[SHUFFLE_STREAM, seed]));

    let mut current = params.clone();
    let mut adam = AdamState {
        m: vec![0.0; params.len()],
        v: vec![0.0; params.len()],
        t: 0,
    };
    let mut loss_sum = 0.0;

    let mut batch = Vec::with_capacity(hyper.batch_size.min(train.len()));
    for chunk in order.chunks(hyper.batch_size) {
        batch.clear();
        batch.extend(chunk.iter().map(|&i| train[i].clone()));
        let (loss, grad) = loss_and_gradient(&current, &batch)?;
        loss_sum += loss * batch.len() as f64;
        apply_update(&mut current, &grad, hyper, &mut adam);
    }
    Ok((current, loss_sum / train.len() as f64))
}

const SHUFFLE_STREAM: u64 = 0x45504f_4348;

fn apply_update(params: &mut ParamVector, grad: &[f64], hyper: &TrainHyper, adam: &mut AdamState) {
    let lr = hyper.learning_rate;
    match hyper.optimizer {
        Optimizer::Sgd => {
            for (p, g) in params.values_mut().iter_mut().zip(grad) {
                *p -= lr * g;
            }
        }
        Optimizer::Adam {
            beta1,
            beta2,
            epsilon,
        } => {
            adam.t += 1;
            let bc1 = 1.0 - beta1.powi(adam.t as i32);
            let bc2 = 1.0 - beta2.powi(adam.t as i32);
            for (i, (p, g)) in params.values_mut().iter_mut().zip(grad).enumerate() {
                adam.m[i] = beta1 * adam.m[i] + (1.0 - beta1) * g;
                adam.v[i] = beta2 * adam.v[i] + (1.0 - beta2) * g * g;
                let m_hat = adam.m[i] / bc1;
                let v_hat = adam.v[i] / bc2;
                *p -= lr * m_hat / (v_hat.sqrt() + epsilon);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::condition::Condition;
    use crate::data::curve::FeatureVector;
    use crate::model::arch::Architecture;
    use crate::model::net::{init_params, mse_loss};
    use rand::Rng;

    fn point(features: [f64; 3], target: f64) -> DataPoint {
        DataPoint::new(
            "t",
            0,
            Condition::new(25.0, 0.5, 1.0),
            FeatureVector::new(features[0], features[1], features[2]),
            target,
        )
    }

    fn random_set(n: usize, seed: u64) -> Vec<DataPoint> {
        let mut r = rng::rng_from(&[1001, seed]);
        (0..n)
            .map(|_| {
                let f = [
                    r.gen_range(0.0..1.0),
                    r.gen_range(0.0..1.0),
                    r.gen_range(0.0..1.0),
                ];
                // learnable linear target inside [0, 1]
                let y = 0.2 + 0.3 * f[0] + 0.25 * f[1] + 0.15 * f[2];
                point(f, y)
            })
            .collect()
    }

    #[test]
    fn zero_learning_rate_is_a_pure_evaluation() {
        let p = init_params(&Architecture::default(), 5);
        let train = random_set(100, 0);
        let hyper = TrainHyper {
            learning_rate: 0.0,
            ..TrainHyper::default()
        };
        let (after, loss) = train_epoch(&p, &train, &hyper, 9).unwrap();
        assert_eq!(after, p);
        let eval = mse_loss(&p, &train).unwrap();
        assert!((loss - eval).abs() < 1e-12, "{loss} vs {eval}");
    }

    #[test]
    fn overfits_a_single_point() {
        let p = init_params(&Architecture::default(), 5);
        let train = vec![point([0.3, 0.6, 0.2], 0.55)];
        let hyper = TrainHyper::sgd(0.02);
        let mut current = p;
        let mut loss = f64::INFINITY;
        for epoch in 0..500 {
            let (next, l) = train_epoch(&current, &train, &hyper, epoch).unwrap();
            current = next;
            loss = l;
        }
        assert!(loss < 1e-6, "final loss {loss}");
    }

    #[test]
    fn loss_drops_on_a_linear_mapping() {
        let p = init_params(&Architecture::default(), 11);
        let train = random_set(256, 3);
        let hyper = TrainHyper::default();
        let (_, first_loss) = train_epoch(&p, &train, &hyper, 0).unwrap();
        let mut current = p;
        let mut last_loss = f64::INFINITY;
        for epoch in 0..100 {
            let (next, l) = train_epoch(&current, &train, &hyper, epoch).unwrap();
            current = next;
            last_loss = l;
        }
        assert!(
            last_loss < first_loss,
            "epoch 100 loss {last_loss} vs epoch 1 loss {first_loss}"
        );
    }

    #[test]
    fn deterministic_in_seed_and_sensitive_to_it() {
        let p = init_params(&Architecture::default(), 2);
        let train = random_set(64, 7);
        let hyper = TrainHyper::default();
        let (a, la) = train_epoch(&p, &train, &hyper, 42).unwrap();
        let (b, lb) = train_epoch(&p, &train, &hyper, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(la, lb);
        let (c, _) = train_epoch(&p, &train, &hyper, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn full_batch_sgd_equals_one_explicit_step() {
        let p = init_params(&Architecture::default(), 8);
        let train = random_set(16, 2);
        let hyper = TrainHyper {
            batch_size: train.len(),
            ..TrainHyper::sgd(0.05)
        };
        let (after, _) = train_epoch(&p, &train, &hyper, 0).unwrap();
        let grad = crate::model::net::gradient(&p, &train).unwrap();
        for ((a, b), g) in after.values().iter().zip(p.values()).zip(&grad) {
            assert!((a - (b - 0.05 * g)).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_empty_train_and_bad_hyper() {
        let p = init_params(&Architecture::default(), 1);
        assert!(train_epoch(&p, &[], &TrainHyper::default(), 0).is_err());
        let train = random_set(4, 0);
        let bad = TrainHyper {
            batch_size: 0,
            ..TrainHyper::default()
        };
        assert!(train_epoch(&p, &train, &bad, 0).is_err());
        let bad = TrainHyper {
            learning_rate: -0.1,
            ..TrainHyper::default()
        };
        assert!(train_epoch(&p, &train, &bad, 0).is_err());
    }
}
