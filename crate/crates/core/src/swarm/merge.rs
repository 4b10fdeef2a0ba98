//! Weighted parameter averaging: the merge step of every sync cycle.

use crate::error::{Error, Result};
use crate::model::arch::{axpy_params, ParamVector};

/// Merges node parameters by their normalized raw weights. Weights must be
/// nonnegative with a positive sum; the result is the convex combination
/// `sum_i (raw_i / sum raw) * params_i`, accumulated in list order (callers
/// pass nodes in ascending id order, so the result is bit-reproducible).
pub fn merge(params_list: &[ParamVector], raw_weights: &[f64]) -> Result<ParamVector> {
    if params_list.is_empty() {
        return Err(Error::Input("merge of zero nodes".into()));
    }
    if params_list.len() != raw_weights.len() {
        return Err(Error::Shape(format!(
            "{} parameter vectors vs {} weights",
            params_list.len(),
            raw_weights.len()
        )));
    }
    for &w in raw_weights {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::Input(format!(
                "merge weights must be finite and >= 0, got {w}"
            )));
        }
    }
    let total: f64 = raw_weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::DegenerateMerge(
            "all merge weights are zero".into(),
        ));
    }
    let normalized: Vec<f64> = raw_weights.iter().map(|w| w / total).collect();
    let refs: Vec<&ParamVector> = params_list.iter().collect();
    axpy_params(&normalized, &refs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::arch::Architecture;
    use crate::model::net::init_params;
    use crate::rng;
    use rand::Rng;

    fn vectors(n: usize) -> Vec<ParamVector> {
        let arch = Architecture::default();
        (0..n).map(|i| init_params(&arch, 100 + i as u64)).collect()
    }

    #[test]
    fn equal_weights_give_the_elementwise_mean() {
        let vs = vectors(2);
        let merged = merge(&vs, &[1.0, 1.0]).unwrap();
        for ((m, a), b) in merged.values().iter().zip(vs[0].values()).zip(vs[1].values()) {
            assert_eq!(*m, a * 0.5 + b * 0.5);
        }
    }

    #[test]
    fn zero_weight_nodes_drop_out_exactly() {
        let vs = vectors(2);
        let merged = merge(&vs, &[1.0, 0.0]).unwrap();
        assert_eq!(merged, vs[0]);
    }

    #[test]
    fn weight_scaling_does_not_matter() {
        let vs = vectors(3);
        let a = merge(&vs, &[1.0, 1.0, 1.0]).unwrap();
        let b = merge(&vs, &[2.0, 2.0, 2.0]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn matches_a_brute_force_average() {
        for n_nodes in 2..=8 {
            let vs = vectors(n_nodes);
            let mut r = rng::rng_from(&[55, n_nodes as u64]);
            let weights: Vec<f64> = (0..n_nodes).map(|_| r.gen_range(0.1..5.0)).collect();
            let merged = merge(&vs, &weights).unwrap();
            let total: f64 = weights.iter().sum();
            for idx in 0..merged.len() {
                let expected: f64 = vs
                    .iter()
                    .zip(&weights)
                    .map(|(v, w)| w / total * v.values()[idx])
                    .sum();
                assert!(
                    (merged.values()[idx] - expected).abs() < 1e-12,
                    "node count {n_nodes}, element {idx}"
                );
            }
        }
    }

    #[test]
    fn result_is_a_convex_combination() {
        let vs = vectors(5);
        let merged = merge(&vs, &[0.3, 1.2, 0.8, 2.0, 0.1]).unwrap();
        for idx in 0..merged.len() {
            let lo = vs.iter().map(|v| v.values()[idx]).fold(f64::INFINITY, f64::min);
            let hi = vs
                .iter()
                .map(|v| v.values()[idx])
                .fold(f64::NEG_INFINITY, f64::max);
            let slack = 1e-12 * hi.abs().max(lo.abs()).max(1.0);
            let m = merged.values()[idx];
            assert!(m >= lo - slack && m <= hi + slack, "element {idx}");
        }
    }

    #[test]
    fn degenerate_and_invalid_inputs_are_rejected() {
        let vs = vectors(2);
        assert!(matches!(
            merge(&vs, &[0.0, 0.0]).unwrap_err(),
            Error::DegenerateMerge(_)
        ));
        assert!(merge(&vs, &[1.0]).is_err());
        assert!(merge(&vs, &[1.0, -0.5]).is_err());
        assert!(merge(&vs, &[1.0, f64::NAN]).is_err());
        assert!(merge(&[], &[]).is_err());

        let other = ParamVector::zeros(Architecture::new(vec![3, 4, 1]).unwrap());
        let mixed = vec![vs[0].clone(), other];
        assert!(matches!(
            merge(&mixed, &[1.0, 1.0]).unwrap_err(),
            Error::Shape(_)
        ));
    }
}
