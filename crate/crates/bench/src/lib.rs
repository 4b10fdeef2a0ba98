//! Shared fixtures for the criterion benchmarks.

use swarmcap_core::{
    apply_norm, fit_norm, generate_cell, Condition, DataPoint, GeneratorConfig,
};

/// A normalized 512-point training slice from one simulated cell family.
pub fn normalized_batch() -> Vec<DataPoint> {
    let config = GeneratorConfig::default();
    let condition = Condition::table()[3].clone();
    let mut points = Vec::new();
    for cell in 0..4 {
        let cell_points =
            generate_cell(&config, &condition, &format!("bench-{cell}"), cell as u64, 128)
                .expect("valid generator config");
        points.extend(cell_points);
    }
    let stats = fit_norm(&points).expect("non-degenerate features");
    apply_norm(&stats, &points)
}
