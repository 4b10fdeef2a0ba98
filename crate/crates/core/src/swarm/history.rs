//! Sync-history export: one CSV row per (cycle, node) and a structured
//! JSON form carrying the full records.

use std::path::Path;

use crate::error::Result;
use crate::swarm::runner::SyncRecord;

const HEADER: [&str; 9] = [
    "cycle",
    "node_id",
    "c_i",
    "c_a",
    "p",
    "n",
    "w_raw",
    "w_norm",
    "global_val_mape",
];

/// Writes the per-cycle, per-node history table.
pub fn save_history_csv(history: &[SyncRecord], path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(HEADER)?;
    for record in history {
        for node in &record.nodes {
            writer.write_record([
                record.cycle.to_string(),
                node.node_id.to_string(),
                node.credibility.to_string(),
                record.c_global.to_string(),
                node.p.to_string(),
                node.n.to_string(),
                node.w_raw.to_string(),
                node.w_norm.to_string(),
                record.val_metrics.mape.to_string(),
            ])?;
        }
    }
    writer.flush()?;
    Ok(())
}

/// Writes the full records as pretty-printed JSON.
pub fn save_history_json(history: &[SyncRecord], path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(history)?;
    std::fs::write(path, text.as_bytes())?;
    Ok(())
}

/// Reads a JSON history back.
pub fn load_history_json(path: &Path) -> Result<Vec<SyncRecord>> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::metrics::Metrics;
    use crate::swarm::runner::NodeCycleRecord;
    use std::fs;

    fn sample_history(cycles: usize, nodes: usize) -> Vec<SyncRecord> {
        (1..=cycles)
            .map(|cycle| SyncRecord {
                cycle,
                coordinator: (cycle - 1) % nodes,
                c_global: -0.01 * cycle as f64,
                nodes: (0..nodes)
                    .map(|node_id| NodeCycleRecord {
                        node_id,
                        credibility: -0.02 / (cycle * (node_id + 1)) as f64,
                        p: cycle as u32,
                        n: 0,
                        w_raw: 1.0,
                        w_norm: 1.0 / nodes as f64,
                    })
                    .collect(),
                val_metrics: Metrics {
                    mape: 1.0 / cycle as f64,
                    rmse: 0.05,
                    n: 100,
                },
            })
            .collect()
    }

    #[test]
    fn csv_has_one_row_per_cycle_and_node() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("history.csv");
        let history = sample_history(4, 3);
        save_history_csv(&history, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], HEADER.join(","));
        assert_eq!(lines.len(), 1 + 4 * 3);
        assert!(lines[1].starts_with("1,0,"));
        assert!(lines.last().unwrap().starts_with("4,2,"));
    }

    #[test]
    fn json_roundtrips_and_is_byte_stable() {
        let dir = tempfile::tempdir().unwrap();
        let first = dir.path().join("a.json");
        let second = dir.path().join("b.json");
        let history = sample_history(3, 2);
        save_history_json(&history, &first).unwrap();
        let loaded = load_history_json(&first).unwrap();
        assert_eq!(loaded, history);
        save_history_json(&loaded, &second).unwrap();
        assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
    }
}
