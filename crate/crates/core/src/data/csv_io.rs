//! Dataset CSV ingestion and export.
//!
//! Schema (UTF-8, header required, '.' decimal separator):
//! `cell_id,cycle_index,condition,recorded_condition,feature_variance,
//! feature_skewness,feature_max,capacity_ah`. Floats are written in Rust's
//! shortest round-trip form, so save, load, save is byte-stable. The
//! generator-side `tampered` flag is ground truth withheld from learners
//! and is deliberately not persisted.

use std::path::Path;

use crate::data::condition::Condition;
use crate::data::curve::FeatureVector;
use crate::data::point::DataPoint;
use crate::error::{Error, Result};

const HEADER: [&str; 8] = [
    "cell_id",
    "cycle_index",
    "condition",
    "recorded_condition",
    "feature_variance",
    "feature_skewness",
    "feature_max",
    "capacity_ah",
];

/// Writes `points` in row order.
pub fn save_csv(points: &[DataPoint], path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(HEADER)?;
    for p in points {
        writer.write_record([
            p.cell_id.as_str(),
            &p.cycle_index.to_string(),
            &p.condition.tag(),
            &p.recorded_condition.tag(),
            &p.features.variance.to_string(),
            &p.features.skewness.to_string(),
            &p.features.max_voltage.to_string(),
            &p.capacity_ah.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads a dataset, preserving row order. Rows are reported 1-based
/// (excluding the header) in parse errors.
pub fn load_csv(path: &Path) -> Result<Vec<DataPoint>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.len() != HEADER.len() || headers.iter().zip(HEADER).any(|(got, want)| got != want) {
        let got: Vec<&str> = headers.iter().collect();
        return Err(Error::Parse {
            row: 0,
            message: format!(
                "unexpected columns {got:?}; expected exactly {HEADER:?}"
            ),
        });
    }

    let parse_f64 = |row: usize, name: &str, text: &str| -> Result<f64> {
        let value: f64 = text.parse().map_err(|_| Error::Parse {
            row,
            message: format!("column {name}: invalid number {text:?}"),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                row,
                message: format!("column {name}: non-finite value {text:?}"),
            });
        }
        Ok(value)
    };

    let mut points = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1;
        let record = record.map_err(|e| Error::Parse {
            row,
            message: e.to_string(),
        })?;
        let field = |i: usize| record.get(i).unwrap_or_default();
        let cycle_index: u32 = field(1).parse().map_err(|_| Error::Parse {
            row,
            message: format!("column cycle_index: invalid integer {:?}", field(1)),
        })?;
        let condition = Condition::parse(field(2)).map_err(|e| Error::Parse {
            row,
            message: format!("column condition: {e}"),
        })?;
        let recorded_condition = Condition::parse(field(3)).map_err(|e| Error::Parse {
            row,
            message: format!("column recorded_condition: {e}"),
        })?;
        let capacity_ah = parse_f64(row, "capacity_ah", field(7))?;
        if capacity_ah <= 0.0 {
            return Err(Error::Parse {
                row,
                message: format!("column capacity_ah: must be > 0, got {capacity_ah}"),
            });
        }
        points.push(DataPoint {
            cell_id: field(0).to_string(),
            cycle_index,
            condition,
            recorded_condition,
            features: FeatureVector::new(
                parse_f64(row, "feature_variance", field(4))?,
                parse_f64(row, "feature_skewness", field(5))?,
                parse_f64(row, "feature_max", field(6))?,
            ),
            capacity_ah,
            tampered: false,
        });
    }
    Ok(points)
}
