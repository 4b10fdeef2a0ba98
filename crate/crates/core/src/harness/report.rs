//! Report serialization: a flat CSV table, a JSON document, and a compact
//! plot table with one mean/std row per mode.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::scenario::ScenarioName;
use crate::error::{Error, Result};
use crate::harness::modes::Mode;
use crate::harness::study::{
    RawRecord, RunReport, SummaryRecord, WeightRecord, GLOBAL_LABEL, NODE_MEAN_LABEL,
};

/// Output format of an emitted report file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Csv,
    Json,
    Plotdata,
}

impl ReportFormat {
    pub fn all() -> [ReportFormat; 3] {
        [ReportFormat::Csv, ReportFormat::Json, ReportFormat::Plotdata]
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
            ReportFormat::Plotdata => "plotdata",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::all()
            .into_iter()
            .find(|f| f.as_str() == text)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown report format {text:?}; expected one of: csv, json, plotdata"
                ))
            })
    }

    /// Default file name this format is written to.
    pub fn file_name(&self) -> &'static str {
        match self {
            ReportFormat::Csv => "report.csv",
            ReportFormat::Json => "report.json",
            ReportFormat::Plotdata => "plotdata.csv",
        }
    }
}

impl std::fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const REPORT_CSV_HEADER: &str =
    "scenario,mode,kind,label,fold,seed,mape,rmse,std_mape,std_rmse,weight";
pub const PLOTDATA_HEADER: &str = "mode,label,mean_mape,std_mape,mean_rmse,std_rmse";

/// One row of the per-mode plot table.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotRow {
    pub mode: Mode,
    pub label: String,
    pub mean_mape: f64,
    pub std_mape: f64,
    pub mean_rmse: f64,
    pub std_rmse: f64,
}

/// The one summary row per mode that the plot table keeps: the node mean for
/// local learning and the global series otherwise.
pub fn plot_rows(report: &RunReport) -> Vec<PlotRow> {
    report
        .summaries
        .iter()
        .filter(|s| s.label == NODE_MEAN_LABEL || s.label == GLOBAL_LABEL)
        .map(|s| PlotRow {
            mode: s.mode,
            label: s.label.clone(),
            mean_mape: s.mean_mape,
            std_mape: s.std_mape,
            mean_rmse: s.mean_rmse,
            std_rmse: s.std_rmse,
        })
        .collect()
}

/// Renders plot rows whose labels may carry scenario qualifiers.
pub fn render_plot_rows(rows: &[PlotRow]) -> String {
    let mut out = String::from(PLOTDATA_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.mode, row.label, row.mean_mape, row.std_mape, row.mean_rmse, row.std_rmse
        ));
    }
    out
}

/// Renders the report in the requested format. The same report always
/// renders to the same bytes.
pub fn render_report(report: &RunReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Csv => Ok(render_csv(report)),
        ReportFormat::Json => {
            let mut text = serde_json::to_string_pretty(report)?;
            text.push('\n');
            Ok(text)
        }
        ReportFormat::Plotdata => Ok(render_plot_rows(&plot_rows(report))),
    }
}

/// Renders the report and writes it to `path`.
pub fn emit_report(report: &RunReport, format: ReportFormat, path: &Path) -> Result<()> {
    let text = render_report(report, format)?;
    std::fs::write(path, text)?;
    Ok(())
}

fn render_csv(report: &RunReport) -> String {
    let scenario = report.scenario.as_str();
    let mut out = String::from(REPORT_CSV_HEADER);
    out.push('\n');
    for r in &report.raw {
        out.push_str(&format!(
            "{scenario},{},raw,{},{},{},{},{},,,\n",
            r.mode, r.label, r.fold, r.seed, r.mape, r.rmse
        ));
    }
    for s in &report.summaries {
        out.push_str(&format!(
            "{scenario},{},summary,{},,,{},{},{},{},\n",
            s.mode, s.label, s.mean_mape, s.mean_rmse, s.std_mape, s.std_rmse
        ));
    }
    for w in &report.weights {
        out.push_str(&format!(
            "{scenario},{},weight,node{},{},{},,,,,{}\n",
            w.mode, w.node_id, w.fold, w.seed, w.w_norm
        ));
    }
    out
}

fn parse_field<T: std::str::FromStr>(row: usize, name: &str, text: &str) -> Result<T> {
    text.parse().map_err(|_| Error::Parse {
        row,
        message: format!("invalid {name} value {text:?}"),
    })
}

fn expect_empty(row: usize, name: &str, text: &str) -> Result<()> {
    if text.is_empty() {
        Ok(())
    } else {
        Err(Error::Parse {
            row,
            message: format!("unexpected {name} value {text:?} for this row kind"),
        })
    }
}

/// Parses a report CSV produced by `render_report`.
pub fn parse_report_csv(text: &str) -> Result<RunReport> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == REPORT_CSV_HEADER => {}
        _ => {
            return Err(Error::Parse {
                row: 0,
                message: format!("expected report header {REPORT_CSV_HEADER:?}"),
            })
        }
    }
    let mut scenario: Option<ScenarioName> = None;
    let mut raw = Vec::new();
    let mut summaries = Vec::new();
    let mut weights = Vec::new();
    for (idx, line) in lines.enumerate() {
        let row = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(Error::Parse {
                row,
                message: format!("expected 11 fields, found {}", fields.len()),
            });
        }
        let row_scenario = ScenarioName::parse(fields[0]).map_err(|_| Error::Parse {
            row,
            message: format!("unknown scenario {:?}", fields[0]),
        })?;
        match scenario {
            None => scenario = Some(row_scenario),
            Some(s) if s == row_scenario => {}
            Some(s) => {
                return Err(Error::Parse {
                    row,
                    message: format!(
                        "scenario changed mid-report: {} then {}",
                        s.as_str(),
                        row_scenario.as_str()
                    ),
                })
            }
        }
        let mode = Mode::parse(fields[1]).map_err(|_| Error::Parse {
            row,
            message: format!("unknown mode {:?}", fields[1]),
        })?;
        match fields[2] {
            "raw" => {
                expect_empty(row, "std_mape", fields[8])?;
                expect_empty(row, "std_rmse", fields[9])?;
                expect_empty(row, "weight", fields[10])?;
                raw.push(RawRecord {
                    mode,
                    label: fields[3].to_string(),
                    fold: parse_field(row, "fold", fields[4])?,
                    seed: parse_field(row, "seed", fields[5])?,
                    mape: parse_field(row, "mape", fields[6])?,
                    rmse: parse_field(row, "rmse", fields[7])?,
                });
            }
            "summary" => {
                expect_empty(row, "fold", fields[4])?;
                expect_empty(row, "seed", fields[5])?;
                expect_empty(row, "weight", fields[10])?;
                summaries.push(SummaryRecord {
                    mode,
                    label: fields[3].to_string(),
                    mean_mape: parse_field(row, "mape", fields[6])?,
                    mean_rmse: parse_field(row, "rmse", fields[7])?,
                    std_mape: parse_field(row, "std_mape", fields[8])?,
                    std_rmse: parse_field(row, "std_rmse", fields[9])?,
                });
            }
            "weight" => {
                expect_empty(row, "mape", fields[6])?;
                expect_empty(row, "rmse", fields[7])?;
                expect_empty(row, "std_mape", fields[8])?;
                expect_empty(row, "std_rmse", fields[9])?;
                let node_id = fields[3].strip_prefix("node").ok_or_else(|| Error::Parse {
                    row,
                    message: format!("weight label {:?} is not node<i>", fields[3]),
                })?;
                weights.push(WeightRecord {
                    mode,
                    fold: parse_field(row, "fold", fields[4])?,
                    seed: parse_field(row, "seed", fields[5])?,
                    node_id: parse_field(row, "node id", node_id)?,
                    w_norm: parse_field(row, "weight", fields[10])?,
                });
            }
            other => {
                return Err(Error::Parse {
                    row,
                    message: format!("unknown row kind {other:?}"),
                })
            }
        }
    }
    let scenario = scenario.ok_or(Error::Parse {
        row: 0,
        message: "report has no rows".into(),
    })?;
    Ok(RunReport {
        scenario,
        raw,
        summaries,
        weights,
        wall_time: std::time::Duration::ZERO,
    })
}

/// Parses a report JSON document produced by `render_report`.
pub fn parse_report_json(text: &str) -> Result<RunReport> {
    Ok(serde_json::from_str(text)?)
}

/// Loads a report file, dispatching on the `.csv` / `.json` extension.
pub fn load_report(path: &Path) -> Result<RunReport> {
    let text = std::fs::read_to_string(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => parse_report_csv(&text),
        Some("json") => parse_report_json(&text),
        _ => Err(Error::Config(format!(
            "report path {} must end in .csv or .json",
            path.display()
        ))),
    }
}
