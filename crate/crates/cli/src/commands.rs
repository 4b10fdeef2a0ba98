//! The three subcommands: dataset generation, case-study execution, and
//! cross-report comparison. Every command echoes its resolved config into
//! the output directory and writes byte-deterministic files.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::Serialize;
use swarmcap_core::{
    emit_report, generate_dataset, load_csv, load_report, plot_rows, render_plot_rows,
    run_case_study, save_csv, save_history_csv, Condition, DataPoint, Error, GeneratorConfig,
    PlotRow, Result, RunReport, StudyOutput,
};

use crate::config::CliConfig;

fn echo_config(config: &CliConfig, out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    std::fs::write(out_dir.join("config.json"), config.to_pretty_json()?)?;
    Ok(())
}

#[derive(Serialize)]
struct ConditionCount {
    condition: String,
    cells: usize,
    points: usize,
}

#[derive(Serialize)]
struct GenManifest<'a> {
    seed: u64,
    total_points: usize,
    total_cells: usize,
    conditions: Vec<ConditionCount>,
    generator: &'a GeneratorConfig,
}

fn manifest_for<'a>(
    pool: &[DataPoint],
    seed: u64,
    generator: &'a GeneratorConfig,
) -> GenManifest<'a> {
    let mut conditions = Vec::new();
    let mut all_cells = BTreeSet::new();
    for condition in Condition::table() {
        let mut cells = BTreeSet::new();
        let mut points = 0;
        for p in pool.iter().filter(|p| p.condition == condition) {
            cells.insert(p.cell_id.as_str());
            points += 1;
        }
        all_cells.extend(cells.iter().copied());
        conditions.push(ConditionCount {
            condition: condition.tag(),
            cells: cells.len(),
            points,
        });
    }
    GenManifest {
        seed,
        total_points: pool.len(),
        total_cells: all_cells.len(),
        conditions,
        generator,
    }
}

/// Generates the synthetic dataset and writes the CSV plus a manifest
/// recording the seed and the constants behind it.
pub fn cmd_gen(config: &CliConfig) -> Result<()> {
    config.validate()?;
    echo_config(config, &config.out_dir)?;
    let seed = config.seed();
    let pool = generate_dataset(&config.generator, seed)?;
    let data_path = config
        .data
        .clone()
        .unwrap_or_else(|| config.out_dir.join("dataset.csv"));
    if let Some(parent) = data_path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    save_csv(&pool, &data_path)?;
    let manifest = manifest_for(&pool, seed, &config.generator);
    let mut manifest_text = serde_json::to_string_pretty(&manifest)?;
    manifest_text.push('\n');
    std::fs::write(config.out_dir.join("manifest.json"), manifest_text)?;
    println!(
        "wrote {} rows to {} (seed {seed}); manifest at {}",
        pool.len(),
        data_path.display(),
        config.out_dir.join("manifest.json").display()
    );
    Ok(())
}

fn load_or_generate(config: &CliConfig) -> Result<Vec<DataPoint>> {
    match &config.data {
        Some(path) if path.exists() => load_csv(path),
        Some(path) => {
            let pool = generate_dataset(&config.generator, config.seed())?;
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            save_csv(&pool, path)?;
            Ok(pool)
        }
        None => generate_dataset(&config.generator, config.seed()),
    }
}

fn execute_study(config: &CliConfig, pool: &[DataPoint]) -> Result<StudyOutput> {
    let run = || {
        run_case_study(
            pool,
            config.case,
            &config.modes,
            config.folds,
            &config.seeds,
            &config.study,
        )
    };
    if config.jobs > 0 {
        let thread_pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| Error::Config(format!("cannot build a {}-thread pool: {e}", config.jobs)))?;
        thread_pool.install(run)
    } else {
        run()
    }
}

fn print_summary(report: &RunReport) {
    println!(
        "case {}: {} raw runs, wall time {:.1}s",
        report.scenario.as_str(),
        report.raw.len(),
        report.wall_time.as_secs_f64()
    );
    for row in plot_rows(report) {
        println!(
            "  {:<10} {:<9} MAPE {:.3}% ± {:.3}  RMSE {:.4} Ah ± {:.4}",
            row.mode.as_str(),
            row.label,
            row.mean_mape,
            row.std_mape,
            row.mean_rmse,
            row.std_rmse
        );
    }
}

/// Runs the configured case study and writes every requested report format,
/// plus one sync-history CSV per swarm run.
pub fn cmd_run(config: &CliConfig) -> Result<()> {
    config.validate()?;
    echo_config(config, &config.out_dir)?;
    let pool = load_or_generate(config)?;
    let output = execute_study(config, &pool)?;

    let mut written = Vec::new();
    for format in &config.formats {
        let path = config.out_dir.join(format.file_name());
        emit_report(&output.report, *format, &path)?;
        written.push(path);
    }
    if !output.histories.is_empty() {
        let history_dir = config.out_dir.join("history");
        std::fs::create_dir_all(&history_dir)?;
        for entry in &output.histories {
            let path = history_dir.join(format!(
                "{}_fold{}_seed{}.csv",
                entry.mode, entry.fold, entry.seed
            ));
            save_history_csv(&entry.records, &path)?;
            written.push(path);
        }
    }

    print_summary(&output.report);
    println!(
        "wrote {} files under {}",
        written.len() + 1,
        config.out_dir.display()
    );
    Ok(())
}

fn qualified_rows(reports: &[(String, RunReport)]) -> Vec<PlotRow> {
    if reports.len() == 1 {
        return plot_rows(&reports[0].1);
    }
    let mut rows = Vec::new();
    for (source, report) in reports {
        let scenario = report.scenario.as_str();
        let duplicated = reports
            .iter()
            .filter(|(_, r)| r.scenario == report.scenario)
            .count()
            > 1;
        for mut row in plot_rows(report) {
            row.label = if duplicated {
                format!("{scenario}({source})/{}", row.label)
            } else {
                format!("{scenario}/{}", row.label)
            };
            rows.push(row);
        }
    }
    rows
}

/// Merges the plot tables of one or more report files. Labels are qualified
/// by scenario, and by source file when two reports share a scenario.
pub fn cmd_compare(config: &CliConfig, report_paths: &[PathBuf]) -> Result<()> {
    if report_paths.is_empty() {
        return Err(Error::Config("compare needs at least one report".into()));
    }
    let mut reports = Vec::new();
    for path in report_paths {
        let source = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        reports.push((source, load_report(path)?));
    }
    let text = render_plot_rows(&qualified_rows(&reports));
    echo_config(config, &config.out_dir)?;
    let out_path = config.out_dir.join("compare.csv");
    std::fs::write(&out_path, &text)?;
    print!("{text}");
    println!("wrote {}", out_path.display());
    Ok(())
}
