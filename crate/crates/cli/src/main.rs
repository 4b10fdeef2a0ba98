//! `swarmcap`: deterministic swarm-learning simulator for battery capacity
//! estimation. Generates synthetic relaxation-curve datasets, runs the
//! local/swarm/central case studies, and compares their reports.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use swarmcap_core::{Error, Result, ScenarioName};

use config::{parse_formats, parse_modes, parse_seeds, CliConfig};

#[derive(Parser)]
#[command(
    name = "swarmcap",
    version,
    about = "Swarm-learning battery capacity estimation simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the synthetic dataset CSV and its manifest
    Gen(GenArgs),
    /// Run a case study and emit reports
    Run(RunArgs),
    /// Merge the plot tables of one or more reports
    Compare(CompareArgs),
}

#[derive(Args)]
struct GenArgs {
    /// JSON config file; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for the manifest and config echo
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dataset CSV destination (defaults to <out>/dataset.csv)
    #[arg(long)]
    data: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scenario name: balanced, volume_biased, feature_biased_absolute,
    /// feature_biased_strong, feature_biased_light, quality_biased
    #[arg(long)]
    case: Option<String>,
    /// Comma-separated modes from ll, sl, sl_no_cwpa, cl
    #[arg(long)]
    modes: Option<String>,
    /// Cross-validation fold count; all folds are run
    #[arg(long)]
    folds: Option<usize>,
    /// Comma-separated run seeds
    #[arg(long)]
    seeds: Option<String>,
    /// Output directory for reports and histories
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated report formats from csv, json, plotdata
    #[arg(long)]
    format: Option<String>,
    /// Worker thread cap; 0 means one per core
    #[arg(long)]
    jobs: Option<usize>,
    /// Dataset CSV to reuse (generated there on demand when missing)
    #[arg(long)]
    data: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Report files (.csv or .json) to merge
    #[arg(required = true)]
    reports: Vec<PathBuf>,
    /// JSON config file; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for the combined table
    #[arg(long)]
    out: Option<PathBuf>,
}

fn resolve_gen(args: &GenArgs) -> Result<CliConfig> {
    let mut config = CliConfig::load(args.config.as_deref())?;
    if let Some(out) = &args.out {
        config.out_dir = out.clone();
    }
    if let Some(data) = &args.data {
        config.data = Some(data.clone());
    }
    config.resolve_seed()?;
    Ok(config)
}

fn resolve_run(args: &RunArgs) -> Result<CliConfig> {
    let mut config = CliConfig::load(args.config.as_deref())?;
    if let Some(case) = &args.case {
        config.case = ScenarioName::parse(case)?;
    }
    if let Some(modes) = &args.modes {
        config.modes = parse_modes(modes)?;
    }
    if let Some(folds) = args.folds {
        config.folds = folds;
    }
    if let Some(seeds) = &args.seeds {
        config.seeds = parse_seeds(seeds)?;
    }
    if let Some(out) = &args.out {
        config.out_dir = out.clone();
    }
    if let Some(format) = &args.format {
        config.formats = parse_formats(format)?;
    }
    if let Some(jobs) = args.jobs {
        config.jobs = jobs;
    }
    if let Some(data) = &args.data {
        config.data = Some(data.clone());
    }
    config.resolve_seed()?;
    Ok(config)
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen(args) => commands::cmd_gen(&resolve_gen(&args)?),
        Command::Run(args) => commands::cmd_run(&resolve_run(&args)?),
        Command::Compare(args) => {
            let mut config = CliConfig::load(args.config.as_deref())?;
            if let Some(out) = &args.out {
                config.out_dir = out.clone();
            }
            config.resolve_seed()?;
            commands::cmd_compare(&config, &args.reports)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Config(_) | Error::Parse { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
