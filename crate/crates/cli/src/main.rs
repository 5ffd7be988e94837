//! Scenario-driven command line front end.
//!
//! Exit codes: 0 when every analysis passes, 1 when some analysis fails,
//! 2 on input errors (parse, validation, unknown analysis or suite).

mod render;
mod runner;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use thiserror::Error;

use bures_core::suites::{run_suite, SuiteId};
use scenario::Scenario;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("unknown analysis `{0}`")]
    UnknownAnalysis(String),
    #[error("{0}")]
    Core(#[from] bures_core::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

/// Numerical laboratory for transition probability and Bures distance on
/// finite-dimensional *-algebras.
#[derive(Parser, Debug)]
#[command(name = "bures", version, about)]
struct Args {
    /// Scenario file to run
    #[arg(long, conflicts_with = "suite")]
    scenario: Option<PathBuf>,

    /// Registered verification suite to run (or `all`)
    #[arg(long)]
    suite: Option<String>,

    /// Seed for suite trials; overrides the scenario seed
    #[arg(long)]
    seed: Option<u64>,

    /// Number of trials per suite
    #[arg(long, default_value_t = 100)]
    trials: u64,

    /// Override the check tolerance of scenario analyses
    #[arg(long)]
    tol: Option<f64>,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(args: &Args) -> Result<bool, CliError> {
    match (&args.scenario, &args.suite) {
        (Some(path), None) => run_scenario_file(args, path),
        (None, Some(suite)) => run_suites(args, suite),
        _ => Err(CliError::Validation(
            "exactly one of --scenario and --suite is required".into(),
        )),
    }
}

fn run_scenario_file(args: &Args, path: &PathBuf) -> Result<bool, CliError> {
    let text = std::fs::read_to_string(path)?;
    let mut scenario = Scenario::parse(&text)?;
    if let Some(seed) = args.seed {
        scenario.seed = seed;
    }
    if let Some(tol) = args.tol {
        scenario.tolerances.check = tol;
    }
    let report = runner::run_scenario(&scenario)?;
    match args.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable report")
        ),
        Format::Table => print!("{}", render::scenario_table(&report)),
    }
    Ok(report.all_passed())
}

fn run_suites(args: &Args, suite: &str) -> Result<bool, CliError> {
    let seed = args.seed.unwrap_or(7);
    let ids: Vec<SuiteId> = if suite == "all" {
        SuiteId::all().to_vec()
    } else {
        vec![suite.parse::<SuiteId>()?]
    };
    let mut all_passed = true;
    let mut reports = Vec::new();
    for id in ids {
        let report = run_suite(id, args.trials, seed);
        all_passed &= report.passed;
        reports.push(report);
    }
    match args.format {
        Format::Json => {
            if reports.len() == 1 {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&reports[0]).expect("serializable report")
                );
            } else {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&reports).expect("serializable reports")
                );
            }
        }
        Format::Table => {
            for report in &reports {
                print!("{}", render::suite_table(report));
            }
        }
    }
    Ok(all_passed)
}
