//! Exploration runner: loads a scenario, explores it under one or more
//! regimes and prints a comparison report.
//!
//! Exit codes: 0 on success (including projected-only brute-force rows),
//! 1 when the solution space is empty or no feasible configuration exists,
//! 2 on input errors (bad flags, unreadable or invalid scenarios).

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::Parser;
use solex_core::cpps::DomainError;
use solex_core::explore::ExploreError;
use solex_core::scenario::report::{write_report, ReportFormat, ReportRow};
use solex_core::{load_scenario, run, Mode, RunOptions};

/// Explores a scenario's solution space and reports per-regime statistics.
#[derive(Debug, Parser)]
#[command(name = "solex", version, about)]
struct Args {
    /// Scenario file (JSON).
    #[arg(long)]
    scenario: PathBuf,

    /// Exploration regime: brute, issev1 or issev2. Repeat or
    /// comma-separate to compare several in one report.
    #[arg(long, required = true, value_delimiter = ',', value_parser = Mode::from_str)]
    mode: Vec<Mode>,

    /// Seed of all random streams.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Worker count; results are identical for any value.
    #[arg(long, default_value_t = 1)]
    parallel: usize,

    /// Layouts kept per configuration; overrides the scenario's setting.
    #[arg(long = "top-k")]
    top_k: Option<usize>,

    /// Accounted synthetic cost per simulator evaluation, in seconds;
    /// overrides the scenario's setting.
    #[arg(long = "per-eval-cost")]
    per_eval_cost: Option<f64>,

    /// Report format.
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    report: FormatArg,

    /// Write the report to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum FormatArg {
    Table,
    Csv,
}

impl From<FormatArg> for ReportFormat {
    fn from(arg: FormatArg) -> Self {
        match arg {
            FormatArg::Table => ReportFormat::Table,
            FormatArg::Csv => ReportFormat::Csv,
        }
    }
}

/// A failure with the process exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl std::fmt::Display) -> Self {
        Self { code: 2, message: message.to_string() }
    }
}

impl From<ExploreError> for Failure {
    fn from(error: ExploreError) -> Self {
        let no_solution = match &error {
            ExploreError::EmptySolutionSpace { .. } => true,
            ExploreError::Generator { source, .. } => matches!(
                source.downcast_ref::<DomainError>(),
                Some(DomainError::NoFeasibleConfiguration { .. })
            ),
            _ => false,
        };
        Self { code: if no_solution { 1 } else { 2 }, message: error.to_string() }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn execute(args: &Args) -> Result<(), Failure> {
    let scenario = load_scenario(&args.scenario).map_err(Failure::input)?;

    let mut rows: Vec<ReportRow> = Vec::with_capacity(args.mode.len());
    for &mode in &args.mode {
        let mut options = RunOptions::new(mode);
        options.seed = args.seed;
        options.parallelism = args.parallel;
        options.top_k = args.top_k;
        options.per_eval_cost_s = args.per_eval_cost;
        rows.push(run(&scenario, &options)?.row);
    }

    match &args.out {
        Some(path) => {
            let mut file = File::create(path).map_err(Failure::input)?;
            write_report(&rows, args.report.into(), &mut file).map_err(Failure::input)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_report(&rows, args.report.into(), &mut lock).map_err(Failure::input)?;
            lock.flush().map_err(Failure::input)
        }
    }
}
