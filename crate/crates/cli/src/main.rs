//! `sangam` — bilingual corpus curation and benchmark evaluation pipeline.
//!
//! Subcommands: curate, order, eval, compare, bias, sweep-plan, report.
//! Every run writes a manifest with content digests of its inputs and
//! outputs so byte-exact reproduction is checkable after the fact.
//!
//! Exit codes:
//!   0 success
//!   1 usage error
//!   2 configuration error
//!   3 I/O error
//!   4 data validation error
//!   5 backend error
//!   6 evaluation left items unscored (run without --allow-partial)

mod commands;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sangam", version, about = "Bilingual corpus curation and log-likelihood evaluation")]
struct Cli {
    /// Flat key=value configuration file; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Subsample datasets per a source manifest, deterministically.
    Curate(commands::curate::CurateArgs),
    /// Order a corpus by length with cultural interleaving.
    Order(commands::order::OrderArgs),
    /// Score benchmark items against a backend and aggregate accuracies.
    Eval(commands::eval::EvalArgs),
    /// Delta table between two result files.
    Compare(commands::compare::CompareArgs),
    /// Predicted-choice position distributions and bias index.
    Bias(commands::bias::BiasArgs),
    /// Emit the training-attempt grid as a plan file.
    SweepPlan(commands::sweep_plan::SweepPlanArgs),
    /// Render tables from existing result files; never contacts a backend.
    Report(commands::report::ReportArgs),
}

/// Errors carrying their process exit code.
pub enum AppError {
    Core(sangam_core::Error),
    /// Evaluation finished but left items unscored.
    Partial { unscored: usize },
}

impl From<sangam_core::Error> for AppError {
    fn from(error: sangam_core::Error) -> Self {
        AppError::Core(error)
    }
}

impl AppError {
    fn exit_code(&self) -> u8 {
        use sangam_core::Error as E;
        match self {
            AppError::Partial { .. } => 6,
            AppError::Core(error) => match error {
                E::Config(_) => 2,
                E::Io(_) => 3,
                E::Transport(_)
                | E::Protocol(_)
                | E::Fixture(_)
                | E::EmptyContinuations
                | E::TooManyContinuations(_)
                | E::BlankContinuation(_)
                | E::EmptyInput => 5,
                _ => 4,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            AppError::Core(error) => error.to_string(),
            AppError::Partial { unscored } => format!(
                "{unscored} items were not scored; pass --allow-partial to accept partial results"
            ),
        }
    }
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes instead of panicking on
    // EPIPE mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }

    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(error) => {
            let code = if error.use_stderr() { 1 } else { 0 };
            let _ = error.print();
            return ExitCode::from(code);
        }
    };

    let config = match &cli.config {
        Some(path) => match sangam_core::manifest::load_config(path) {
            Ok(config) => config,
            Err(error) => {
                eprintln!("error: {error}");
                return ExitCode::from(2);
            }
        },
        None => Default::default(),
    };
    let ctx = commands::Ctx {
        config,
        argv: std::env::args().skip(1).collect(),
    };

    let result = match cli.command {
        Command::Curate(args) => commands::curate::run(args, &ctx),
        Command::Order(args) => commands::order::run(args, &ctx),
        Command::Eval(args) => commands::eval::run(args, &ctx),
        Command::Compare(args) => commands::compare::run(args, &ctx),
        Command::Bias(args) => commands::bias::run(args, &ctx),
        Command::SweepPlan(args) => commands::sweep_plan::run(args, &ctx),
        Command::Report(args) => commands::report::run(args, &ctx),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {}", error.message());
            ExitCode::from(error.exit_code())
        }
    }
}
