use super::{ensure_dir, write_text, CommandResult, Ctx};
use clap::Args;
use sangam_core::error::Error;
use sangam_core::evaluator::{accuracy_percentages, compare_runs, EvalRun};
use std::path::{Path, PathBuf};

#[derive(Args)]
pub struct CompareArgs {
    /// Baseline results.json.
    #[arg(long)]
    pub baseline: PathBuf,

    /// Candidate results.json.
    #[arg(long)]
    pub candidate: PathBuf,

    /// Output directory (delta.json/.csv/.md, run_manifest.json).
    #[arg(long)]
    pub out: PathBuf,
}

pub fn load_run(path: &Path) -> Result<EvalRun, Error> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

pub fn run(args: CompareArgs, ctx: &Ctx) -> CommandResult {
    let baseline = load_run(&args.baseline)?;
    let candidate = load_run(&args.candidate)?;
    let table = compare_runs(
        &accuracy_percentages(&baseline.results),
        &accuracy_percentages(&candidate.results),
    )?;

    ensure_dir(&args.out)?;
    let json_path = args.out.join("delta.json");
    write_text(&json_path, &serde_json::to_string_pretty(&table).map_err(Error::from)?)?;
    let csv_path = args.out.join("delta.csv");
    write_text(&csv_path, &sangam_core::report::delta_csv(&table))?;
    let md_path = args.out.join("delta.md");
    write_text(&md_path, &sangam_core::report::delta_markdown(&table))?;

    let mut manifest = ctx.manifest("compare");
    manifest.add_input(&args.baseline)?;
    manifest.add_input(&args.candidate)?;
    manifest.add_output(&json_path)?;
    manifest.add_output(&csv_path)?;
    manifest.add_output(&md_path)?;
    manifest.finish(args.out.join("run_manifest.json"))?;

    print!("{}", sangam_core::report::delta_markdown(&table));
    Ok(())
}
