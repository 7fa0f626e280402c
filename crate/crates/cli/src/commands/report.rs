use super::{ensure_dir, write_text, CommandResult, Ctx};
use clap::Args;
use sangam_core::corpus::PredictionRecord;
use sangam_core::error::Error;
use sangam_core::evaluator::{accuracy_percentages, compare_runs, domain_breakdown, Coverage};
use std::collections::BTreeMap;
use std::path::PathBuf;

/// Renders tables from existing result files. This command takes no backend
/// argument at all: it can only read.
#[derive(Args)]
pub struct ReportArgs {
    /// results.json from an eval run.
    #[arg(long)]
    pub results: PathBuf,

    /// Optional baseline results.json; adds a delta table.
    #[arg(long)]
    pub baseline: Option<PathBuf>,

    /// Candidate prediction log for a domain breakdown.
    #[arg(long = "domain-candidate")]
    pub domain_candidate: Option<PathBuf>,

    /// Baseline prediction log for the domain breakdown.
    #[arg(long = "domain-baseline")]
    pub domain_baseline: Option<PathBuf>,

    /// Coverage config (domain = Yes|No|N/A per line).
    #[arg(long)]
    pub coverage: Option<PathBuf>,

    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: ReportArgs, ctx: &Ctx) -> CommandResult {
    let run = super::compare::load_run(&args.results)?;
    ensure_dir(&args.out)?;
    let mut manifest = ctx.manifest("report");
    manifest.add_input(&args.results)?;

    let results_md = args.out.join("results.md");
    write_text(&results_md, &sangam_core::report::results_markdown(&run.results))?;
    let results_csv = args.out.join("results.csv");
    write_text(&results_csv, &sangam_core::report::results_csv(&run.results))?;
    manifest.add_output(&results_md)?;
    manifest.add_output(&results_csv)?;

    if let Some(baseline_path) = &args.baseline {
        let baseline = super::compare::load_run(baseline_path)?;
        let table = compare_runs(
            &accuracy_percentages(&baseline.results),
            &accuracy_percentages(&run.results),
        )?;
        let delta_md = args.out.join("delta.md");
        write_text(&delta_md, &sangam_core::report::delta_markdown(&table))?;
        let delta_csv = args.out.join("delta.csv");
        write_text(&delta_csv, &sangam_core::report::delta_csv(&table))?;
        manifest.add_input(baseline_path)?;
        manifest.add_output(&delta_md)?;
        manifest.add_output(&delta_csv)?;
    }

    match (&args.domain_candidate, &args.domain_baseline) {
        (Some(candidate_path), Some(baseline_path)) => {
            let candidate: Vec<PredictionRecord> = sangam_core::jsonl::read_file(candidate_path)?;
            let baseline: Vec<PredictionRecord> = sangam_core::jsonl::read_file(baseline_path)?;
            let coverage = match &args.coverage {
                Some(path) => parse_coverage(path)?,
                None => BTreeMap::new(),
            };
            let table = domain_breakdown(&candidate, &baseline, &coverage)?;
            let domain_md = args.out.join("domains.md");
            write_text(&domain_md, &sangam_core::report::domain_markdown(&table))?;
            let domain_csv = args.out.join("domains.csv");
            write_text(&domain_csv, &sangam_core::report::domain_csv(&table))?;
            manifest.add_input(candidate_path)?;
            manifest.add_input(baseline_path)?;
            manifest.add_output(&domain_md)?;
            manifest.add_output(&domain_csv)?;
        }
        (None, None) => {}
        _ => {
            return Err(Error::Config(
                "domain breakdown needs both --domain-candidate and --domain-baseline".into(),
            )
            .into())
        }
    }

    manifest.finish(args.out.join("run_manifest.json"))?;
    println!("report written to {}", args.out.display());
    Ok(())
}

fn parse_coverage(path: &PathBuf) -> Result<BTreeMap<String, Coverage>, Error> {
    let raw = sangam_core::manifest::load_config(path)?;
    let mut coverage = BTreeMap::new();
    for (domain, value) in raw {
        let parsed = Coverage::parse(&value)
            .ok_or_else(|| Error::Config(format!("coverage for {domain}: bad value {value:?}")))?;
        coverage.insert(domain, parsed);
    }
    Ok(coverage)
}
