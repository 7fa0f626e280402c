use super::{ensure_dir, write_text, CommandResult, Ctx};
use clap::Args;
use sangam_core::corpus::{validate_sample, Sample};
use sangam_core::error::Error;
use sangam_core::sampler::{draw, plan_from_spec, read_manifest, validate_corpus};
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Args)]
pub struct CurateArgs {
    /// Source manifest CSV (source,total,used,hindi_ratio).
    #[arg(long)]
    pub manifest: PathBuf,

    /// Corpus JSONL; rows are matched to manifest entries by their source
    /// field.
    #[arg(long)]
    pub corpus: PathBuf,

    /// Sampling seed.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Output directory (curated.jsonl, corpus_report.json, run_manifest.json).
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: CurateArgs, ctx: &Ctx) -> CommandResult {
    let seed = ctx.resolve(args.seed, "seed", 1024u64)?;
    let specs = read_manifest(&args.manifest)?;
    let rows: Vec<Sample> = sangam_core::jsonl::read_file(&args.corpus)?;

    // Reject structurally invalid rows up front; curation must not launder
    // bad records into training data.
    let mut violations = Vec::new();
    for row in &rows {
        let report = validate_sample(row);
        for violation in report.violations {
            violations.push(format!("{}: {violation}", row.id));
        }
    }
    if !violations.is_empty() {
        let shown = violations.iter().take(5).cloned().collect::<Vec<_>>().join("; ");
        return Err(Error::InvalidSample {
            id: format!("{} rows", violations.len()),
            reason: shown,
        }
        .into());
    }

    let report = validate_corpus(&specs);
    print!("{}", report.render_text());

    let mut by_source: BTreeMap<&str, Vec<Sample>> = BTreeMap::new();
    for row in &rows {
        by_source.entry(row.source.as_str()).or_default().push(row.clone());
    }

    let mut curated = Vec::new();
    for spec in &specs {
        let plan = plan_from_spec(spec);
        let source_rows = by_source.get(spec.source.as_str()).cloned().unwrap_or_default();
        if source_rows.is_empty() {
            log::warn!("source {} has no rows in {}", spec.source, args.corpus.display());
        }
        curated.extend(draw(&source_rows, &plan, seed)?);
    }

    ensure_dir(&args.out)?;
    let curated_path = args.out.join("curated.jsonl");
    sangam_core::jsonl::write_file(&curated_path, &curated)?;
    let report_path = args.out.join("corpus_report.json");
    write_text(&report_path, &serde_json::to_string_pretty(&report).map_err(Error::from)?)?;

    // Training hyperparameters travel with the curated data as metadata.
    let training_config = sangam_core::PipelineConfig {
        seed,
        ..sangam_core::PipelineConfig::default()
    };
    let training_path = args.out.join("training_config.json");
    write_text(
        &training_path,
        &serde_json::to_string_pretty(&training_config).map_err(Error::from)?,
    )?;

    let mut manifest = ctx.manifest("curate");
    manifest.set_config("seed", seed);
    manifest.set_config("effective_batch_size", training_config.effective_batch_size());
    manifest.add_input(&args.manifest)?;
    manifest.add_input(&args.corpus)?;
    manifest.add_output(&curated_path)?;
    manifest.add_output(&report_path)?;
    manifest.add_output(&training_path)?;
    manifest.finish(args.out.join("run_manifest.json"))?;

    println!("curated {} rows -> {}", curated.len(), curated_path.display());
    Ok(())
}
