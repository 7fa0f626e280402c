use super::{ensure_dir, parse_norm, parse_target_style, write_text, CommandResult, Ctx};
use crate::AppError;
use clap::Args;
use sangam_core::corpus::{BenchmarkItem, PredictionRecord};
use sangam_core::error::Error;
use sangam_core::evaluator::{evaluate, EvalOptions, EvalRun};
use sangam_core::manifest::fingerprint_url;
use sangam_core::scoring::{backend_from_url, Backend, RecordingBackend};
use sangam_core::textprep::ChatTemplate;
use std::path::PathBuf;

#[derive(Args)]
pub struct EvalArgs {
    /// Benchmark items JSONL.
    #[arg(long)]
    pub items: PathBuf,

    /// Backend URL: mock://SEED, fixture://PATH or http(s)://...
    #[arg(long)]
    pub backend: Option<String>,

    /// Model name sent with every request.
    #[arg(long)]
    pub model: Option<String>,

    /// Normalization: mean_per_token | unnormalized | byte_length_normalized.
    #[arg(long)]
    pub norm: Option<String>,

    /// Continuation style: choice_text | choice_letter.
    #[arg(long = "target-style")]
    pub target_style: Option<String>,

    /// Chat template file with a {user} placeholder.
    #[arg(long = "chat-template")]
    pub chat_template: Option<PathBuf>,

    /// Record every backend exchange to this JSONL file.
    #[arg(long)]
    pub record: Option<PathBuf>,

    /// Exit 0 even when some items could not be scored.
    #[arg(long = "allow-partial")]
    pub allow_partial: bool,

    /// Output directory (results.json/.csv/.md, run_manifest.json).
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: EvalArgs, ctx: &Ctx) -> CommandResult {
    let backend_url = ctx
        .resolve_opt(args.backend, "backend_url")
        .or_else(|| std::env::var(sangam_core::scoring::URL_ENV).ok())
        .ok_or_else(|| Error::Config("no backend: pass --backend or set SCORE_BACKEND_URL".into()))?;
    let model = ctx
        .resolve_opt(args.model, "model")
        .unwrap_or_else(|| "default".into());
    let norm = parse_norm(&ctx.resolve_opt(args.norm, "norm").unwrap_or_else(|| "mean_per_token".into()))?;
    let target_style = parse_target_style(
        &ctx.resolve_opt(args.target_style, "target_style")
            .unwrap_or_else(|| "choice_text".into()),
    )?;
    let chat_template = match &args.chat_template {
        Some(path) => ChatTemplate::new(std::fs::read_to_string(path).map_err(Error::from)?)?,
        None => ChatTemplate::identity(),
    };

    let items: Vec<BenchmarkItem> = sangam_core::jsonl::read_file(&args.items)?;

    let mut backend: Box<dyn Backend> = backend_from_url(&backend_url)?;
    if let Some(record_path) = &args.record {
        let sink = std::fs::File::create(record_path).map_err(Error::from)?;
        backend = Box::new(RecordingBackend::new(backend, Box::new(sink)));
    }

    let options = EvalOptions {
        model: model.clone(),
        norm,
        target_style,
        chat_template,
        boolean_strings: Default::default(),
    };
    let results = evaluate(&items, backend.as_ref(), &options)?;
    let run = EvalRun {
        model,
        norm,
        target_style,
        backend_fingerprint: fingerprint_url(&backend_url),
        results,
    };

    ensure_dir(&args.out)?;
    let json_path = args.out.join("results.json");
    write_text(&json_path, &serde_json::to_string_pretty(&run).map_err(Error::from)?)?;
    let csv_path = args.out.join("results.csv");
    write_text(&csv_path, &sangam_core::report::results_csv(&run.results))?;
    let md_path = args.out.join("results.md");
    write_text(&md_path, &sangam_core::report::results_markdown(&run.results))?;

    // Prediction log in the shared ingest schema, ready for bias analysis.
    let domains: std::collections::BTreeMap<&str, Option<&str>> = items
        .iter()
        .map(|item| (item.id.as_str(), item.domain.as_deref()))
        .collect();
    let predictions: Vec<PredictionRecord> = run
        .results
        .iter()
        .flat_map(|result| &result.per_item)
        .map(|score| PredictionRecord {
            id: score.id.clone(),
            predicted_index: score.predicted_index,
            n_options: score.scores.len(),
            gold_index: Some(score.gold_index),
            domain: domains.get(score.id.as_str()).and_then(|d| d.map(String::from)),
        })
        .collect();
    let pred_path = args.out.join("predictions.jsonl");
    sangam_core::jsonl::write_file(&pred_path, &predictions)?;

    let mut manifest = ctx.manifest("eval");
    manifest.set_config("backend", fingerprint_url(&backend_url));
    manifest.set_config("model", &run.model);
    manifest.set_config("norm", format!("{norm:?}"));
    manifest.set_config("target_style", format!("{target_style:?}"));
    manifest.add_input(&args.items)?;
    manifest.add_output(&json_path)?;
    manifest.add_output(&pred_path)?;
    manifest.add_output(&csv_path)?;
    manifest.add_output(&md_path)?;
    manifest.finish(args.out.join("run_manifest.json"))?;

    for result in &run.results {
        println!(
            "{} {}: {:.2} ({}/{} correct, {} unscored)",
            result.benchmark,
            result.language,
            result.accuracy * 100.0,
            result.n_correct,
            result.n_items,
            result.unscored.len()
        );
    }

    let unscored = run.total_unscored();
    if unscored > 0 && !args.allow_partial {
        return Err(AppError::Partial { unscored });
    }
    Ok(())
}
