use super::{ensure_dir, write_text, CommandResult, Ctx};
use clap::Args;
use sangam_core::bias::{bias_index, choice_distribution, per_domain, ChoiceDistribution};
use sangam_core::corpus::PredictionRecord;
use sangam_core::error::Error;
use serde_json::json;
use std::path::{Path, PathBuf};

#[derive(Args)]
pub struct BiasArgs {
    /// Prediction log, repeatable: LABEL=PATH or just PATH.
    #[arg(long = "pred", required = true)]
    pub predictions: Vec<String>,

    /// Also write one distribution CSV per domain for each input.
    #[arg(long = "per-domain")]
    pub per_domain: bool,

    /// Write a grouped bar chart of the global distributions.
    #[arg(long)]
    pub svg: bool,

    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

fn split_labelled(raw: &str) -> (String, PathBuf) {
    match raw.split_once('=') {
        Some((label, path)) => (label.to_string(), PathBuf::from(path)),
        None => {
            let path = PathBuf::from(raw);
            let label = path
                .file_stem()
                .map(|stem| stem.to_string_lossy().into_owned())
                .unwrap_or_else(|| raw.to_string());
            (label, path)
        }
    }
}

fn load_records(path: &Path) -> Result<Vec<PredictionRecord>, Error> {
    let records: Vec<PredictionRecord> = sangam_core::jsonl::read_file(path)?;
    for record in &records {
        record.validate()?;
    }
    Ok(records)
}

pub fn run(args: BiasArgs, ctx: &Ctx) -> CommandResult {
    ensure_dir(&args.out)?;
    let mut manifest = ctx.manifest("bias");

    let mut series: Vec<(String, ChoiceDistribution)> = Vec::new();
    let mut summary = Vec::new();

    for raw in &args.predictions {
        let (label, path) = split_labelled(raw);
        let records = load_records(&path)?;
        manifest.add_input(&path)?;

        let distribution =
            choice_distribution(records.iter().map(|r| (r.predicted_index, r.n_options)))?;
        let index = bias_index(&distribution)?;
        let mut entry = json!({
            "label": label,
            "n_predictions": distribution.total(),
            "bias_index": index,
        });

        if args.per_domain {
            let domains = per_domain(&records)?;
            let mut domain_indices = serde_json::Map::new();
            for (domain, domain_distribution) in &domains {
                domain_indices.insert(domain.clone(), json!(bias_index(domain_distribution)?));
            }
            entry["per_domain_bias_index"] = serde_json::Value::Object(domain_indices);

            let rows: Vec<(String, ChoiceDistribution)> = domains.into_iter().collect();
            let domain_csv_path = args.out.join(format!("{label}_domains.csv"));
            write_text(&domain_csv_path, &sangam_core::report::distributions_csv(&rows))?;
            manifest.add_output(&domain_csv_path)?;
        }

        summary.push(entry);
        series.push((label, distribution));
    }

    let csv_path = args.out.join("distributions.csv");
    write_text(&csv_path, &sangam_core::report::distributions_csv(&series))?;
    manifest.add_output(&csv_path)?;

    let json_path = args.out.join("bias.json");
    write_text(
        &json_path,
        &serde_json::to_string_pretty(&summary).map_err(Error::from)?,
    )?;
    manifest.add_output(&json_path)?;

    if args.svg {
        let svg_path = args.out.join("choices.svg");
        write_text(&svg_path, &sangam_core::report::distribution_svg(&series))?;
        manifest.add_output(&svg_path)?;
    }

    manifest.finish(args.out.join("run_manifest.json"))?;

    for entry in &summary {
        println!(
            "{}: bias index {:.4} over {} predictions",
            entry["label"].as_str().unwrap_or("?"),
            entry["bias_index"].as_f64().unwrap_or(f64::NAN),
            entry["n_predictions"]
        );
    }
    Ok(())
}
