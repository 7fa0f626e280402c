use super::{sidecar_manifest_path, CommandResult, Ctx};
use clap::Args;
use sangam_core::error::Error;
use sangam_core::evaluator::{default_ratios, sweep_grid};
use std::path::PathBuf;

#[derive(Args)]
pub struct SweepPlanArgs {
    /// Comma-separated model names.
    #[arg(long)]
    pub models: String,

    /// Hindi ratios: "10..100" (step 10) or a comma list like "10,50,90".
    #[arg(long)]
    pub ratios: Option<String>,

    /// Domain-data axis: both | yes | no.
    #[arg(long = "domain-flags")]
    pub domain_flags: Option<String>,

    /// Corpus fraction per attempt.
    #[arg(long = "data-fraction")]
    pub data_fraction: Option<f64>,

    /// Plan file (JSONL, one config per line).
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_ratios(text: &str) -> Result<Vec<u8>, Error> {
    let ratios: Vec<u8> = if let Some((start, end)) = text.split_once("..") {
        let start: u8 = start
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad ratio range start {start:?}")))?;
        let end: u8 = end
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad ratio range end {end:?}")))?;
        (start..=end).step_by(10).collect()
    } else {
        text.split(',')
            .map(|part| {
                part.trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("bad ratio {part:?}")))
            })
            .collect::<Result<_, _>>()?
    };
    if ratios.is_empty() {
        return Err(Error::Config(format!("no ratios in {text:?}")));
    }
    for &ratio in &ratios {
        if ratio == 0 || ratio > 100 {
            return Err(Error::Config(format!("ratio {ratio} outside 1..=100")));
        }
    }
    Ok(ratios)
}

fn parse_flags(text: &str) -> Result<Vec<bool>, Error> {
    match text {
        "both" => Ok(vec![false, true]),
        "yes" => Ok(vec![true]),
        "no" => Ok(vec![false]),
        other => Err(Error::Config(format!("domain-flags must be both|yes|no, got {other:?}"))),
    }
}

pub fn run(args: SweepPlanArgs, ctx: &Ctx) -> CommandResult {
    let models: Vec<String> = args
        .models
        .split(',')
        .map(|m| m.trim().to_string())
        .filter(|m| !m.is_empty())
        .collect();
    if models.is_empty() {
        return Err(Error::Config("no models given".into()).into());
    }
    let ratios = match ctx.resolve_opt(args.ratios, "ratios") {
        Some(text) => parse_ratios(&text)?,
        None => default_ratios(),
    };
    let flags = parse_flags(
        &ctx.resolve_opt(args.domain_flags, "domain_flags")
            .unwrap_or_else(|| "both".into()),
    )?;
    let data_fraction = ctx.resolve(args.data_fraction, "data_fraction", 0.08f64)?;

    let grid = sweep_grid(&models, &ratios, &flags, data_fraction);
    sangam_core::jsonl::write_file(&args.out, &grid)?;

    let mut manifest = ctx.manifest("sweep-plan");
    manifest.set_config("models", models.join(","));
    manifest.set_config("n_configs", grid.len());
    manifest.set_config("data_fraction", data_fraction);
    manifest.add_output(&args.out)?;
    manifest.finish(sidecar_manifest_path(&args.out))?;

    println!("{} configs -> {}", grid.len(), args.out.display());
    Ok(())
}
