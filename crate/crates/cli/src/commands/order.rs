use super::{parse_length_mode, sidecar_manifest_path, CommandResult, Ctx};
use clap::Args;
use sangam_core::corpus::Sample;
use sangam_core::orderer::{
    effective_batch_size, length_of, order, OrderItem, OrderedRecord, OrderingConfig,
};
use sangam_core::scoring::{backend_from_url, BackendTokenCounter, ScoringClient};
use sangam_core::textprep::format_input;
use std::path::PathBuf;

#[derive(Args)]
pub struct OrderArgs {
    /// Corpus JSONL to order.
    #[arg(long = "in")]
    pub input: PathBuf,

    /// Ordered output JSONL (adds position, block, length fields).
    #[arg(long)]
    pub out: PathBuf,

    /// Per-device batch size.
    #[arg(long)]
    pub batch: Option<usize>,

    /// Gradient accumulation steps.
    #[arg(long)]
    pub accum: Option<usize>,

    /// Length measure: ws | bytes | backend.
    #[arg(long = "length-mode")]
    pub length_mode: Option<String>,

    /// Backend URL, required for --length-mode backend.
    #[arg(long)]
    pub backend: Option<String>,

    /// Model name passed to the backend tokenizer.
    #[arg(long)]
    pub model: Option<String>,

    /// Also write the rendered prompts as FormattedSample JSONL
    /// (id, prompt, target, language), in the ordered sequence.
    #[arg(long = "formatted-out")]
    pub formatted_out: Option<PathBuf>,
}

pub fn run(args: OrderArgs, ctx: &Ctx) -> CommandResult {
    let batch = ctx.resolve(args.batch, "batch_size", 40usize)?;
    let accum = ctx.resolve(args.accum, "grad_accum", 15usize)?;
    let mode_name = ctx
        .resolve_opt(args.length_mode, "length_mode")
        .unwrap_or_else(|| "ws".into());
    let config = OrderingConfig {
        effective_batch_size: effective_batch_size(batch, accum),
        length_mode: parse_length_mode(&mode_name)?,
    };

    let backend_url = ctx.resolve_opt(args.backend, "backend_url");
    let client = backend_url
        .as_deref()
        .map(|url| backend_from_url(url).map(ScoringClient::new))
        .transpose()?;
    let model = ctx
        .resolve_opt(args.model, "model")
        .unwrap_or_else(|| "default".into());
    let counter = client.as_ref().map(|client| BackendTokenCounter {
        client,
        model: &model,
    });

    let rows: Vec<Sample> = sangam_core::jsonl::read_file(&args.input)?;
    let mut items = Vec::with_capacity(rows.len());
    for row in rows {
        let formatted = format_input(&row)?;
        let length = length_of(
            &formatted.prompt,
            &config,
            counter.as_ref().map(|c| c as &dyn sangam_core::orderer::TokenCounter),
        )?;
        items.push(OrderItem {
            id: row.id.clone(),
            length,
            is_cultural: row.is_cultural,
            payload: row,
        });
    }

    let records: Vec<OrderedRecord> = order(items, &config)
        .into_iter()
        .map(OrderedRecord::from)
        .collect();
    sangam_core::jsonl::write_file(&args.out, &records)?;

    if let Some(formatted_path) = &args.formatted_out {
        let formatted: Vec<_> = records
            .iter()
            .map(|record| format_input(&record.sample))
            .collect::<Result<_, _>>()?;
        sangam_core::jsonl::write_file(formatted_path, &formatted)?;
    }

    let mut manifest = ctx.manifest("order");
    manifest.set_config("batch_size", batch);
    manifest.set_config("grad_accum", accum);
    manifest.set_config("effective_batch_size", config.effective_batch_size);
    manifest.set_config("length_mode", &mode_name);
    if let Some(url) = &backend_url {
        manifest.set_config("backend", sangam_core::manifest::fingerprint_url(url));
    }
    manifest.add_input(&args.input)?;
    manifest.add_output(&args.out)?;
    if let Some(formatted_path) = &args.formatted_out {
        manifest.add_output(formatted_path)?;
    }
    manifest.finish(sidecar_manifest_path(&args.out))?;

    println!(
        "ordered {} rows (head {}) -> {}",
        records.len(),
        config.effective_batch_size.min(records.len()),
        args.out.display()
    );
    Ok(())
}
