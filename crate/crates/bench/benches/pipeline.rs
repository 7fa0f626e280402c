use criterion::{criterion_group, criterion_main, BatchSize, Criterion, Throughput};
use sangam_bench::{benchmark_items, corpus_rows, order_items};
use sangam_core::evaluator::{score_item, EvalOptions};
use sangam_core::orderer::{order, LengthMode, OrderingConfig};
use sangam_core::sampler::{draw, SamplingPlan};
use sangam_core::scoring::MockBackend;
use sangam_core::textprep::{format_input, preprocess};

fn bench_preprocess(c: &mut Criterion) {
    let text = "  some   \"quoted\"   text with   runs of spaces and \u{201C}curly quotes\u{201D}  ".repeat(16);
    let mut group = c.benchmark_group("textprep");
    group.throughput(Throughput::Bytes(text.len() as u64));
    group.bench_function("preprocess_1k", |b| b.iter(|| preprocess(&text)));
    group.finish();
}

fn bench_format(c: &mut Criterion) {
    let rows = corpus_rows(1_000, 11);
    c.bench_function("format_input_1k_rows", |b| {
        b.iter(|| {
            rows.iter()
                .map(|row| format_input(row).unwrap().prompt.len())
                .sum::<usize>()
        })
    });
}

fn bench_draw(c: &mut Criterion) {
    let rows = corpus_rows(50_000, 22);
    let plan = SamplingPlan {
        source: "Bench".into(),
        hindi_count: 10_000,
        english_count: 10_000,
        take_all: false,
    };
    c.bench_function("draw_20k_of_50k", |b| {
        b.iter(|| draw(&rows, &plan, 1024).unwrap().len())
    });
}

fn bench_order(c: &mut Criterion) {
    let items = order_items(10_000, 33);
    let config = OrderingConfig {
        effective_batch_size: 600,
        length_mode: LengthMode::WhitespaceTokens,
    };
    c.bench_function("order_10k_e600", |b| {
        b.iter_batched(
            || items.clone(),
            |items| order(items, &config).len(),
            BatchSize::SmallInput,
        )
    });
}

fn bench_scoring(c: &mut Criterion) {
    let backend = MockBackend::new(1024);
    let items = benchmark_items(200, 44);
    let options = EvalOptions::default();
    c.bench_function("score_200_items_mock", |b| {
        b.iter(|| {
            items
                .iter()
                .map(|item| score_item(item, &backend, &options).unwrap().predicted_index)
                .sum::<usize>()
        })
    });
}

criterion_group!(
    benches,
    bench_preprocess,
    bench_format,
    bench_draw,
    bench_order,
    bench_scoring
);
criterion_main!(benches);
