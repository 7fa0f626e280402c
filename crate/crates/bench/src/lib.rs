//! Synthetic data generators shared by the benchmarks.

use sangam_core::corpus::{BenchmarkItem, Language, Sample, TaskType};
use sangam_core::orderer::OrderItem;
use sangam_core::rng::SplitMix64;

/// Mixed-language corpus rows with noisy spacing and quotes.
pub fn corpus_rows(count: usize, seed: u64) -> Vec<Sample> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|index| {
            let language = if rng.next_u64().is_multiple_of(2) { Language::Hi } else { Language::En };
            Sample {
                id: format!("row-{index:06}"),
                task: TaskType::DirectResponse,
                input_fields: vec![format!(
                    "question  {index} with \"quotes\" and {} padding words",
                    rng.next_u64() % 100
                )],
                options: vec![],
                output: format!("answer {index}"),
                language,
                domain: "General".into(),
                source: "Bench".into(),
                is_cultural: rng.next_u64().is_multiple_of(5),
            }
        })
        .collect()
}

/// Items spanning 2 to 10 choices.
pub fn benchmark_items(count: usize, seed: u64) -> Vec<BenchmarkItem> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|index| {
            let n = 2 + (rng.next_u64() % 9) as usize;
            BenchmarkItem {
                id: format!("item-{index:06}"),
                benchmark: "MMLU".into(),
                question: format!("benchmark question {index}?"),
                context: None,
                choices: (0..n).map(|c| format!("choice {c} of {index}")).collect(),
                gold_index: (rng.next_u64() % n as u64) as usize,
                language: Language::En,
                domain: None,
            }
        })
        .collect()
}

/// Length-annotated ordering inputs.
pub fn order_items(count: usize, seed: u64) -> Vec<OrderItem<()>> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|index| OrderItem {
            id: format!("o{index:06}"),
            length: rng.next_u64() % 4096,
            is_cultural: rng.next_u64().is_multiple_of(5),
            payload: (),
        })
        .collect()
}
