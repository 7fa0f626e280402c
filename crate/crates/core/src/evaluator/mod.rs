//! Zero-shot benchmark evaluation through normalized log-likelihood.
//!
//! Each item is rendered with the MCQ or Boolean prompt template, every
//! choice is scored as a continuation, normalized per the configured mode,
//! and the argmax wins (ties go to the lowest index). Accuracies aggregate
//! per (benchmark, language) as a deterministic fold over items sorted by
//! id, so arrival order can never change a result.

mod aggregate;
mod sweep;

pub use aggregate::{
    accuracy_percentages, average_scores, check_printed_average, compare_runs, domain_breakdown,
    overall_average, AverageCheck, Coverage, DeltaCell, DeltaTable, DomainDeltaTable, DomainRow,
    LanguageAverages, LanguageAveragesOverall, CORE_BENCHMARKS,
};
pub use sweep::{default_ratios, sweep_grid, SweepConfig};

use crate::corpus::{BenchmarkItem, Language, Sample, TaskType, BOOLEAN_BENCHMARKS};
use crate::error::{Error, Result};
use crate::scoring::{score_continuations, Backend, ContinuationScore, ScoreRequest};
use crate::textprep::{format_input, preprocess, render_chat, ChatTemplate};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// How per-choice totals are turned into comparable scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationMode {
    /// Total log probability divided by token count.
    #[default]
    MeanPerToken,
    /// Raw total.
    Unnormalized,
    /// Total divided by the continuation's UTF-8 byte length.
    ByteLengthNormalized,
}

/// What is sent as the continuation for each choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TargetStyle {
    /// The full option text (preprocessed).
    #[default]
    ChoiceText,
    /// Just the option letter A..J.
    ChoiceLetter,
}

/// Continuation pair scored for Boolean benchmarks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BooleanStrings {
    pub positive: String,
    pub negative: String,
}

impl BooleanStrings {
    pub fn default_for(language: Language) -> BooleanStrings {
        match language {
            Language::En => BooleanStrings {
                positive: "Yes".into(),
                negative: "No".into(),
            },
            Language::Hi => BooleanStrings {
                positive: "\u{939}\u{93e}\u{901}".into(),     // हाँ
                negative: "\u{928}\u{939}\u{940}\u{902}".into(), // नहीं
            },
        }
    }
}

/// Evaluation knobs; everything lands in result metadata.
#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub model: String,
    pub norm: NormalizationMode,
    pub target_style: TargetStyle,
    pub chat_template: ChatTemplate,
    /// Overrides for Boolean continuations per (benchmark, language);
    /// [`BooleanStrings::default_for`] applies otherwise.
    pub boolean_strings: BTreeMap<(String, Language), BooleanStrings>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            model: "default".into(),
            norm: NormalizationMode::default(),
            target_style: TargetStyle::default(),
            chat_template: ChatTemplate::identity(),
            boolean_strings: BTreeMap::new(),
        }
    }
}

impl EvalOptions {
    fn boolean_strings_for(&self, benchmark: &str, language: Language) -> BooleanStrings {
        self.boolean_strings
            .get(&(benchmark.to_string(), language))
            .cloned()
            .unwrap_or_else(|| BooleanStrings::default_for(language))
    }
}

/// Outcome of scoring one item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemScore {
    pub id: String,
    pub predicted_index: usize,
    pub gold_index: usize,
    /// Normalized score per choice, in choice order.
    pub scores: Vec<f64>,
}

/// Render the scoring prompt for an item: Boolean benchmarks use the
/// BOOLEAN template, everything else the MCQ template. A context field is
/// prepended to the question with a single space.
pub fn render_item_prompt(item: &BenchmarkItem, template: &ChatTemplate) -> Result<String> {
    let question = match &item.context {
        Some(context) => format!("{context} {}", item.question),
        None => item.question.clone(),
    };
    let is_boolean = BOOLEAN_BENCHMARKS.contains(&item.benchmark.as_str());
    let sample = Sample {
        id: item.id.clone(),
        task: if is_boolean { TaskType::Boolean } else { TaskType::Mcq },
        input_fields: vec![question],
        options: if is_boolean { vec![] } else { item.choices.clone() },
        output: String::new(),
        language: item.language,
        domain: item.domain.clone().unwrap_or_default(),
        source: item.benchmark.clone(),
        is_cultural: false,
    };
    let formatted = format_input(&sample)?;
    Ok(render_chat(&formatted, template))
}

/// Continuations sent for an item under the given style.
pub fn item_continuations(item: &BenchmarkItem, options: &EvalOptions) -> Vec<String> {
    match options.target_style {
        TargetStyle::ChoiceLetter => (0..item.choices.len())
            .map(|index| ((b'A' + index as u8) as char).to_string())
            .collect(),
        TargetStyle::ChoiceText => {
            if BOOLEAN_BENCHMARKS.contains(&item.benchmark.as_str()) {
                let strings = options.boolean_strings_for(&item.benchmark, item.language);
                vec![strings.positive, strings.negative]
            } else {
                item.choices.iter().map(|choice| preprocess(choice)).collect()
            }
        }
    }
}

/// Normalize one raw score.
pub fn normalize(
    raw: &ContinuationScore,
    continuation: &str,
    mode: NormalizationMode,
) -> f64 {
    match mode {
        NormalizationMode::MeanPerToken => raw.total_logprob / raw.token_count as f64,
        NormalizationMode::Unnormalized => raw.total_logprob,
        NormalizationMode::ByteLengthNormalized => raw.total_logprob / continuation.len() as f64,
    }
}

/// Index of the maximum score; ties resolve to the lowest index.
pub fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (index, score) in scores.iter().enumerate().skip(1) {
        if *score > scores[best] {
            best = index;
        }
    }
    best
}

/// Score a single item against a backend.
pub fn score_item(
    item: &BenchmarkItem,
    backend: &dyn Backend,
    options: &EvalOptions,
) -> Result<ItemScore> {
    item.validate()?;
    let prompt = render_item_prompt(item, &options.chat_template)?;
    let continuations = item_continuations(item, options);
    let request = ScoreRequest {
        model: options.model.clone(),
        prompt,
        continuations: continuations.clone(),
    };
    let response = score_continuations(&request, backend)?;
    let scores: Vec<f64> = response
        .scores
        .iter()
        .zip(&continuations)
        .map(|(raw, continuation)| normalize(raw, continuation, options.norm))
        .collect();
    Ok(ItemScore {
        id: item.id.clone(),
        predicted_index: argmax(&scores),
        gold_index: item.gold_index,
        scores,
    })
}

/// An item the backend could not score.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnscoredItem {
    pub id: String,
    pub error: String,
}

/// Accuracy of one (benchmark, language) group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub benchmark: String,
    pub language: Language,
    pub n_items: usize,
    pub n_correct: usize,
    /// `n_correct / n_items`, in [0, 1].
    pub accuracy: f64,
    pub unscored: Vec<UnscoredItem>,
    pub per_item: Vec<ItemScore>,
}

/// Metadata + results of one evaluation run; the canonical result file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRun {
    pub model: String,
    pub norm: NormalizationMode,
    pub target_style: TargetStyle,
    pub backend_fingerprint: String,
    pub results: Vec<EvalResult>,
}

impl EvalRun {
    pub fn total_unscored(&self) -> usize {
        self.results.iter().map(|r| r.unscored.len()).sum()
    }
}

/// Evaluate a batch of items, one [`EvalResult`] per (benchmark, language).
///
/// Backend failures on individual items are recorded as unscored, never
/// silently dropped; callers decide whether partial results are acceptable.
pub fn evaluate(
    items: &[BenchmarkItem],
    backend: &dyn Backend,
    options: &EvalOptions,
) -> Result<Vec<EvalResult>> {
    if items.is_empty() {
        return Err(Error::NoItems);
    }

    let mut groups: BTreeMap<(String, Language), Vec<&BenchmarkItem>> = BTreeMap::new();
    for item in items {
        groups
            .entry((item.benchmark.clone(), item.language))
            .or_default()
            .push(item);
    }

    let mut results = Vec::with_capacity(groups.len());
    for ((benchmark, language), mut group) in groups {
        group.sort_by(|a, b| a.id.cmp(&b.id));
        let mut per_item = Vec::with_capacity(group.len());
        let mut unscored = Vec::new();
        for item in group {
            match score_item(item, backend, options) {
                Ok(score) => per_item.push(score),
                Err(error) => unscored.push(UnscoredItem {
                    id: item.id.clone(),
                    error: error.to_string(),
                }),
            }
        }
        results.push(aggregate_group(benchmark, language, per_item, unscored));
    }
    Ok(results)
}

/// Fold already-scored items into a result. Sorts by id first, so the
/// outcome is independent of completion order.
pub fn aggregate_group(
    benchmark: String,
    language: Language,
    mut per_item: Vec<ItemScore>,
    unscored: Vec<UnscoredItem>,
) -> EvalResult {
    per_item.sort_by(|a, b| a.id.cmp(&b.id));
    let n_items = per_item.len();
    let n_correct = per_item
        .iter()
        .filter(|score| score.predicted_index == score.gold_index)
        .count();
    let accuracy = if n_items == 0 {
        0.0
    } else {
        n_correct as f64 / n_items as f64
    };
    EvalResult {
        benchmark,
        language,
        n_items,
        n_correct,
        accuracy,
        unscored,
        per_item,
    }
}
