//! Accuracy aggregation: five-benchmark averages, run-to-run deltas and
//! domain-wise breakdowns over ingested prediction logs.

use super::EvalResult;
use crate::corpus::{Language, PredictionRecord};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// The five benchmarks that enter per-language averages.
pub const CORE_BENCHMARKS: [&str; 5] = ["ARC-C", "ARC-E", "BoolQ", "CMCQ", "MMLU"];

/// Arithmetic mean over exactly the five core benchmarks. Extra keys are
/// ignored; a missing core key is an error naming it.
pub fn average_scores(by_benchmark: &BTreeMap<String, f64>) -> Result<f64> {
    let mut sum = 0.0;
    for benchmark in CORE_BENCHMARKS {
        match by_benchmark.get(benchmark) {
            Some(score) => sum += score,
            None => return Err(Error::MissingBenchmark(benchmark.to_string())),
        }
    }
    Ok(sum / CORE_BENCHMARKS.len() as f64)
}

/// Overall score: mean of the English and Hindi averages.
pub fn overall_average(en: f64, hi: f64) -> f64 {
    (en + hi) / 2.0
}

/// Re-derivation of a printed average from its cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AverageCheck {
    pub computed: f64,
    pub printed: f64,
    /// True when the printed value matches the computed one within half a
    /// display unit (tables print two decimals).
    pub consistent: bool,
}

/// Recompute an average and compare against the value a table printed.
/// Inconsistent tables happen; the computed value is authoritative and the
/// caller reports both.
pub fn check_printed_average(
    cells: &BTreeMap<String, f64>,
    printed: f64,
) -> Result<AverageCheck> {
    let computed = average_scores(cells)?;
    Ok(AverageCheck {
        computed,
        printed,
        consistent: (computed - printed).abs() <= 0.005 + 1e-9,
    })
}

/// Accuracy map `(benchmark, language) -> percentage` extracted from results.
pub fn accuracy_percentages(results: &[EvalResult]) -> BTreeMap<(String, Language), f64> {
    results
        .iter()
        .map(|r| ((r.benchmark.clone(), r.language), r.accuracy * 100.0))
        .collect()
}

/// One benchmark/language delta.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaCell {
    pub benchmark: String,
    pub language: Language,
    pub baseline: f64,
    pub candidate: f64,
    pub delta: f64,
}

/// Per-language average row of a delta table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanguageAverages {
    pub language: Language,
    pub baseline: f64,
    pub candidate: f64,
    pub delta: f64,
}

/// Candidate-minus-baseline comparison across runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaTable {
    pub cells: Vec<DeltaCell>,
    /// Present per language when its five core benchmarks are all there.
    pub averages: Vec<LanguageAverages>,
    /// Present when both languages have averages.
    pub overall: Option<LanguageAveragesOverall>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanguageAveragesOverall {
    pub baseline: f64,
    pub candidate: f64,
    pub delta: f64,
}

/// Compare two runs cell by cell. Both maps must cover the same keys.
pub fn compare_runs(
    baseline: &BTreeMap<(String, Language), f64>,
    candidate: &BTreeMap<(String, Language), f64>,
) -> Result<DeltaTable> {
    let missing: Vec<String> = baseline
        .keys()
        .filter(|key| !candidate.contains_key(*key))
        .chain(candidate.keys().filter(|key| !baseline.contains_key(*key)))
        .map(|(benchmark, language)| format!("{benchmark}/{language}"))
        .collect();
    if !missing.is_empty() {
        return Err(Error::KeyMismatch(missing.join(", ")));
    }

    let cells: Vec<DeltaCell> = baseline
        .iter()
        .map(|((benchmark, language), base)| {
            let cand = candidate[&(benchmark.clone(), *language)];
            DeltaCell {
                benchmark: benchmark.clone(),
                language: *language,
                baseline: *base,
                candidate: cand,
                delta: cand - base,
            }
        })
        .collect();

    let mut averages = Vec::new();
    for language in Language::ALL {
        let base_map: BTreeMap<String, f64> = baseline
            .iter()
            .filter(|((_, l), _)| *l == language)
            .map(|((b, _), v)| (b.clone(), *v))
            .collect();
        let cand_map: BTreeMap<String, f64> = candidate
            .iter()
            .filter(|((_, l), _)| *l == language)
            .map(|((b, _), v)| (b.clone(), *v))
            .collect();
        if let (Ok(base_avg), Ok(cand_avg)) =
            (average_scores(&base_map), average_scores(&cand_map))
        {
            averages.push(LanguageAverages {
                language,
                baseline: base_avg,
                candidate: cand_avg,
                delta: cand_avg - base_avg,
            });
        }
    }

    let overall = match averages.as_slice() {
        [en, hi] => {
            let baseline = overall_average(en.baseline, hi.baseline);
            let candidate = overall_average(en.candidate, hi.candidate);
            Some(LanguageAveragesOverall {
                baseline,
                candidate,
                delta: candidate - baseline,
            })
        }
        _ => None,
    };

    Ok(DeltaTable {
        cells,
        averages,
        overall,
    })
}

/// Whether a domain's material appeared in the training data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coverage {
    Yes,
    No,
    NotApplicable,
}

impl Coverage {
    pub fn label(self) -> &'static str {
        match self {
            Coverage::Yes => "Yes",
            Coverage::No => "No",
            Coverage::NotApplicable => "N/A",
        }
    }

    pub fn parse(text: &str) -> Option<Coverage> {
        match text.trim() {
            "Yes" | "yes" => Some(Coverage::Yes),
            "No" | "no" => Some(Coverage::No),
            "N/A" | "n/a" | "NA" => Some(Coverage::NotApplicable),
            _ => None,
        }
    }
}

/// Domain bucket of a [`DomainDeltaTable`]; accuracies are percentages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainRow {
    pub domain: String,
    pub n_baseline: usize,
    pub n_candidate: usize,
    pub baseline_accuracy: Option<f64>,
    pub candidate_accuracy: Option<f64>,
    pub delta: Option<f64>,
    pub coverage: Coverage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainDeltaTable {
    pub rows: Vec<DomainRow>,
}

fn domain_accuracies(records: &[PredictionRecord]) -> Result<BTreeMap<String, (usize, usize)>> {
    let mut buckets: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for record in records {
        record.validate()?;
        let gold = record.gold_index.ok_or_else(|| Error::MissingGoldIndex {
            id: record.id.clone(),
        })?;
        let bucket = buckets.entry(record.domain_label().to_string()).or_default();
        bucket.0 += 1;
        if record.predicted_index == gold {
            bucket.1 += 1;
        }
    }
    Ok(buckets)
}

/// Per-domain accuracy and delta between two prediction logs, annotated
/// with training-data coverage. Records without a domain land in "Other".
pub fn domain_breakdown(
    candidate: &[PredictionRecord],
    baseline: &[PredictionRecord],
    coverage: &BTreeMap<String, Coverage>,
) -> Result<DomainDeltaTable> {
    let candidate_buckets = domain_accuracies(candidate)?;
    let baseline_buckets = domain_accuracies(baseline)?;

    let mut domains: Vec<String> = candidate_buckets
        .keys()
        .chain(baseline_buckets.keys())
        .cloned()
        .collect();
    domains.sort();
    domains.dedup();

    let accuracy = |bucket: Option<&(usize, usize)>| {
        bucket.map(|(n, correct)| 100.0 * *correct as f64 / *n as f64)
    };

    let rows = domains
        .into_iter()
        .map(|domain| {
            let base = baseline_buckets.get(&domain);
            let cand = candidate_buckets.get(&domain);
            let baseline_accuracy = accuracy(base);
            let candidate_accuracy = accuracy(cand);
            let delta = match (baseline_accuracy, candidate_accuracy) {
                (Some(b), Some(c)) => Some(c - b),
                _ => None,
            };
            DomainRow {
                coverage: coverage
                    .get(&domain)
                    .copied()
                    .unwrap_or(Coverage::NotApplicable),
                n_baseline: base.map_or(0, |b| b.0),
                n_candidate: cand.map_or(0, |c| c.0),
                baseline_accuracy,
                candidate_accuracy,
                delta,
                domain,
            }
        })
        .collect();

    Ok(DomainDeltaTable { rows })
}
