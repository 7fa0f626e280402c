//! Seed-driven per-dataset subsampling.
//!
//! Each manifest row turns into a [`SamplingPlan`]: either take every row
//! as-is, or draw exact per-language counts derived from the row's Hindi
//! ratio. Selection is reproducible from `(input order, plan, seed)` alone;
//! the generator and its seeding are spelled out in [`crate::rng`] so other
//! implementations can match the recorded fixtures.

use crate::corpus::{DatasetSpec, Language, Sample};
use crate::error::{Error, Result};
use crate::rng::{fnv1a64, SplitMix64};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

/// Used-samples total printed on the source data sheet bundled with this
/// repository. The sheet's own column does not add up to it; reports show
/// both numbers without forcing agreement.
pub const STATED_USED_TOTAL: u64 = 485_469;

/// Total-samples figure printed on the same sheet.
pub const STATED_TOTAL_SAMPLES: u64 = 3_117_450;

/// Bundled manifest covering all thirty source datasets.
pub const BUILTIN_MANIFEST_CSV: &str = include_str!("../data/training_sources.csv");

/// Exact per-language draw counts for one dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub source: String,
    pub hindi_count: u64,
    pub english_count: u64,
    pub take_all: bool,
}

/// Derive the plan for a manifest row. A missing ratio means take-all;
/// otherwise the Hindi count is floored and English receives the remainder,
/// so Hindi never exceeds its nominal share.
pub fn plan_from_spec(spec: &DatasetSpec) -> SamplingPlan {
    match spec.hindi_ratio {
        None => SamplingPlan {
            source: spec.source.clone(),
            hindi_count: 0,
            english_count: 0,
            take_all: true,
        },
        Some(ratio) => {
            let hindi = spec.used_samples * u64::from(ratio) / 100;
            SamplingPlan {
                source: spec.source.clone(),
                hindi_count: hindi,
                english_count: spec.used_samples - hindi,
                take_all: false,
            }
        }
    }
}

/// Stream seed for one (dataset, language) draw: FNV-1a over the
/// little-endian seed bytes, the source name, a 0x1F separator and the
/// language code.
fn stream_seed(seed: u64, source: &str, language: Language) -> u64 {
    fnv1a64([
        seed.to_le_bytes().as_slice(),
        source.as_bytes(),
        &[0x1F],
        language.code().as_bytes(),
    ])
}

/// Select `count` positions from `candidates` without replacement via a
/// partial Fisher-Yates shuffle driven by SplitMix64.
fn select_positions(candidates: &mut [usize], count: u64, rng: &mut SplitMix64) -> Vec<usize> {
    let count = count as usize;
    for slot in 0..count {
        let remaining = (candidates.len() - slot) as u64;
        let offset = rng.below(remaining) as usize;
        candidates.swap(slot, slot + offset);
    }
    candidates[..count].to_vec()
}

/// Draw one dataset's rows according to its plan.
///
/// Take-all plans return the input unchanged. Otherwise exactly the planned
/// count per language is selected uniformly without replacement and the
/// chosen rows are returned in input order. Too few rows of either language
/// is an error, never a silent truncation.
pub fn draw(rows: &[Sample], plan: &SamplingPlan, seed: u64) -> Result<Vec<Sample>> {
    if plan.take_all {
        return Ok(rows.to_vec());
    }

    let mut selected = Vec::with_capacity((plan.hindi_count + plan.english_count) as usize);
    for (language, count) in [
        (Language::Hi, plan.hindi_count),
        (Language::En, plan.english_count),
    ] {
        let mut candidates: Vec<usize> = rows
            .iter()
            .enumerate()
            .filter(|(_, row)| row.language == language)
            .map(|(index, _)| index)
            .collect();
        if (candidates.len() as u64) < count {
            return Err(Error::Shortage {
                dataset: plan.source.clone(),
                language,
                deficit: count - candidates.len() as u64,
            });
        }
        let mut rng = SplitMix64::new(stream_seed(seed, &plan.source, language));
        selected.extend(select_positions(&mut candidates, count, &mut rng));
    }

    selected.sort_unstable();
    Ok(selected.into_iter().map(|index| rows[index].clone()).collect())
}

/// Per-row slice of a [`CorpusReport`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusRowReport {
    pub source: String,
    pub total_samples: u64,
    pub used_samples: u64,
    pub hindi_ratio: Option<u8>,
    pub plan: SamplingPlan,
    pub warnings: Vec<String>,
}

/// Manifest-level accounting: per-row plans plus computed column sums next
/// to the published totals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusReport {
    pub rows: Vec<CorpusRowReport>,
    pub computed_used_total: u64,
    pub stated_used_total: u64,
    pub computed_total_samples: u64,
    pub stated_total_samples: u64,
    pub warnings: Vec<String>,
}

impl CorpusReport {
    pub fn used_totals_match(&self) -> bool {
        self.computed_used_total == self.stated_used_total
    }

    /// Plain-text rendering with the computed and stated sums side by side.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let ratio = row
                .hindi_ratio
                .map(|r| r.to_string())
                .unwrap_or_else(|| "N/A".into());
            let split = if row.plan.take_all {
                "take all".to_string()
            } else {
                format!("hi {} / en {}", row.plan.hindi_count, row.plan.english_count)
            };
            out.push_str(&format!(
                "{:<18} total {:>9}  used {:>9}  ratio {:>4}  {}\n",
                row.source, row.total_samples, row.used_samples, ratio, split
            ));
        }
        out.push_str(&format!(
            "used samples: computed {} / stated {}{}\n",
            self.computed_used_total,
            self.stated_used_total,
            if self.used_totals_match() { "" } else { "  (mismatch)" }
        ));
        out.push_str(&format!(
            "total samples: computed {} / stated {}\n",
            self.computed_total_samples, self.stated_total_samples
        ));
        for warning in &self.warnings {
            out.push_str(&format!("warning: {warning}\n"));
        }
        out
    }
}

/// Validate a manifest and compute its column sums. Mismatched totals and
/// odd rows produce warnings, never failures.
pub fn validate_corpus(specs: &[DatasetSpec]) -> CorpusReport {
    let mut rows = Vec::with_capacity(specs.len());
    let mut warnings = Vec::new();
    let mut used_total = 0u64;
    let mut samples_total = 0u64;

    for spec in specs {
        let row_warnings = spec.warnings();
        warnings.extend(row_warnings.iter().cloned());
        used_total += spec.used_samples;
        samples_total += spec.total_samples;
        rows.push(CorpusRowReport {
            source: spec.source.clone(),
            total_samples: spec.total_samples,
            used_samples: spec.used_samples,
            hindi_ratio: spec.hindi_ratio,
            plan: plan_from_spec(spec),
            warnings: row_warnings,
        });
    }

    if !specs.is_empty() && used_total != STATED_USED_TOTAL {
        warnings.push(format!(
            "used-samples column sums to {used_total}, data sheet states {STATED_USED_TOTAL}"
        ));
    }

    CorpusReport {
        rows,
        computed_used_total: used_total,
        stated_used_total: STATED_USED_TOTAL,
        computed_total_samples: samples_total,
        stated_total_samples: STATED_TOTAL_SAMPLES,
        warnings,
    }
}

/// Parse a manifest CSV with columns `source,total,used,hindi_ratio`
/// (hindi_ratio is a percentage or the literal `N/A`).
pub fn parse_manifest(text: &str) -> Result<Vec<DatasetSpec>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut specs = Vec::new();
    for record in reader.records() {
        let record = record?;
        if record.len() != 4 {
            return Err(Error::Manifest(format!(
                "expected 4 columns, got {} in {:?}",
                record.len(),
                record
            )));
        }
        let source = record[0].to_string();
        let parse_count = |field: &str, name: &str| -> Result<u64> {
            field.replace(',', "").parse().map_err(|_| {
                Error::Manifest(format!("{source}: bad {name} value {field:?}"))
            })
        };
        let total = parse_count(&record[1], "total")?;
        let used = parse_count(&record[2], "used")?;
        let ratio = match &record[3] {
            "N/A" | "n/a" | "NA" | "" => None,
            raw => {
                let value: u8 = raw.parse().map_err(|_| {
                    Error::Manifest(format!("{source}: bad hindi_ratio value {raw:?}"))
                })?;
                if value > 100 {
                    return Err(Error::Manifest(format!(
                        "{source}: hindi_ratio {value} exceeds 100"
                    )));
                }
                Some(value)
            }
        };
        specs.push(DatasetSpec {
            source,
            total_samples: total,
            used_samples: used,
            hindi_ratio: ratio,
        });
    }
    Ok(specs)
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<Vec<DatasetSpec>> {
    parse_manifest(&std::fs::read_to_string(path)?)
}

pub fn write_manifest(mut writer: impl Write, specs: &[DatasetSpec]) -> Result<()> {
    writeln!(writer, "source,total,used,hindi_ratio")?;
    for spec in specs {
        let ratio = spec
            .hindi_ratio
            .map(|r| r.to_string())
            .unwrap_or_else(|| "N/A".into());
        writeln!(
            writer,
            "{},{},{},{}",
            spec.source, spec.total_samples, spec.used_samples, ratio
        )?;
    }
    Ok(())
}

/// The bundled thirty-row source manifest.
pub fn builtin_manifest() -> Vec<DatasetSpec> {
    parse_manifest(BUILTIN_MANIFEST_CSV).expect("bundled manifest parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::TaskType;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn spec(source: &str, total: u64, used: u64, ratio: Option<u8>) -> DatasetSpec {
        DatasetSpec {
            source: source.into(),
            total_samples: total,
            used_samples: used,
            hindi_ratio: ratio,
        }
    }

    fn synthetic_rows(source: &str, hindi: usize, english: usize) -> Vec<Sample> {
        let mut rows = Vec::new();
        for index in 0..hindi + english {
            let language = if index < hindi { Language::Hi } else { Language::En };
            rows.push(Sample {
                id: format!("{source}-{index:05}"),
                task: TaskType::DirectResponse,
                input_fields: vec![format!("input {index}")],
                options: vec![],
                output: format!("output {index}"),
                language,
                domain: "General".into(),
                source: source.into(),
                is_cultural: false,
            });
        }
        rows
    }

    #[test]
    fn plan_floors_hindi_count() {
        let plan = plan_from_spec(&spec("Winogrande XL", 82_973, 10_000, Some(85)));
        assert_eq!(plan.hindi_count, 8_500);
        assert_eq!(plan.english_count, 1_500);
        assert!(!plan.take_all);

        let plan = plan_from_spec(&spec("XNLI/IndicXNLI", 395_192, 20_000, Some(80)));
        assert_eq!((plan.hindi_count, plan.english_count), (16_000, 4_000));
    }

    #[test]
    fn absent_ratio_takes_all() {
        let plan = plan_from_spec(&spec("India Law", 51_210, 51_210, None));
        assert!(plan.take_all);
        assert_eq!(plan.hindi_count + plan.english_count, 0);
    }

    #[test]
    fn take_all_preserves_input_order() {
        let rows = synthetic_rows("India Law", 3, 3);
        let plan = plan_from_spec(&spec("India Law", 6, 6, None));
        let drawn = draw(&rows, &plan, 1024).unwrap();
        assert_eq!(drawn, rows);
    }

    #[test]
    fn draw_selects_exact_counts_from_input() {
        let rows = synthetic_rows("Toy", 50, 50);
        let plan = plan_from_spec(&spec("Toy", 100, 40, Some(75)));
        let drawn = draw(&rows, &plan, 1024).unwrap();

        let hindi = drawn.iter().filter(|r| r.language == Language::Hi).count();
        let english = drawn.iter().filter(|r| r.language == Language::En).count();
        assert_eq!((hindi, english), (30, 10));

        let input_ids: BTreeSet<&str> = rows.iter().map(|r| r.id.as_str()).collect();
        let drawn_ids: BTreeSet<&str> = drawn.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(drawn_ids.len(), drawn.len(), "all ids distinct");
        assert!(drawn_ids.is_subset(&input_ids));
    }

    #[test]
    fn same_seed_is_byte_identical() {
        let rows = synthetic_rows("Toy", 40, 40);
        let plan = plan_from_spec(&spec("Toy", 80, 30, Some(50)));
        let first = draw(&rows, &plan, 1024).unwrap();
        let second = draw(&rows, &plan, 1024).unwrap();
        assert_eq!(
            crate::jsonl::to_string(&first).unwrap(),
            crate::jsonl::to_string(&second).unwrap()
        );
        let other = draw(&rows, &plan, 1025).unwrap();
        assert_ne!(first, other, "different seed changes the selection");
    }

    #[test]
    fn shortage_reports_language_and_deficit() {
        let rows = synthetic_rows("Toy", 5, 50);
        let plan = plan_from_spec(&spec("Toy", 80, 20, Some(50)));
        match draw(&rows, &plan, 1024) {
            Err(Error::Shortage { dataset, language, deficit }) => {
                assert_eq!(dataset, "Toy");
                assert_eq!(language, Language::Hi);
                assert_eq!(deficit, 5);
            }
            other => panic!("expected shortage, got {other:?}"),
        }
    }

    #[test]
    fn corpus_report_shows_both_sums() {
        let specs = vec![
            spec("India UPSC", 620, 620, None),
            spec("Winogrande XL", 82_973, 10_000, Some(85)),
        ];
        let report = validate_corpus(&specs);
        assert_eq!(report.computed_used_total, 10_620);
        assert_eq!(report.stated_used_total, STATED_USED_TOTAL);
        assert!(!report.used_totals_match());
        let text = report.render_text();
        assert!(text.contains("10620"));
        assert!(text.contains("485469"));
    }

    #[test]
    fn empty_manifest_sums_to_zero() {
        let report = validate_corpus(&[]);
        assert_eq!(report.computed_used_total, 0);
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn single_spec_sum() {
        let report = validate_corpus(&[spec("India UPSC", 620, 620, None)]);
        assert_eq!(report.computed_used_total, 620);
    }

    #[test]
    fn builtin_manifest_has_thirty_rows_and_known_sums() {
        let specs = builtin_manifest();
        assert_eq!(specs.len(), 30);
        let report = validate_corpus(&specs);
        assert_eq!(report.computed_used_total, 498_499);
        assert_eq!(report.computed_total_samples, 3_117_444);
        assert!(!report.used_totals_match());
        // The one row whose used count exceeds its total.
        assert!(report.warnings.iter().any(|w| w.starts_with("GSM8K")));
    }

    #[test]
    fn manifest_roundtrip() {
        let specs = builtin_manifest();
        let mut buffer = Vec::new();
        write_manifest(&mut buffer, &specs).unwrap();
        let back = parse_manifest(std::str::from_utf8(&buffer).unwrap()).unwrap();
        assert_eq!(back, specs);
    }

    proptest! {
        #[test]
        fn selection_is_submultiset_with_exact_counts(
            hindi_pool in 0usize..60,
            english_pool in 0usize..60,
            hindi_take in 0u64..60,
            english_take in 0u64..60,
            seed in any::<u64>(),
        ) {
            let rows = synthetic_rows("P", hindi_pool, english_pool);
            let plan = SamplingPlan {
                source: "P".into(),
                hindi_count: hindi_take,
                english_count: english_take,
                take_all: false,
            };
            match draw(&rows, &plan, seed) {
                Ok(drawn) => {
                    prop_assert!(hindi_take as usize <= hindi_pool);
                    prop_assert!(english_take as usize <= english_pool);
                    let hi = drawn.iter().filter(|r| r.language == Language::Hi).count() as u64;
                    let en = drawn.iter().filter(|r| r.language == Language::En).count() as u64;
                    prop_assert_eq!(hi, hindi_take);
                    prop_assert_eq!(en, english_take);
                    let ids: BTreeSet<&str> = drawn.iter().map(|r| r.id.as_str()).collect();
                    prop_assert_eq!(ids.len(), drawn.len());
                }
                Err(Error::Shortage { .. }) => {
                    prop_assert!(
                        (hindi_take as usize) > hindi_pool || (english_take as usize) > english_pool
                    );
                }
                Err(other) => prop_assert!(false, "unexpected error {other:?}"),
            }
        }
    }
}
