//! Shared domain types: training samples, dataset specs, benchmark items and
//! the pipeline configuration. Everything here is an immutable value object.

use crate::error::{Error, Result};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// The two corpus languages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Language {
    En,
    Hi,
}

impl Language {
    /// Short code used on the wire and in file names.
    pub fn code(self) -> &'static str {
        match self {
            Language::En => "en",
            Language::Hi => "hi",
        }
    }

    /// Full name as rendered inside the TRANSLATION keyword.
    pub fn full_name(self) -> &'static str {
        match self {
            Language::En => "English",
            Language::Hi => "Hindi",
        }
    }

    pub fn from_code(code: &str) -> Option<Language> {
        match code {
            "en" => Some(Language::En),
            "hi" => Some(Language::Hi),
            _ => None,
        }
    }

    pub fn from_full_name(name: &str) -> Option<Language> {
        match name {
            "English" => Some(Language::En),
            "Hindi" => Some(Language::Hi),
            _ => None,
        }
    }

    pub const ALL: [Language; 2] = [Language::En, Language::Hi];
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self {
            Language::En => "En",
            Language::Hi => "Hi",
        };
        write!(f, "{label}")
    }
}

impl Serialize for Language {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

impl<'de> Deserialize<'de> for Language {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let code = String::deserialize(d)?;
        Language::from_code(&code)
            .ok_or_else(|| D::Error::custom(format!("unknown language code {code:?}")))
    }
}

/// Task type of a training sample. One value per input-format row; the
/// translation task carries its target language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TaskType {
    Nli,
    Mcq,
    Numeric,
    Boolean,
    LongResponse,
    DirectResponse,
    Code,
    Summarize,
    Paraphrase,
    Translation(Language),
    Simplify,
}

impl TaskType {
    /// Keyword token that appears between the final two separators of a
    /// formatted prompt.
    pub fn keyword(self) -> String {
        match self {
            TaskType::Nli => "NLI".into(),
            TaskType::Mcq => "MCQ".into(),
            TaskType::Numeric => "NUMERIC".into(),
            TaskType::Boolean => "BOOLEAN".into(),
            TaskType::LongResponse => "LONG RESPONSE".into(),
            TaskType::DirectResponse => "DIRECT RESPONSE".into(),
            TaskType::Code => "CODE".into(),
            TaskType::Summarize => "SUMMARIZE".into(),
            TaskType::Paraphrase => "PARAPHRASE".into(),
            TaskType::Translation(lang) => format!("TRANSLATION [{}]", lang.full_name()),
            TaskType::Simplify => "SIMPLIFY".into(),
        }
    }

    /// Inverse of [`keyword`](Self::keyword).
    pub fn from_keyword(keyword: &str) -> Option<TaskType> {
        match keyword {
            "NLI" => Some(TaskType::Nli),
            "MCQ" => Some(TaskType::Mcq),
            "NUMERIC" => Some(TaskType::Numeric),
            "BOOLEAN" => Some(TaskType::Boolean),
            "LONG RESPONSE" => Some(TaskType::LongResponse),
            "DIRECT RESPONSE" => Some(TaskType::DirectResponse),
            "CODE" => Some(TaskType::Code),
            "SUMMARIZE" => Some(TaskType::Summarize),
            "PARAPHRASE" => Some(TaskType::Paraphrase),
            "SIMPLIFY" => Some(TaskType::Simplify),
            other => {
                let lang = other
                    .strip_prefix("TRANSLATION [")
                    .and_then(|rest| rest.strip_suffix(']'))
                    .and_then(Language::from_full_name)?;
                Some(TaskType::Translation(lang))
            }
        }
    }

    /// Wire spelling used in the JSONL corpus format.
    pub fn wire(self) -> String {
        match self {
            TaskType::Nli => "nli".into(),
            TaskType::Mcq => "mcq".into(),
            TaskType::Numeric => "numeric".into(),
            TaskType::Boolean => "boolean".into(),
            TaskType::LongResponse => "long_response".into(),
            TaskType::DirectResponse => "direct_response".into(),
            TaskType::Code => "code".into(),
            TaskType::Summarize => "summarize".into(),
            TaskType::Paraphrase => "paraphrase".into(),
            TaskType::Translation(lang) => format!("translation[{}]", lang.code()),
            TaskType::Simplify => "simplify".into(),
        }
    }

    pub fn from_wire(s: &str) -> Option<TaskType> {
        match s {
            "nli" => Some(TaskType::Nli),
            "mcq" => Some(TaskType::Mcq),
            "numeric" => Some(TaskType::Numeric),
            "boolean" => Some(TaskType::Boolean),
            "long_response" => Some(TaskType::LongResponse),
            "direct_response" => Some(TaskType::DirectResponse),
            "code" => Some(TaskType::Code),
            "summarize" => Some(TaskType::Summarize),
            "paraphrase" => Some(TaskType::Paraphrase),
            "simplify" => Some(TaskType::Simplify),
            other => {
                let lang = other
                    .strip_prefix("translation[")
                    .and_then(|rest| rest.strip_suffix(']'))
                    .and_then(Language::from_code)?;
                Some(TaskType::Translation(lang))
            }
        }
    }

    /// The eleven input formats, with translation instantiated for Hindi.
    pub fn template_variants() -> [TaskType; 11] {
        [
            TaskType::Nli,
            TaskType::Mcq,
            TaskType::Numeric,
            TaskType::Boolean,
            TaskType::LongResponse,
            TaskType::DirectResponse,
            TaskType::Code,
            TaskType::Summarize,
            TaskType::Paraphrase,
            TaskType::Translation(Language::Hi),
            TaskType::Simplify,
        ]
    }

    /// Number of input segments the task consumes.
    pub fn expected_segments(self) -> usize {
        match self {
            TaskType::Nli => 2,
            _ => 1,
        }
    }
}

impl Serialize for TaskType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.wire())
    }
}

impl<'de> Deserialize<'de> for TaskType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        TaskType::from_wire(&s).ok_or_else(|| D::Error::custom(format!("unknown task {s:?}")))
    }
}

/// The five localized knowledge sources. `is_cultural` on a sample must be
/// true exactly when its source is one of these.
pub const CULTURAL_SOURCES: [&str; 5] = [
    "India Law",
    "India Recipe",
    "India Travel",
    "India TAX",
    "India UPSC",
];

pub fn is_cultural_source(source: &str) -> bool {
    CULTURAL_SOURCES.contains(&source)
}

/// One instruction/response training record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub id: String,
    pub task: TaskType,
    /// One text segment for most tasks, two for NLI.
    pub input_fields: Vec<String>,
    /// Answer options; populated for MCQ only.
    #[serde(default)]
    pub options: Vec<String>,
    pub output: String,
    pub language: Language,
    pub domain: String,
    pub source: String,
    pub is_cultural: bool,
}

/// A named invariant violation found on a [`Sample`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyInputFields,
    SegmentCount { expected: usize, got: usize },
    TooFewOptions(usize),
    TooManyOptions(usize),
    UnexpectedOptions,
    CulturalFlagMismatch,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyInputFields => write!(f, "input_fields is empty"),
            Violation::SegmentCount { expected, got } => {
                write!(f, "expected {expected} input segments, got {got}")
            }
            Violation::TooFewOptions(n) => write!(f, "options < 2 (got {n})"),
            Violation::TooManyOptions(n) => write!(f, "options > 10 (got {n})"),
            Violation::UnexpectedOptions => write!(f, "options present for non-mcq task"),
            Violation::CulturalFlagMismatch => write!(f, "cultural flag mismatch"),
        }
    }
}

/// Outcome of validating one sample. Violations are data, not faults.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check every `Sample` invariant; total, never fails.
pub fn validate_sample(sample: &Sample) -> ValidationReport {
    let mut violations = Vec::new();

    if sample.input_fields.is_empty() {
        violations.push(Violation::EmptyInputFields);
    } else {
        let expected = sample.task.expected_segments();
        let got = sample.input_fields.len();
        if got != expected {
            violations.push(Violation::SegmentCount { expected, got });
        }
    }

    if sample.task == TaskType::Mcq {
        let n = sample.options.len();
        if n < 2 {
            violations.push(Violation::TooFewOptions(n));
        } else if n > 10 {
            violations.push(Violation::TooManyOptions(n));
        }
    } else if !sample.options.is_empty() {
        violations.push(Violation::UnexpectedOptions);
    }

    if sample.is_cultural != is_cultural_source(&sample.source) {
        violations.push(Violation::CulturalFlagMismatch);
    }

    ValidationReport { violations }
}

/// One row of the source manifest: where a dataset comes from and how much
/// of it is used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub source: String,
    pub total_samples: u64,
    pub used_samples: u64,
    /// Percentage of used samples drawn from the Hindi split. Absent means
    /// take every row as-is, whatever its language mix.
    pub hindi_ratio: Option<u8>,
}

impl DatasetSpec {
    /// Soft checks; a used count above the total is reported, not rejected,
    /// because published data sheets contain such rows.
    pub fn warnings(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        if self.used_samples > self.total_samples {
            warnings.push(format!(
                "{}: used_samples {} exceeds total_samples {}",
                self.source, self.used_samples, self.total_samples
            ));
        }
        if let Some(ratio) = self.hindi_ratio {
            if ratio > 100 {
                warnings.push(format!("{}: hindi_ratio {} exceeds 100", self.source, ratio));
            }
        }
        warnings
    }
}

/// Benchmarks evaluated through the Boolean prompt template.
pub const BOOLEAN_BENCHMARKS: [&str; 1] = ["BoolQ"];

/// One evaluation question.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkItem {
    pub id: String,
    pub benchmark: String,
    pub question: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context: Option<String>,
    pub choices: Vec<String>,
    pub gold_index: usize,
    pub language: Language,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
}

impl BenchmarkItem {
    pub fn validate(&self) -> Result<()> {
        let n = self.choices.len();
        if !(2..=10).contains(&n) {
            return Err(Error::InvalidItem {
                id: self.id.clone(),
                reason: format!("{n} choices outside [2, 10]"),
            });
        }
        if self.gold_index >= n {
            return Err(Error::InvalidItem {
                id: self.id.clone(),
                reason: format!("gold_index {} out of range for {n} choices", self.gold_index),
            });
        }
        if BOOLEAN_BENCHMARKS.contains(&self.benchmark.as_str()) && n != 2 {
            return Err(Error::InvalidItem {
                id: self.id.clone(),
                reason: format!("boolean benchmark with {n} choices"),
            });
        }
        Ok(())
    }
}

/// One multiple-choice prediction, as ingested from this harness or an
/// external one. The minimal schema for bias and domain analysis:
/// `gold_index` is only needed for accuracy work, `domain` for per-domain
/// grouping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: String,
    pub predicted_index: usize,
    pub n_options: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
}

impl PredictionRecord {
    pub fn validate(&self) -> Result<()> {
        if self.n_options == 0 || self.n_options > 10 || self.predicted_index >= self.n_options {
            return Err(Error::PredictionOutOfRange {
                id: self.id.clone(),
                predicted: self.predicted_index,
                n_options: self.n_options,
            });
        }
        Ok(())
    }

    pub fn domain_label(&self) -> &str {
        self.domain.as_deref().unwrap_or("Other")
    }
}

/// Training-run configuration. Only seed, batch size and gradient
/// accumulation drive pipeline behaviour; the rest is recorded metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub seed: u64,
    pub batch_size: usize,
    pub grad_accum: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub weight_decay: f64,
    pub warmup_steps: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: 1024,
            batch_size: 40,
            grad_accum: 15,
            epochs: 1,
            learning_rate: 2e-5,
            weight_decay: 1e-2,
            warmup_steps: 0,
        }
    }
}

impl PipelineConfig {
    /// Effective batch size: batch size times gradient accumulation steps.
    pub fn effective_batch_size(&self) -> usize {
        self.batch_size * self.grad_accum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nli_sample() -> Sample {
        Sample {
            id: "s1".into(),
            task: TaskType::Nli,
            input_fields: vec!["premise".into(), "hypothesis".into()],
            options: vec![],
            output: "entailment".into(),
            language: Language::En,
            domain: "NLI".into(),
            source: "XNLI/IndicXNLI".into(),
            is_cultural: false,
        }
    }

    #[test]
    fn nli_with_two_segments_is_valid() {
        assert!(validate_sample(&nli_sample()).is_valid());
    }

    #[test]
    fn mcq_with_one_option_reports_too_few() {
        let sample = Sample {
            task: TaskType::Mcq,
            input_fields: vec!["q".into()],
            options: vec!["only".into()],
            ..nli_sample()
        };
        let report = validate_sample(&sample);
        assert_eq!(report.violations, vec![Violation::TooFewOptions(1)]);
        assert_eq!(report.violations[0].to_string(), "options < 2 (got 1)");
    }

    #[test]
    fn cultural_flag_must_match_source() {
        let sample = Sample {
            source: "India Law".into(),
            is_cultural: false,
            input_fields: vec!["q".into()],
            task: TaskType::DirectResponse,
            ..nli_sample()
        };
        let report = validate_sample(&sample);
        assert!(report.violations.contains(&Violation::CulturalFlagMismatch));

        let sample = Sample {
            source: "MBPP".into(),
            is_cultural: true,
            input_fields: vec!["q".into()],
            task: TaskType::Code,
            ..nli_sample()
        };
        assert!(validate_sample(&sample)
            .violations
            .contains(&Violation::CulturalFlagMismatch));
    }

    #[test]
    fn five_cultural_sources() {
        assert_eq!(CULTURAL_SOURCES.len(), 5);
        for source in CULTURAL_SOURCES {
            assert!(is_cultural_source(source));
        }
        assert!(!is_cultural_source("BoolQ"));
    }

    #[test]
    fn task_wire_roundtrip() {
        let mut tasks = TaskType::template_variants().to_vec();
        tasks.push(TaskType::Translation(Language::En));
        for task in tasks {
            assert_eq!(TaskType::from_wire(&task.wire()), Some(task));
            assert_eq!(TaskType::from_keyword(&task.keyword()), Some(task));
        }
        assert_eq!(TaskType::from_wire("translation[fr]"), None);
        assert_eq!(TaskType::from_keyword("TRANSLATION [French]"), None);
    }

    #[test]
    fn sample_json_roundtrip() {
        let sample = Sample {
            task: TaskType::Translation(Language::Hi),
            input_fields: vec!["Hello".into()],
            ..nli_sample()
        };
        let text = serde_json::to_string(&sample).unwrap();
        let back: Sample = serde_json::from_str(&text).unwrap();
        assert_eq!(back, sample);
        // Canonical serialization is stable.
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn sample_wire_keys_are_canonical() {
        // The emitted JSON carries the keys in declaration order.
        let text = serde_json::to_string(&nli_sample()).unwrap();
        let expected = [
            "id",
            "task",
            "input_fields",
            "options",
            "output",
            "language",
            "domain",
            "source",
            "is_cultural",
        ];
        let positions: Vec<usize> = expected
            .iter()
            .map(|key| text.find(&format!("\"{key}\":")).unwrap_or_else(|| panic!("missing {key}")))
            .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "key order in {text}");
    }

    #[test]
    fn dataset_spec_warns_on_used_above_total() {
        let spec = DatasetSpec {
            source: "GSM8K".into(),
            total_samples: 14_937,
            used_samples: 14_973,
            hindi_ratio: None,
        };
        let warnings = spec.warnings();
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("14973"));
    }

    #[test]
    fn boolean_benchmark_item_needs_two_choices() {
        let item = BenchmarkItem {
            id: "b1".into(),
            benchmark: "BoolQ".into(),
            question: "q".into(),
            context: None,
            choices: vec!["Yes".into(), "No".into(), "Maybe".into()],
            gold_index: 0,
            language: Language::En,
            domain: None,
        };
        assert!(item.validate().is_err());
    }

    #[test]
    fn default_config_reproduces_effective_batch() {
        let config = PipelineConfig::default();
        assert_eq!(config.seed, 1024);
        assert_eq!(config.effective_batch_size(), 600);
    }

    proptest::proptest! {
        #[test]
        fn sample_roundtrips_bit_exactly(
            id in ".*",
            field_a in ".*",
            field_b in ".*",
            output in ".*",
            domain in ".*",
            source in ".*",
            hindi in proptest::bool::ANY,
        ) {
            let sample = Sample {
                id,
                task: TaskType::Nli,
                input_fields: vec![field_a, field_b],
                options: vec![],
                output,
                language: if hindi { Language::Hi } else { Language::En },
                domain,
                source,
                is_cultural: false,
            };
            let text = serde_json::to_string(&sample).unwrap();
            let back: Sample = serde_json::from_str(&text).unwrap();
            proptest::prop_assert_eq!(&back, &sample);
            proptest::prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
        }
    }
}
