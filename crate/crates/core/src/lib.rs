//! Deterministic bilingual instruction-corpus curation and log-likelihood
//! benchmark evaluation.
//!
//! The pipeline runs in stages, each usable on its own:
//!
//! * [`corpus`] — shared domain types and their validation
//! * [`textprep`] — input preprocessing and the task-tagged prompt templates
//! * [`sampler`] — seeded per-dataset subsampling from a source manifest
//! * [`orderer`] — length-based corpus ordering with cultural interleaving
//! * [`scoring`] — the wire protocol for continuation log probabilities
//! * [`evaluator`] — normalized log-likelihood benchmark evaluation
//! * [`bias`] — predicted-choice position distributions and bias index
//! * [`report`] — markdown/CSV/SVG rendering of results
//! * [`manifest`] — run manifests with content digests, config files

pub mod bias;
pub mod corpus;
pub mod error;
pub mod evaluator;
pub mod jsonl;
pub mod manifest;
pub mod orderer;
pub mod report;
pub mod rng;
pub mod sampler;
pub mod scoring;
pub mod textprep;

pub use bias::{bias_index, choice_distribution, per_domain, ChoiceDistribution};
pub use corpus::{
    is_cultural_source, validate_sample, BenchmarkItem, DatasetSpec, Language, PipelineConfig,
    PredictionRecord, Sample, TaskType, ValidationReport, Violation, CULTURAL_SOURCES,
};
pub use error::{Error, Result};
pub use evaluator::{
    average_scores, compare_runs, domain_breakdown, evaluate, score_item, sweep_grid, Coverage,
    DeltaTable, DomainDeltaTable, EvalOptions, EvalResult, EvalRun, ItemScore, NormalizationMode,
    SweepConfig, TargetStyle,
};
pub use orderer::{
    effective_batch_size, length_of, order, Block, LengthMode, OrderItem, OrderedRecord,
    OrderingConfig, PlacedItem,
};
pub use sampler::{draw, plan_from_spec, validate_corpus, CorpusReport, SamplingPlan};
pub use scoring::{
    backend_from_url, count_tokens, score_continuations, Backend, ContinuationScore, FixtureBackend,
    HttpBackend, MockBackend, ScoreRequest, ScoreResponse, ScoringClient,
};
pub use textprep::{
    enumerate_options, format_input, parse_task_keyword, preprocess, render_chat, ChatTemplate,
    FormattedSample,
};
