//! Input preprocessing and the task-tagged prompt templates.
//!
//! A formatted prompt is `body ### KEYWORD ### :` where the body carries the
//! preprocessed input segments (two for NLI, question plus enumerated options
//! for MCQ, one segment otherwise) and KEYWORD is the task tag. Everything is
//! byte-exact: golden tests pin each template.

use crate::corpus::{Language, Sample, TaskType};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Segment separator inside a prompt.
pub const SEPARATOR: &str = " ### ";

/// Every prompt ends with this.
pub const PROMPT_SUFFIX: &str = " ### :";

/// Normalize raw text: collapse runs of ASCII spaces to one, strip leading
/// and trailing ASCII spaces, and turn double quotes (ASCII `"` and the
/// typographic pair) into ASCII single quotes. Tabs and newlines pass
/// through untouched so code samples keep their layout. Idempotent.
pub fn preprocess(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut previous_was_space = false;
    for ch in raw.chars() {
        let ch = match ch {
            '"' | '\u{201C}' | '\u{201D}' => '\'',
            c => c,
        };
        if ch == ' ' {
            if previous_was_space {
                continue;
            }
            previous_was_space = true;
        } else {
            previous_was_space = false;
        }
        out.push(ch);
    }
    let trimmed = out.trim_matches(' ');
    if trimmed.len() == out.len() {
        out
    } else {
        trimmed.to_string()
    }
}

/// Render MCQ options as `A) first, B) second, ...`. Options are
/// preprocessed individually; between 2 and 10 are accepted (labels A..J).
pub fn enumerate_options(options: &[String]) -> Result<String> {
    if !(2..=10).contains(&options.len()) {
        return Err(Error::OptionCount(options.len()));
    }
    let rendered: Vec<String> = options
        .iter()
        .enumerate()
        .map(|(index, option)| {
            let label = (b'A' + index as u8) as char;
            format!("{label}) {}", preprocess(option))
        })
        .collect();
    Ok(rendered.join(", "))
}

/// A sample rendered into its training prompt and target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormattedSample {
    pub id: String,
    pub prompt: String,
    pub target: String,
    pub language: Language,
}

/// Build the task-tagged prompt for a sample. Expects a sample that passes
/// [`validate_sample`](crate::corpus::validate_sample); structural problems
/// surface as [`Error::InvalidSample`].
pub fn format_input(sample: &Sample) -> Result<FormattedSample> {
    let segment = |index: usize| -> Result<String> {
        sample
            .input_fields
            .get(index)
            .map(|text| preprocess(text))
            .ok_or_else(|| Error::InvalidSample {
                id: sample.id.clone(),
                reason: format!(
                    "task {} needs {} input segments, got {}",
                    sample.task.keyword(),
                    sample.task.expected_segments(),
                    sample.input_fields.len()
                ),
            })
    };

    let body = match sample.task {
        TaskType::Nli => format!("{}{SEPARATOR}{}", segment(0)?, segment(1)?),
        TaskType::Mcq => format!("{}{SEPARATOR}{}", segment(0)?, enumerate_options(&sample.options)?),
        _ => segment(0)?,
    };

    let prompt = format!("{body}{SEPARATOR}{}{PROMPT_SUFFIX}", sample.task.keyword());
    Ok(FormattedSample {
        id: sample.id.clone(),
        prompt,
        target: preprocess(&sample.output),
        language: sample.language,
    })
}

/// Recover the task type from a formatted prompt by reading the keyword
/// between the final two separators.
pub fn parse_task_keyword(prompt: &str) -> Option<TaskType> {
    let stem = prompt.strip_suffix(PROMPT_SUFFIX)?;
    let keyword_at = stem.rfind(SEPARATOR)? + SEPARATOR.len();
    TaskType::from_keyword(&stem[keyword_at..])
}

/// An opaque chat wrapper with a `{user}` slot for the formatted prompt.
#[derive(Debug, Clone, PartialEq)]
pub struct ChatTemplate {
    text: String,
}

/// Placeholder that marks the user slot in a template file.
pub const USER_PLACEHOLDER: &str = "{user}";

impl ChatTemplate {
    pub fn new(text: impl Into<String>) -> Result<ChatTemplate> {
        let text = text.into();
        if !text.contains(USER_PLACEHOLDER) {
            return Err(Error::MissingPlaceholder);
        }
        Ok(ChatTemplate { text })
    }

    /// The template that passes prompts through unchanged.
    pub fn identity() -> ChatTemplate {
        ChatTemplate {
            text: USER_PLACEHOLDER.to_string(),
        }
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// Substitute the prompt into every user slot of the template.
pub fn render_chat(formatted: &FormattedSample, template: &ChatTemplate) -> String {
    template.text.replace(USER_PLACEHOLDER, &formatted.prompt)
}
