pub mod bias;
pub mod compare;
pub mod curate;
pub mod eval;
pub mod order;
pub mod report;
pub mod sweep_plan;

use crate::AppError;
use sangam_core::error::{Error, Result};
use sangam_core::manifest::RunManifest;
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

/// Shared command context: loaded config file plus the raw argv (recorded
/// in run manifests).
pub struct Ctx {
    pub config: BTreeMap<String, String>,
    pub argv: Vec<String>,
}

impl Ctx {
    /// Flag value if given, else config-file value, else default.
    pub fn resolve<T: FromStr + Clone>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T> {
        if let Some(value) = flag {
            return Ok(value);
        }
        match self.config.get(key) {
            Some(raw) => raw
                .parse()
                .map_err(|_| Error::Config(format!("bad value {raw:?} for config key {key}"))),
            None => Ok(default),
        }
    }

    /// Like [`resolve`](Self::resolve) but without a default.
    pub fn resolve_opt(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| self.config.get(key).cloned())
    }

    pub fn manifest(&self, command: &str) -> RunManifest {
        RunManifest::new(command, self.argv.clone(), env!("CARGO_PKG_VERSION"))
    }
}

pub fn ensure_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path)?;
    Ok(())
}

pub fn write_text(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content)?;
    Ok(())
}

/// Parse eval normalization mode names (snake_case plus short aliases).
pub fn parse_norm(text: &str) -> Result<sangam_core::NormalizationMode> {
    use sangam_core::NormalizationMode::*;
    match text {
        "mean_per_token" | "mean" => Ok(MeanPerToken),
        "unnormalized" | "raw" => Ok(Unnormalized),
        "byte_length_normalized" | "byte" => Ok(ByteLengthNormalized),
        other => Err(Error::Config(format!("unknown normalization mode {other:?}"))),
    }
}

pub fn parse_target_style(text: &str) -> Result<sangam_core::TargetStyle> {
    use sangam_core::TargetStyle::*;
    match text {
        "choice_text" | "text" => Ok(ChoiceText),
        "choice_letter" | "letter" => Ok(ChoiceLetter),
        other => Err(Error::Config(format!("unknown target style {other:?}"))),
    }
}

pub fn parse_length_mode(text: &str) -> Result<sangam_core::LengthMode> {
    use sangam_core::LengthMode::*;
    match text {
        "ws" | "whitespace" | "whitespace_tokens" => Ok(WhitespaceTokens),
        "bytes" => Ok(Bytes),
        "backend" | "token_count_via_backend" => Ok(TokenCountViaBackend),
        other => Err(Error::Config(format!("unknown length mode {other:?}"))),
    }
}

/// Convenience: run manifests next to a single-file output.
pub fn sidecar_manifest_path(output: &Path) -> std::path::PathBuf {
    let mut name = output
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".into());
    name.push_str(".manifest.json");
    output.with_file_name(name)
}

pub type CommandResult = std::result::Result<(), AppError>;
