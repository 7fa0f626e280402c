//! Record/replay support: every exchange is one canonical-JSON line, so a
//! fixture file doubles as a readable transcript of backend traffic.

use super::{Backend, ScoreRequest, ScoreResponse, TokenizeRequest, TokenizeResponse};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::Write;
use std::path::Path;
use std::sync::Mutex;

/// One recorded request/response pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Exchange {
    Score {
        request: ScoreRequest,
        response: ScoreResponse,
    },
    Tokenize {
        request: TokenizeRequest,
        response: TokenizeResponse,
    },
}

/// Canonical JSON: compact encoding with struct-declaration field order.
/// Parsing any equivalent JSON and re-serializing yields these bytes.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("protocol types serialize")
}

/// Replays recorded exchanges; unknown requests are an error.
pub struct FixtureBackend {
    scores: HashMap<ScoreRequest, ScoreResponse>,
    tokenizes: HashMap<TokenizeRequest, TokenizeResponse>,
}

impl FixtureBackend {
    pub fn from_exchanges(exchanges: impl IntoIterator<Item = Exchange>) -> Self {
        let mut scores = HashMap::new();
        let mut tokenizes = HashMap::new();
        for exchange in exchanges {
            match exchange {
                Exchange::Score { request, response } => {
                    scores.insert(request, response);
                }
                Exchange::Tokenize { request, response } => {
                    tokenizes.insert(request, response);
                }
            }
        }
        FixtureBackend { scores, tokenizes }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let exchanges: Vec<Exchange> = crate::jsonl::read_file(path)?;
        Ok(Self::from_exchanges(exchanges))
    }

    pub fn len(&self) -> usize {
        self.scores.len() + self.tokenizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Backend for FixtureBackend {
    fn score(&self, request: &ScoreRequest) -> Result<ScoreResponse> {
        self.scores.get(request).cloned().ok_or_else(|| {
            Error::Fixture(format!(
                "no recorded score for request {}",
                canonical_json(request)
            ))
        })
    }

    fn tokenize(&self, request: &TokenizeRequest) -> Result<TokenizeResponse> {
        self.tokenizes.get(request).cloned().ok_or_else(|| {
            Error::Fixture(format!(
                "no recorded tokenize for request {}",
                canonical_json(request)
            ))
        })
    }
}

/// Wraps a backend and appends every exchange to a writer as JSONL.
pub struct RecordingBackend<B> {
    inner: B,
    sink: Mutex<Box<dyn Write + Send>>,
}

impl<B: Backend> RecordingBackend<B> {
    pub fn new(inner: B, sink: Box<dyn Write + Send>) -> Self {
        RecordingBackend {
            inner,
            sink: Mutex::new(sink),
        }
    }

    fn record(&self, exchange: &Exchange) -> Result<()> {
        let mut sink = self.sink.lock().expect("recording sink poisoned");
        sink.write_all(canonical_json(exchange).as_bytes())?;
        sink.write_all(b"\n")?;
        sink.flush()?;
        Ok(())
    }
}

impl<B: Backend> Backend for RecordingBackend<B> {
    fn score(&self, request: &ScoreRequest) -> Result<ScoreResponse> {
        let response = self.inner.score(request)?;
        self.record(&Exchange::Score {
            request: request.clone(),
            response: response.clone(),
        })?;
        Ok(response)
    }

    fn tokenize(&self, request: &TokenizeRequest) -> Result<TokenizeResponse> {
        let response = self.inner.tokenize(request)?;
        self.record(&Exchange::Tokenize {
            request: request.clone(),
            response,
        })?;
        Ok(response)
    }
}
