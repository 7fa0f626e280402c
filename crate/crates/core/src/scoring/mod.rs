//! Wire protocol for continuation scoring.
//!
//! Any inference backend is reachable through two JSON-over-HTTP endpoints:
//!
//! ```text
//! POST /v1/score    {"model", "prompt", "continuations": [..]}
//!                   -> {"scores": [{"total_logprob", "token_count"}, ..]}
//! POST /v1/tokenize {"model", "text"} -> {"count"}
//! ```
//!
//! Log probabilities are natural-log units; adapters for backends that
//! report other bases convert before answering. The [`MockBackend`] serves
//! the entire test suite deterministically, and [`FixtureBackend`] replays
//! recorded exchanges.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::time::Duration;

mod fixture;
mod http;
mod mock;

pub use fixture::{canonical_json, Exchange, FixtureBackend, RecordingBackend};
pub use http::{HttpBackend, TOKEN_ENV, URL_ENV};
pub use mock::MockBackend;

/// Score of one continuation: summed log probability and how many tokens it
/// spans.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuationScore {
    pub total_logprob: f64,
    pub token_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScoreRequest {
    pub model: String,
    pub prompt: String,
    pub continuations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreResponse {
    pub scores: Vec<ContinuationScore>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TokenizeRequest {
    pub model: String,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizeResponse {
    pub count: u64,
}

/// A scoring provider. Implementations must be safe to share across
/// threads; scoring is read-only, so retries never duplicate side effects.
pub trait Backend: Send + Sync {
    fn score(&self, request: &ScoreRequest) -> Result<ScoreResponse>;
    fn tokenize(&self, request: &TokenizeRequest) -> Result<TokenizeResponse>;
}

impl Backend for Box<dyn Backend> {
    fn score(&self, request: &ScoreRequest) -> Result<ScoreResponse> {
        self.as_ref().score(request)
    }

    fn tokenize(&self, request: &TokenizeRequest) -> Result<TokenizeResponse> {
        self.as_ref().tokenize(request)
    }
}

impl ScoreRequest {
    /// Protocol-level checks: between 1 and 10 continuations, none blank.
    pub fn validate(&self) -> Result<()> {
        if self.continuations.is_empty() {
            return Err(Error::EmptyContinuations);
        }
        if self.continuations.len() > 10 {
            return Err(Error::TooManyContinuations(self.continuations.len()));
        }
        for (index, continuation) in self.continuations.iter().enumerate() {
            if continuation.split_whitespace().next().is_none() {
                return Err(Error::BlankContinuation(index));
            }
        }
        Ok(())
    }
}

fn validate_response(request: &ScoreRequest, response: &ScoreResponse) -> Result<()> {
    if response.scores.len() != request.continuations.len() {
        return Err(Error::Protocol(format!(
            "sent {} continuations, got {} scores",
            request.continuations.len(),
            response.scores.len()
        )));
    }
    for (index, score) in response.scores.iter().enumerate() {
        if score.token_count == 0 {
            return Err(Error::Protocol(format!("score {index} has token_count 0")));
        }
        if !score.total_logprob.is_finite() {
            return Err(Error::Protocol(format!(
                "score {index} has non-finite total_logprob"
            )));
        }
    }
    Ok(())
}

/// Retry schedule for transport failures: `max_attempts` tries with delays
/// of `base_delay * 2^attempt` between them.
#[derive(Debug, Clone)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_attempts: 3,
            base_delay: Duration::from_millis(200),
        }
    }
}

impl RetryPolicy {
    fn run<T>(&self, mut call: impl FnMut() -> Result<T>) -> Result<T> {
        let mut attempt = 0;
        loop {
            match call() {
                Ok(value) => return Ok(value),
                Err(error) if error.is_retryable() && attempt + 1 < self.max_attempts => {
                    let delay = self.base_delay * 2u32.pow(attempt);
                    log::warn!("transport failure, retrying in {delay:?}: {error}");
                    std::thread::sleep(delay);
                    attempt += 1;
                }
                Err(error) => return Err(error),
            }
        }
    }
}

/// Counting semaphore bounding concurrent backend calls.
struct InFlightLimit {
    available: std::sync::Mutex<usize>,
    freed: std::sync::Condvar,
}

impl InFlightLimit {
    fn new(permits: usize) -> Self {
        InFlightLimit {
            available: std::sync::Mutex::new(permits.max(1)),
            freed: std::sync::Condvar::new(),
        }
    }

    fn run<T>(&self, call: impl FnOnce() -> T) -> T {
        let mut available = self.available.lock().expect("limiter poisoned");
        while *available == 0 {
            available = self.freed.wait(available).expect("limiter poisoned");
        }
        *available -= 1;
        drop(available);

        let result = call();

        *self.available.lock().expect("limiter poisoned") += 1;
        self.freed.notify_one();
        result
    }
}

/// Validating, retrying wrapper around a [`Backend`]. Safe to share across
/// threads; at most `max_in_flight` requests (default 8) touch the backend
/// at once.
pub struct ScoringClient {
    backend: Box<dyn Backend>,
    retry: RetryPolicy,
    limit: InFlightLimit,
}

impl ScoringClient {
    pub fn new(backend: Box<dyn Backend>) -> Self {
        ScoringClient {
            backend,
            retry: RetryPolicy::default(),
            limit: InFlightLimit::new(8),
        }
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    pub fn with_max_in_flight(mut self, permits: usize) -> Self {
        self.limit = InFlightLimit::new(permits);
        self
    }

    pub fn backend(&self) -> &dyn Backend {
        self.backend.as_ref()
    }

    pub fn score(&self, request: &ScoreRequest) -> Result<ScoreResponse> {
        request.validate()?;
        let response = self
            .retry
            .run(|| self.limit.run(|| self.backend.score(request)))?;
        validate_response(request, &response)?;
        Ok(response)
    }

    pub fn count_tokens(&self, model: &str, text: &str) -> Result<u64> {
        if text.split_whitespace().next().is_none() {
            return Err(Error::EmptyInput);
        }
        let request = TokenizeRequest {
            model: model.to_string(),
            text: text.to_string(),
        };
        Ok(self
            .retry
            .run(|| self.limit.run(|| self.backend.tokenize(&request)))?
            .count)
    }
}

/// Adapts a client + model pair to the orderer's [`TokenCounter`] trait.
pub struct BackendTokenCounter<'a> {
    pub client: &'a ScoringClient,
    pub model: &'a str,
}

impl crate::orderer::TokenCounter for BackendTokenCounter<'_> {
    fn count(&self, text: &str) -> Result<u64> {
        self.client.count_tokens(self.model, text)
    }
}

/// One-shot scoring with the default retry policy and full validation.
pub fn score_continuations(request: &ScoreRequest, backend: &dyn Backend) -> Result<ScoreResponse> {
    request.validate()?;
    let response = RetryPolicy::default().run(|| backend.score(request))?;
    validate_response(request, &response)?;
    Ok(response)
}

/// One-shot token count with the default retry policy.
pub fn count_tokens(text: &str, model: &str, backend: &dyn Backend) -> Result<u64> {
    if text.split_whitespace().next().is_none() {
        return Err(Error::EmptyInput);
    }
    let request = TokenizeRequest {
        model: model.to_string(),
        text: text.to_string(),
    };
    Ok(RetryPolicy::default().run(|| backend.tokenize(&request))?.count)
}

/// Build a backend from a URL:
///
/// * `mock://SEED` — deterministic hash-based scorer
/// * `fixture://PATH` — replay recorded exchanges from a file
/// * `http://...` / `https://...` — live protocol endpoint
pub fn backend_from_url(url: &str) -> Result<Box<dyn Backend>> {
    if let Some(seed) = url.strip_prefix("mock://") {
        let seed: u64 = seed
            .parse()
            .map_err(|_| Error::Config(format!("bad mock seed in {url:?}")))?;
        return Ok(Box::new(MockBackend::new(seed)));
    }
    if let Some(path) = url.strip_prefix("fixture://") {
        return Ok(Box::new(FixtureBackend::load(path)?));
    }
    if url.starts_with("http://") || url.starts_with("https://") {
        let token = std::env::var(TOKEN_ENV).ok();
        return Ok(Box::new(HttpBackend::new(url, token)?));
    }
    Err(Error::Config(format!("unsupported backend url {url:?}")))
}
