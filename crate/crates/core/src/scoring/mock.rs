//! Deterministic scoring backend for tests and dry runs.

use super::{
    Backend, ContinuationScore, ScoreRequest, ScoreResponse, TokenizeRequest, TokenizeResponse,
};
use crate::error::{Error, Result};
use crate::rng::{fnv1a64, unit_f64};

/// Hash-driven backend. For a continuation with `t` whitespace tokens the
/// total log probability is `-rate * t`, where `rate` lies in `[0.5, 10.5)`
/// and depends only on `(seed, prompt, continuation)` through FNV-1a over
/// `seed_le || prompt || 0x1F || continuation`. Identical on every platform.
#[derive(Debug, Clone)]
pub struct MockBackend {
    seed: u64,
}

impl MockBackend {
    pub fn new(seed: u64) -> Self {
        MockBackend { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Per-token rate for a (prompt, continuation) pair.
    pub fn rate(&self, prompt: &str, continuation: &str) -> f64 {
        let hash = fnv1a64([
            self.seed.to_le_bytes().as_slice(),
            prompt.as_bytes(),
            &[0x1F],
            continuation.as_bytes(),
        ]);
        0.5 + unit_f64(hash) * 10.0
    }

    fn whitespace_tokens(text: &str) -> u64 {
        text.split_whitespace().count() as u64
    }
}

impl Backend for MockBackend {
    fn score(&self, request: &ScoreRequest) -> Result<ScoreResponse> {
        let mut scores = Vec::with_capacity(request.continuations.len());
        for continuation in &request.continuations {
            let token_count = Self::whitespace_tokens(continuation);
            if token_count == 0 {
                return Err(Error::EmptyInput);
            }
            scores.push(ContinuationScore {
                total_logprob: -self.rate(&request.prompt, continuation) * token_count as f64,
                token_count,
            });
        }
        Ok(ScoreResponse { scores })
    }

    fn tokenize(&self, request: &TokenizeRequest) -> Result<TokenizeResponse> {
        let count = Self::whitespace_tokens(&request.text);
        if count == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(TokenizeResponse { count })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn request(prompt: &str, continuations: &[&str]) -> ScoreRequest {
        ScoreRequest {
            model: "mock".into(),
            prompt: prompt.into(),
            continuations: continuations.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn identical_requests_score_identically() {
        let backend = MockBackend::new(1024);
        let req = request("Q ### BOOLEAN ### :", &["Yes", "No"]);
        assert_eq!(backend.score(&req).unwrap(), backend.score(&req).unwrap());
    }

    #[test]
    fn order_and_length_are_preserved() {
        let backend = MockBackend::new(7);
        let req = request("p", &["a", "b", "c"]);
        let response = backend.score(&req).unwrap();
        assert_eq!(response.scores.len(), 3);
        // Single-token continuations: total equals -rate.
        for (continuation, score) in req.continuations.iter().zip(&response.scores) {
            assert_eq!(score.token_count, 1);
            assert_eq!(score.total_logprob, -backend.rate("p", continuation));
        }
    }

    #[test]
    fn token_count_is_whitespace_tokens() {
        let backend = MockBackend::new(0);
        let response = backend
            .tokenize(&TokenizeRequest {
                model: "mock".into(),
                text: "a b c".into(),
            })
            .unwrap();
        assert_eq!(response.count, 3);

        let score = backend.score(&request("p", &["yes"])).unwrap();
        assert_eq!(score.scores[0].token_count, 1);
    }

    #[test]
    fn rates_stay_in_band() {
        let backend = MockBackend::new(99);
        for index in 0..1000 {
            let rate = backend.rate("prompt", &format!("c{index}"));
            assert!((0.5..10.5).contains(&rate));
        }
    }

    #[test]
    fn different_seeds_rarely_collide() {
        let a = MockBackend::new(1);
        let b = MockBackend::new(2);
        let mut collisions = 0;
        for index in 0..10_000 {
            let continuation = format!("c{index}");
            if a.rate("p", &continuation) == b.rate("p", &continuation) {
                collisions += 1;
            }
        }
        assert_eq!(collisions, 0, "seed change should move every rate");

        // And rates are well spread for one seed.
        let distinct: HashSet<u64> = (0..1000)
            .map(|i| a.rate("p", &format!("c{i}")).to_bits())
            .collect();
        assert!(distinct.len() > 990);
    }
}
