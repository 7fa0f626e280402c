//! Live protocol client over HTTP.

use super::{Backend, ScoreRequest, ScoreResponse, TokenizeRequest, TokenizeResponse};
use crate::error::{Error, Result};
use std::time::Duration;

/// Environment variable holding the backend base URL.
pub const URL_ENV: &str = "SCORE_BACKEND_URL";
/// Environment variable holding an optional bearer token.
pub const TOKEN_ENV: &str = "SCORE_BACKEND_TOKEN";

/// Blocking client for the `/v1/score` and `/v1/tokenize` endpoints.
pub struct HttpBackend {
    base_url: String,
    auth_token: Option<String>,
    client: reqwest::blocking::Client,
}

impl HttpBackend {
    pub fn new(base_url: &str, auth_token: Option<String>) -> Result<Self> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(60))
            .build()
            .map_err(|e| Error::Transport(e.to_string()))?;
        Ok(HttpBackend {
            base_url: base_url.trim_end_matches('/').to_string(),
            auth_token,
            client,
        })
    }

    /// Read base URL and token from `SCORE_BACKEND_URL` / `SCORE_BACKEND_TOKEN`.
    pub fn from_env() -> Result<Self> {
        let url = std::env::var(URL_ENV)
            .map_err(|_| Error::Config(format!("{URL_ENV} is not set")))?;
        let token = std::env::var(TOKEN_ENV).ok();
        HttpBackend::new(&url, token)
    }

    pub fn base_url(&self) -> &str {
        &self.base_url
    }

    fn post<Req: serde::Serialize, Resp: serde::de::DeserializeOwned>(
        &self,
        path: &str,
        body: &Req,
    ) -> Result<Resp> {
        let url = format!("{}{path}", self.base_url);
        let mut request = self.client.post(&url).json(body);
        if let Some(token) = &self.auth_token {
            request = request.bearer_auth(token);
        }
        let response = request
            .send()
            .map_err(|e| Error::Transport(format!("{url}: {e}")))?;

        let status = response.status();
        if status.is_server_error() || status.as_u16() == 429 {
            return Err(Error::Transport(format!("{url}: status {status}")));
        }
        if !status.is_success() {
            return Err(Error::Protocol(format!("{url}: status {status}")));
        }
        response
            .json()
            .map_err(|e| Error::Protocol(format!("{url}: bad response body: {e}")))
    }
}

impl Backend for HttpBackend {
    fn score(&self, request: &ScoreRequest) -> Result<ScoreResponse> {
        self.post("/v1/score", request)
    }

    fn tokenize(&self, request: &TokenizeRequest) -> Result<TokenizeResponse> {
        self.post("/v1/tokenize", request)
    }
}
