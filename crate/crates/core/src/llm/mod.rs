//! Chat-completion boundary used by the generation pipeline.
//!
//! [`OpenAiGateway`] speaks the OpenAI-compatible `/chat/completions` wire
//! protocol; [`ScriptedGateway`] replays canned responses for offline tests
//! and demo deployments.

mod http;
mod scripted;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use std::time::Duration;

use async_trait::async_trait;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use http::OpenAiGateway;
pub use scripted::{GatewayScript, ScriptSource, ScriptTemplate, ScriptedGateway, SCRIPTED_MODEL_ID};

pub const DEFAULT_MODEL_ID: &str = "gpt-3.5-turbo";
pub const DEFAULT_BASE_URL: &str = "https://api.openai.com/v1";
pub const API_KEY_ENV: &str = "PUZZLEMAKER_API_KEY";

/// Bearer credential. Never printed: `Debug` and `Display` are redacted.
#[derive(Clone, PartialEq, Eq)]
pub struct ApiKey(String);

impl ApiKey {
    pub fn new(key: impl Into<String>) -> Self {
        ApiKey(key.into())
    }

    pub fn from_env() -> Option<Self> {
        std::env::var(API_KEY_ENV)
            .ok()
            .filter(|k| !k.trim().is_empty())
            .map(ApiKey)
    }

    pub fn expose(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for ApiKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ApiKey(***)")
    }
}

impl fmt::Display for ApiKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("***")
    }
}

#[derive(Debug, Clone)]
pub struct GatewayConfig {
    pub base_url: url::Url,
    pub api_key: ApiKey,
    pub model_id: String,
    pub request_timeout: Duration,
    pub max_transport_retries: u32,
    /// First backoff delay; doubles on every further transport retry.
    pub backoff_base: Duration,
    /// Extra fields merged into the request body (temperature, max_tokens, ...).
    pub sampling: BTreeMap<String, serde_json::Value>,
}

impl GatewayConfig {
    pub fn new(base_url: &str, api_key: ApiKey) -> Result<Self, GatewayError> {
        let base_url = url::Url::parse(base_url)
            .map_err(|e| GatewayError::InvalidConfig(format!("base_url: {e}")))?;
        let cfg = Self {
            base_url,
            api_key,
            model_id: DEFAULT_MODEL_ID.to_string(),
            request_timeout: Duration::from_secs(30),
            max_transport_retries: 2,
            backoff_base: Duration::from_millis(500),
            sampling: BTreeMap::new(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), GatewayError> {
        if !matches!(self.base_url.scheme(), "http" | "https") || self.base_url.cannot_be_a_base() {
            return Err(GatewayError::InvalidConfig(format!(
                "base_url must be an absolute http(s) URL, got {}",
                self.base_url
            )));
        }
        if self.model_id.trim().is_empty() {
            return Err(GatewayError::InvalidConfig("model_id is blank".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CompletionRequest {
    pub prompt: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sampling: BTreeMap<String, serde_json::Value>,
}

impl CompletionRequest {
    pub fn new(prompt: impl Into<String>) -> Self {
        Self { prompt: prompt.into(), sampling: BTreeMap::new() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenUsage {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
    pub total_tokens: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionResponse {
    pub text: String,
    pub model_id: String,
    pub token_usage: Option<TokenUsage>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GatewayError {
    #[error("authentication rejected (HTTP {status})")]
    Auth { status: u16 },
    #[error("rate limited{}", retry_after.map(|d| format!(", retry after {}s", d.as_secs())).unwrap_or_default())]
    RateLimited { retry_after: Option<Duration> },
    #[error("request timed out")]
    Timeout,
    #[error("malformed completion response: {0}")]
    MalformedResponse(String),
    #[error("upstream returned HTTP {status}")]
    Http { status: u16 },
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("invalid completion request: {0}")]
    InvalidRequest(String),
    #[error("invalid gateway configuration: {0}")]
    InvalidConfig(String),
    #[error("scripted gateway exhausted after {calls} responses")]
    ScriptExhausted { calls: usize },
}

impl GatewayError {
    /// Whether a transport-level retry may help.
    pub fn is_retryable(&self) -> bool {
        match self {
            Self::RateLimited { .. } | Self::Timeout | Self::Transport(_) => true,
            Self::Http { status } => *status >= 500,
            _ => false,
        }
    }
}

#[async_trait]
pub trait LlmGateway: Send + Sync {
    async fn complete(&self, req: CompletionRequest) -> Result<CompletionResponse, GatewayError>;

    fn model_id(&self) -> &str;
}

/// Hands out the gateway a single generation talks to. Real clients share one
/// instance; script templates hand every generation a fresh replay.
pub trait GatewaySource: Send + Sync {
    fn session(&self) -> Arc<dyn LlmGateway>;
}

impl<G: LlmGateway + 'static> GatewaySource for Arc<G> {
    fn session(&self) -> Arc<dyn LlmGateway> {
        self.clone()
    }
}

pub(crate) fn check_prompt(req: &CompletionRequest) -> Result<(), GatewayError> {
    if req.prompt.trim().is_empty() {
        return Err(GatewayError::InvalidRequest("prompt is empty".into()));
    }
    Ok(())
}
