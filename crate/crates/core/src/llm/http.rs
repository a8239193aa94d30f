use std::time::Duration;

use async_trait::async_trait;
use reqwest::StatusCode;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::{
    check_prompt, CompletionRequest, CompletionResponse, GatewayConfig, GatewayError, LlmGateway,
    TokenUsage,
};

const MAX_RETRY_AFTER: Duration = Duration::from_secs(30);

/// OpenAI-compatible chat completion client.
pub struct OpenAiGateway {
    client: reqwest::Client,
    config: GatewayConfig,
    endpoint: String,
}

impl std::fmt::Debug for OpenAiGateway {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OpenAiGateway")
            .field("endpoint", &self.endpoint)
            .field("model_id", &self.config.model_id)
            .finish_non_exhaustive()
    }
}

#[derive(Deserialize)]
struct ChatResponse {
    #[serde(default)]
    model: Option<String>,
    #[serde(default)]
    choices: Vec<Choice>,
    #[serde(default)]
    usage: Option<TokenUsage>,
}

#[derive(Deserialize)]
struct Choice {
    message: Message,
}

#[derive(Deserialize)]
struct Message {
    #[serde(default)]
    content: Option<String>,
}

impl OpenAiGateway {
    pub fn new(config: GatewayConfig) -> Result<Self, GatewayError> {
        config.validate()?;
        let client = reqwest::Client::builder()
            .timeout(config.request_timeout)
            .build()
            .map_err(|e| GatewayError::InvalidConfig(format!("http client: {e}")))?;
        let endpoint = format!("{}/chat/completions", config.base_url.as_str().trim_end_matches('/'));
        Ok(Self { client, config, endpoint })
    }

    pub fn config(&self) -> &GatewayConfig {
        &self.config
    }

    fn body(&self, req: &CompletionRequest) -> Value {
        let mut body = Map::new();
        for (k, v) in self.config.sampling.iter().chain(req.sampling.iter()) {
            body.insert(k.clone(), v.clone());
        }
        body.insert("model".into(), json!(self.config.model_id));
        body.insert("messages".into(), json!([{ "role": "user", "content": req.prompt }]));
        Value::Object(body)
    }

    async fn send_once(&self, body: &Value) -> Result<CompletionResponse, GatewayError> {
        let resp = self
            .client
            .post(&self.endpoint)
            .bearer_auth(self.config.api_key.expose())
            .json(body)
            .send()
            .await
            .map_err(map_transport)?;

        let status = resp.status();
        if status == StatusCode::UNAUTHORIZED || status == StatusCode::FORBIDDEN {
            return Err(GatewayError::Auth { status: status.as_u16() });
        }
        if status == StatusCode::TOO_MANY_REQUESTS {
            let retry_after = resp
                .headers()
                .get(reqwest::header::RETRY_AFTER)
                .and_then(|v| v.to_str().ok())
                .and_then(|v| v.trim().parse::<u64>().ok())
                .map(Duration::from_secs);
            return Err(GatewayError::RateLimited { retry_after });
        }
        if !status.is_success() {
            return Err(GatewayError::Http { status: status.as_u16() });
        }

        let bytes = resp.bytes().await.map_err(map_transport)?;
        let parsed: ChatResponse = serde_json::from_slice(&bytes)
            .map_err(|e| GatewayError::MalformedResponse(e.to_string()))?;
        let text = parsed
            .choices
            .into_iter()
            .next()
            .and_then(|c| c.message.content)
            .ok_or_else(|| GatewayError::MalformedResponse("no assistant message content".into()))?;
        Ok(CompletionResponse {
            text,
            model_id: parsed.model.unwrap_or_else(|| self.config.model_id.clone()),
            token_usage: parsed.usage,
        })
    }
}

fn map_transport(err: reqwest::Error) -> GatewayError {
    if err.is_timeout() {
        GatewayError::Timeout
    } else {
        // `without_url` keeps query strings (and anything secret in them) out of messages.
        GatewayError::Transport(err.without_url().to_string())
    }
}

#[async_trait]
impl LlmGateway for OpenAiGateway {
    async fn complete(&self, req: CompletionRequest) -> Result<CompletionResponse, GatewayError> {
        check_prompt(&req)?;
        let body = self.body(&req);
        let mut attempt = 0u32;
        loop {
            match self.send_once(&body).await {
                Ok(resp) => return Ok(resp),
                Err(err) if err.is_retryable() && attempt < self.config.max_transport_retries => {
                    let delay = match &err {
                        GatewayError::RateLimited { retry_after: Some(d) } => (*d).min(MAX_RETRY_AFTER),
                        _ => self.config.backoff_base.saturating_mul(1 << attempt.min(16)),
                    };
                    tracing::warn!(attempt, error = %err, ?delay, "retrying completion request");
                    tokio::time::sleep(delay).await;
                    attempt += 1;
                }
                Err(err) => return Err(err),
            }
        }
    }

    fn model_id(&self) -> &str {
        &self.config.model_id
    }
}
