use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use async_trait::async_trait;
use serde::Deserialize;

use super::{
    check_prompt, CompletionRequest, CompletionResponse, GatewayError, GatewaySource, LlmGateway,
};

pub const SCRIPTED_MODEL_ID: &str = "scripted";

#[derive(Debug, Default)]
struct ScriptState {
    next: usize,
    prompts: Vec<String>,
}

/// Replays canned responses in order and records every prompt it receives.
#[derive(Debug)]
pub struct ScriptedGateway {
    responses: Vec<String>,
    model_id: String,
    state: Mutex<ScriptState>,
}

impl ScriptedGateway {
    pub fn new<S: Into<String>>(responses: impl IntoIterator<Item = S>) -> Result<Self, GatewayError> {
        let responses: Vec<String> = responses.into_iter().map(Into::into).collect();
        if responses.is_empty() {
            return Err(GatewayError::InvalidConfig("script has no responses".into()));
        }
        Ok(Self {
            responses,
            model_id: SCRIPTED_MODEL_ID.to_string(),
            state: Mutex::default(),
        })
    }

    pub fn with_model_id(mut self, model_id: impl Into<String>) -> Self {
        self.model_id = model_id.into();
        self
    }

    pub fn prompts(&self) -> Vec<String> {
        self.state.lock().unwrap_or_else(|e| e.into_inner()).prompts.clone()
    }

    pub fn calls(&self) -> usize {
        self.state.lock().unwrap_or_else(|e| e.into_inner()).prompts.len()
    }
}

#[async_trait]
impl LlmGateway for ScriptedGateway {
    async fn complete(&self, req: CompletionRequest) -> Result<CompletionResponse, GatewayError> {
        check_prompt(&req)?;
        let mut state = self.state.lock().unwrap_or_else(|e| e.into_inner());
        state.prompts.push(req.prompt);
        let Some(text) = self.responses.get(state.next) else {
            return Err(GatewayError::ScriptExhausted { calls: state.next });
        };
        state.next += 1;
        Ok(CompletionResponse {
            text: text.clone(),
            model_id: self.model_id.clone(),
            token_usage: None,
        })
    }

    fn model_id(&self) -> &str {
        &self.model_id
    }
}

/// A script that starts from the beginning for every session.
#[derive(Debug, Clone)]
pub struct ScriptTemplate {
    responses: Vec<String>,
}

impl ScriptTemplate {
    pub fn new(responses: Vec<String>) -> Result<Self, GatewayError> {
        if responses.is_empty() {
            return Err(GatewayError::InvalidConfig("script has no responses".into()));
        }
        Ok(Self { responses })
    }

    pub fn gateway(&self) -> ScriptedGateway {
        ScriptedGateway::new(self.responses.clone()).expect("template is non-empty")
    }
}

impl GatewaySource for ScriptTemplate {
    fn session(&self) -> Arc<dyn LlmGateway> {
        Arc::new(self.gateway())
    }
}

/// On-disk gateway script.
///
/// Either a JSON array of responses, replayed from the start for every
/// generation, or `{"items": [[...], [...]]}` where generation `i` replays
/// `items[i % items.len()]`.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum GatewayScript {
    Replay(Vec<String>),
    PerItem { items: Vec<Vec<String>> },
}

impl GatewayScript {
    pub fn load(path: &Path) -> Result<Self, GatewayError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GatewayError::InvalidConfig(format!("{}: {e}", path.display())))?;
        let script: GatewayScript = serde_json::from_str(&text)
            .map_err(|e| GatewayError::InvalidConfig(format!("{}: {e}", path.display())))?;
        let empty = match &script {
            GatewayScript::Replay(r) => r.is_empty(),
            GatewayScript::PerItem { items } => items.is_empty() || items.iter().any(Vec::is_empty),
        };
        if empty {
            return Err(GatewayError::InvalidConfig(format!("{}: empty script", path.display())));
        }
        Ok(script)
    }

    pub fn template_for(&self, item: usize) -> ScriptTemplate {
        let responses = match self {
            GatewayScript::Replay(r) => r.clone(),
            GatewayScript::PerItem { items } => items[item % items.len()].clone(),
        };
        ScriptTemplate { responses }
    }
}

/// Serves a [`GatewayScript`], one fresh replay per session in arrival order.
#[derive(Debug)]
pub struct ScriptSource {
    script: GatewayScript,
    sessions: AtomicUsize,
}

impl ScriptSource {
    pub fn new(script: GatewayScript) -> Self {
        Self { script, sessions: AtomicUsize::new(0) }
    }
}

impl GatewaySource for ScriptSource {
    fn session(&self) -> Arc<dyn LlmGateway> {
        let n = self.sessions.fetch_add(1, Ordering::SeqCst);
        Arc::new(self.script.template_for(n).gateway())
    }
}
