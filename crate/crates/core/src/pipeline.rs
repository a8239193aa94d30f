//! Statement prompt, then solution prompt with bounded reprompting on
//! validation failure, then puzzle assembly.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use uuid::Uuid;

use crate::catalog::{Catalog, CatalogError};
use crate::llm::{CompletionRequest, GatewayError, LlmGateway};
use crate::prompt::{build_description_prompt, build_solution_prompt, clean_statement, PromptError};
use crate::puzzle::{build_blocks, PuzzleSpec};
use crate::request::GenerationRequest;
use crate::validate::{validate_solution, ValidationReport, DEFAULT_MAX_LINES};

pub const DEFAULT_MAX_ATTEMPTS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub max_lines: usize,
    pub max_attempts: usize,
    pub sampling: BTreeMap<String, serde_json::Value>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            max_lines: DEFAULT_MAX_LINES,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
            sampling: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExerciseId(String);

impl ExerciseId {
    pub fn fresh() -> Self {
        ExerciseId(Uuid::new_v4().to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for ExerciseId {
    fn from(s: &str) -> Self {
        ExerciseId(s.to_string())
    }
}

impl fmt::Display for ExerciseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptRecord {
    pub validation: ValidationReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationTrace {
    pub attempts: Vec<AttemptRecord>,
    pub model_id: String,
    pub succeeded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exercise {
    pub exercise_id: ExerciseId,
    pub statement: String,
    pub request: GenerationRequest,
    pub resolved_context: Option<String>,
    pub puzzle: PuzzleSpec,
    pub trace: GenerationTrace,
    pub created_at: DateTime<Utc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GatewayStage {
    Statement,
    Solution { attempt: usize },
}

impl fmt::Display for GatewayStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GatewayStage::Statement => f.write_str("statement request"),
            GatewayStage::Solution { attempt } => write!(f, "solution request {attempt}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum GenerationError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Prompt(#[from] PromptError),
    #[error("the model returned a blank problem statement")]
    BlankStatement { model_id: String },
    #[error("no valid solution after {} attempts", trace.attempts.len())]
    Exhausted { trace: GenerationTrace },
    #[error("gateway failed during {stage}: {source}")]
    Gateway {
        stage: GatewayStage,
        #[source]
        source: GatewayError,
    },
}

#[derive(Debug, Clone)]
pub struct Generator {
    catalog: Arc<Catalog>,
    config: PipelineConfig,
}

impl Generator {
    pub fn new(catalog: Arc<Catalog>, config: PipelineConfig) -> Self {
        Self { catalog, config }
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    fn completion(&self, prompt: String) -> CompletionRequest {
        CompletionRequest { prompt, sampling: self.config.sampling.clone() }
    }

    /// Resolves the context, asks for the statement once, then asks for a
    /// solution until one validates or `max_attempts` have failed.
    pub async fn generate(
        &self,
        req: &GenerationRequest,
        gateway: &dyn LlmGateway,
        seed: u64,
    ) -> Result<Exercise, GenerationError> {
        let resolved_context =
            self.catalog
                .resolve_context(req.context_mode, req.context_text.as_deref(), seed)?;
        let description_prompt = build_description_prompt(req, resolved_context.as_deref())?;

        let reply = gateway
            .complete(self.completion(description_prompt))
            .await
            .map_err(|source| GenerationError::Gateway { stage: GatewayStage::Statement, source })?;
        let mut model_id = reply.model_id;
        let statement = clean_statement(&reply.text);
        if statement.is_empty() {
            return Err(GenerationError::BlankStatement { model_id });
        }
        let solution_prompt = build_solution_prompt(&statement)?;

        let mut attempts = Vec::new();
        for attempt in 1..=self.config.max_attempts {
            let reply = gateway
                .complete(self.completion(solution_prompt.clone()))
                .await
                .map_err(|source| GenerationError::Gateway {
                    stage: GatewayStage::Solution { attempt },
                    source,
                })?;
            model_id = reply.model_id;

            match validate_solution(&reply.text, self.config.max_lines) {
                Ok(valid) => {
                    attempts.push(AttemptRecord { validation: valid.report });
                    let blocks = build_blocks(&valid.solution)
                        .expect("validated solutions have at least one line");
                    return Ok(Exercise {
                        exercise_id: ExerciseId::fresh(),
                        statement,
                        request: req.clone(),
                        resolved_context,
                        puzzle: PuzzleSpec::new(blocks, seed),
                        trace: GenerationTrace { attempts, model_id, succeeded: true },
                        created_at: Utc::now(),
                    });
                }
                Err(report) => {
                    tracing::info!(attempt, failures = ?report.failures, "solution rejected");
                    attempts.push(AttemptRecord { validation: report });
                }
            }
        }

        Err(GenerationError::Exhausted {
            trace: GenerationTrace { attempts, model_id, succeeded: false },
        })
    }
}
