//! JSON bodies exchanged between the HTTP service and its clients.
//!
//! Client-facing exercise views never carry solution order or indentation.

use serde::{Deserialize, Serialize};

use crate::catalog::Catalog;
use crate::pipeline::{Exercise, ExerciseId};
use crate::puzzle::{BlockId, Diagnostic, GradeReport, GradeStatus};
use crate::request::ContextMode;

pub use crate::analytics::{FrequencyRow, FrequencyTable};
pub use crate::catalog::RequestInput as CreateExerciseRequest;
pub use crate::puzzle::Attempt as AttemptRequest;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogView {
    pub contexts: Vec<String>,
    pub concepts: Vec<String>,
    pub modes: Vec<ContextMode>,
}

impl From<&Catalog> for CatalogView {
    fn from(c: &Catalog) -> Self {
        Self {
            contexts: c.contexts().to_vec(),
            concepts: c.concepts().to_vec(),
            modes: ContextMode::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClientBlock {
    pub block_id: BlockId,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClientExerciseView {
    pub exercise_id: ExerciseId,
    pub statement: String,
    /// Presented (shuffled) order, text already dedented.
    pub blocks: Vec<ClientBlock>,
}

impl From<&Exercise> for ClientExerciseView {
    fn from(ex: &Exercise) -> Self {
        let blocks = ex
            .puzzle
            .presented_order
            .iter()
            .filter_map(|id| ex.puzzle.block(id))
            .map(|b| ClientBlock { block_id: b.block_id.clone(), text: b.text.clone() })
            .collect();
        Self {
            exercise_id: ex.exercise_id.clone(),
            statement: ex.statement.clone(),
            blocks,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptResponse {
    pub status: GradeStatus,
    pub messages: Vec<String>,
    pub diagnostics: Vec<Diagnostic>,
}

impl AttemptResponse {
    pub fn new(report: &GradeReport) -> Self {
        Self {
            status: report.status,
            messages: crate::puzzle::render_feedback(report),
            diagnostics: report.diagnostics.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiErrorDetail {
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiErrorBody {
    pub error: ApiErrorDetail,
}
