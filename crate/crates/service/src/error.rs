use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;

use puzzlemaker_core::api::{ApiErrorBody, ApiErrorDetail};
use puzzlemaker_core::puzzle::PuzzleError;
use puzzlemaker_core::{CatalogError, GenerationError};

/// An error response: status plus a `{"error": {code, message}}` body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self { status, code, message: message.into() }
    }

    pub fn invalid_body(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "InvalidBody", message)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", message)
    }
}

impl From<CatalogError> for ApiError {
    fn from(e: CatalogError) -> Self {
        Self::new(StatusCode::BAD_REQUEST, e.code(), e.to_string())
    }
}

impl From<PuzzleError> for ApiError {
    fn from(e: PuzzleError) -> Self {
        let code = match e {
            PuzzleError::EmptySolution => "EmptySolution",
            PuzzleError::UnknownBlock(_) => "UnknownBlock",
            PuzzleError::DuplicatePlacement(_) => "DuplicatePlacement",
        };
        Self::new(StatusCode::BAD_REQUEST, code, e.to_string())
    }
}

impl From<&GenerationError> for ApiError {
    fn from(e: &GenerationError) -> Self {
        match e {
            GenerationError::Catalog(c) => c.clone().into(),
            GenerationError::Prompt(p) => Self::internal(p.to_string()),
            GenerationError::BlankStatement { .. } | GenerationError::Gateway { .. } => {
                Self::new(StatusCode::BAD_GATEWAY, "GatewayFailed", e.to_string())
            }
            GenerationError::Exhausted { .. } => Self::new(
                StatusCode::SERVICE_UNAVAILABLE,
                "GenerationExhausted",
                format!("{e}; please try again"),
            ),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ApiErrorBody {
            error: ApiErrorDetail { code: self.code.to_string(), message: self.message },
        };
        (self.status, Json(body)).into_response()
    }
}
