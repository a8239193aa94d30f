use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::routing::{get, post};
use axum::{Json, Router};

use puzzlemaker_core::analytics::{read_log, tally, Dimension, FrequencyTable, Outcome, RequestLogRecord};
use puzzlemaker_core::api::{AttemptResponse, CatalogView, ClientExerciseView};
use puzzlemaker_core::puzzle::grade;
use puzzlemaker_core::{Attempt, ExerciseId, GenerationError, RequestInput};

use crate::error::ApiError;
use crate::AppState;

type Shared = State<Arc<AppState>>;

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/api/catalog", get(catalog))
        .route("/api/exercises", post(create_exercise))
        .route("/api/exercises/{id}/attempts", post(submit_attempt))
        .route("/api/analytics/contexts", get(analytics_contexts))
        .route("/api/analytics/concepts", get(analytics_concepts))
        .with_state(state)
}

async fn healthz() -> &'static str {
    "ok"
}

async fn catalog(State(state): Shared) -> Json<CatalogView> {
    Json(CatalogView::from(state.catalog()))
}

fn append_log(state: &AppState, record: &RequestLogRecord) -> Result<(), ApiError> {
    let mut log = state.log.lock().unwrap_or_else(|e| e.into_inner());
    log.append(record).map_err(|e| {
        tracing::error!(error = %e, "cannot append request log");
        ApiError::internal("cannot write request log")
    })
}

async fn create_exercise(
    State(state): Shared,
    body: Result<Json<RequestInput>, JsonRejection>,
) -> Result<Json<ClientExerciseView>, ApiError> {
    let input = match body {
        Ok(Json(input)) => input,
        Err(rejection) => {
            append_log(&state, &RequestLogRecord::rejected(&RequestInput::default()))?;
            return Err(ApiError::invalid_body(rejection.body_text()));
        }
    };
    let req = match state.catalog().validate_request(&input) {
        Ok(req) => req,
        Err(e) => {
            append_log(&state, &RequestLogRecord::rejected(&input))?;
            return Err(e.into());
        }
    };

    let seed: u64 = rand::random();
    let gateway = state.gateways.session();
    let result = state.generator.generate(&req, gateway.as_ref(), seed).await;

    let outcome = match &result {
        Ok(_) => Outcome::Generated,
        Err(GenerationError::Exhausted { .. }) => Outcome::Exhausted,
        Err(GenerationError::Catalog(_)) => Outcome::Rejected,
        Err(_) => Outcome::GatewayFailed,
    };
    // Resolution is deterministic in the seed.
    let resolved = match &result {
        Ok(ex) => ex.resolved_context.clone(),
        Err(_) => state
            .catalog()
            .resolve_context(req.context_mode, req.context_text.as_deref(), seed)
            .ok()
            .flatten(),
    };
    let record = RequestLogRecord::for_request(&req, resolved, outcome);

    match result {
        Ok(exercise) => {
            let stored = state.store.insert(exercise);
            append_log(&state, &record)?;
            let stored = stored.map_err(|e| {
                tracing::error!(error = %e, "cannot persist exercise");
                ApiError::internal("cannot persist exercise")
            })?;
            Ok(Json(ClientExerciseView::from(stored.as_ref())))
        }
        Err(e) => {
            tracing::warn!(error = %e, outcome = ?outcome, "generation failed");
            append_log(&state, &record)?;
            Err(ApiError::from(&e))
        }
    }
}

async fn submit_attempt(
    State(state): Shared,
    Path(id): Path<String>,
    body: Result<Json<Attempt>, JsonRejection>,
) -> Result<Json<AttemptResponse>, ApiError> {
    let exercise = state.store.get(&ExerciseId::from(id.as_str())).ok_or_else(|| {
        ApiError::new(axum::http::StatusCode::NOT_FOUND, "UnknownExercise", format!("no exercise {id}"))
    })?;
    let Json(attempt) = body.map_err(|r| ApiError::invalid_body(r.body_text()))?;
    let report = grade(&exercise.puzzle, &attempt)?;
    Ok(Json(AttemptResponse::new(&report)))
}

async fn analytics(state: Arc<AppState>, dimension: Dimension) -> Result<Json<FrequencyTable>, ApiError> {
    let dir = state.log_dir.clone();
    let contents = tokio::task::spawn_blocking(move || read_log(&dir))
        .await
        .map_err(|e| ApiError::internal(e.to_string()))?
        .map_err(|e| {
            tracing::error!(error = %e, "cannot read request log");
            ApiError::internal("cannot read request log")
        })?;
    if contents.malformed > 0 {
        tracing::warn!(malformed = contents.malformed, "skipped malformed log lines");
    }
    Ok(Json(tally(&contents.records, dimension)))
}

async fn analytics_contexts(State(state): Shared) -> Result<Json<FrequencyTable>, ApiError> {
    analytics(state, Dimension::Contexts).await
}

async fn analytics_concepts(State(state): Shared) -> Result<Json<FrequencyTable>, ApiError> {
    analytics(state, Dimension::Concepts).await
}
