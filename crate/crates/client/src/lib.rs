//! Typed HTTP client for the puzzlemaker service.

use std::time::Duration;

use reqwest::{Method, StatusCode};
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;
use url::Url;

use puzzlemaker_core::analytics::Dimension;
use puzzlemaker_core::api::{ApiErrorBody, AttemptResponse, CatalogView, ClientExerciseView, FrequencyTable};
use puzzlemaker_core::{Attempt, ExerciseId, RequestInput};

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("invalid service URL: {0}")]
    Url(#[from] url::ParseError),
    #[error("request failed: {0}")]
    Transport(#[from] reqwest::Error),
    #[error("service returned {status}: {} ({})", body.error.message, body.error.code)]
    Api { status: StatusCode, body: ApiErrorBody },
    #[error("service returned {status} with an unexpected body")]
    Unexpected { status: StatusCode },
}

impl ClientError {
    /// The machine-readable error code, when the service sent one.
    pub fn code(&self) -> Option<&str> {
        match self {
            ClientError::Api { body, .. } => Some(&body.error.code),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PuzzleClient {
    base: Url,
    http: reqwest::Client,
}

impl PuzzleClient {
    pub fn new(base_url: &str) -> Result<Self, ClientError> {
        Self::with_timeout(base_url, Duration::from_secs(120))
    }

    pub fn with_timeout(base_url: &str, timeout: Duration) -> Result<Self, ClientError> {
        let mut base = Url::parse(base_url)?;
        if !base.path().ends_with('/') {
            base.set_path(&format!("{}/", base.path()));
        }
        let http = reqwest::Client::builder().timeout(timeout).build()?;
        Ok(Self { base, http })
    }

    pub fn base_url(&self) -> &Url {
        &self.base
    }

    async fn call<B: Serialize, T: DeserializeOwned>(
        &self,
        method: Method,
        path: &str,
        body: Option<&B>,
    ) -> Result<T, ClientError> {
        let mut req = self.http.request(method, self.base.join(path)?);
        if let Some(body) = body {
            req = req.json(body);
        }
        let resp = req.send().await?;
        let status = resp.status();
        let bytes = resp.bytes().await?;
        if status.is_success() {
            return serde_json::from_slice(&bytes).map_err(|_| ClientError::Unexpected { status });
        }
        match serde_json::from_slice::<ApiErrorBody>(&bytes) {
            Ok(body) => Err(ClientError::Api { status, body }),
            Err(_) => Err(ClientError::Unexpected { status }),
        }
    }

    pub async fn health(&self) -> Result<(), ClientError> {
        let resp = self.http.get(self.base.join("healthz")?).send().await?;
        match resp.status() {
            s if s.is_success() => Ok(()),
            status => Err(ClientError::Unexpected { status }),
        }
    }

    pub async fn catalog(&self) -> Result<CatalogView, ClientError> {
        self.call::<(), _>(Method::GET, "api/catalog", None).await
    }

    pub async fn create_exercise(&self, input: &RequestInput) -> Result<ClientExerciseView, ClientError> {
        self.call(Method::POST, "api/exercises", Some(input)).await
    }

    pub async fn submit_attempt(&self, id: &ExerciseId, attempt: &Attempt) -> Result<AttemptResponse, ClientError> {
        self.call(Method::POST, &format!("api/exercises/{id}/attempts"), Some(attempt)).await
    }

    pub async fn analytics(&self, dimension: Dimension) -> Result<FrequencyTable, ClientError> {
        let path = match dimension {
            Dimension::Contexts => "api/analytics/contexts",
            Dimension::Concepts => "api/analytics/concepts",
        };
        self.call::<(), _>(Method::GET, path, None).await
    }
}
