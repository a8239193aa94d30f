use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use serde::Deserialize;
use thiserror::Error;

use puzzlemaker_core::analytics::DEFAULT_ROTATE_BYTES;
use puzzlemaker_core::llm::{
    ApiKey, GatewayConfig, GatewayError, GatewayScript, GatewaySource, OpenAiGateway, ScriptSource,
    API_KEY_ENV, DEFAULT_BASE_URL, DEFAULT_MODEL_ID,
};
use puzzlemaker_core::pipeline::{PipelineConfig, DEFAULT_MAX_ATTEMPTS};
use puzzlemaker_core::validate::DEFAULT_MAX_LINES;
use puzzlemaker_core::{Catalog, CatalogError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{API_KEY_ENV} is not set and no gateway script is configured")]
    MissingApiKey,
    #[error(transparent)]
    Gateway(#[from] GatewayError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// Service settings, read from a TOML file. Relative paths resolve against
/// the config file's directory.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    pub listen_addr: SocketAddr,
    pub base_url: String,
    pub model_id: String,
    pub surprise_topics_path: Option<PathBuf>,
    pub storage_dir: PathBuf,
    pub max_lines: usize,
    pub max_generation_attempts: usize,
    pub request_timeout_secs: u64,
    pub max_transport_retries: u32,
    pub log_rotate_bytes: u64,
    /// Replaces the HTTP gateway with a replayed script (offline mode).
    pub gateway_script: Option<PathBuf>,
    /// Extra request fields such as `temperature`; provider defaults otherwise.
    pub sampling: BTreeMap<String, serde_json::Value>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            listen_addr: SocketAddr::from(([127, 0, 0, 1], 8080)),
            base_url: DEFAULT_BASE_URL.to_string(),
            model_id: DEFAULT_MODEL_ID.to_string(),
            surprise_topics_path: None,
            storage_dir: PathBuf::from("data"),
            max_lines: DEFAULT_MAX_LINES,
            max_generation_attempts: DEFAULT_MAX_ATTEMPTS,
            request_timeout_secs: 30,
            max_transport_retries: 2,
            log_rotate_bytes: DEFAULT_ROTATE_BYTES,
            gateway_script: None,
            sampling: BTreeMap::new(),
        }
    }
}

impl ServiceConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
        let mut cfg: ServiceConfig = toml::from_str(&text).map_err(|e| ConfigError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        resolve(&mut cfg.storage_dir);
        if let Some(p) = cfg.surprise_topics_path.as_mut() {
            resolve(p);
        }
        if let Some(p) = cfg.gateway_script.as_mut() {
            resolve(p);
        }
        Ok(cfg)
    }

    pub fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            max_lines: self.max_lines,
            max_attempts: self.max_generation_attempts,
            sampling: self.sampling.clone(),
        }
    }

    pub fn catalog(&self) -> Result<Catalog, ConfigError> {
        Ok(match &self.surprise_topics_path {
            Some(path) => Catalog::from_topics_file(path)?,
            None => Catalog::default(),
        })
    }

    pub fn gateway_config(&self, api_key: ApiKey) -> Result<GatewayConfig, ConfigError> {
        let mut cfg = GatewayConfig::new(&self.base_url, api_key)?;
        cfg.model_id = self.model_id.clone();
        cfg.request_timeout = Duration::from_secs(self.request_timeout_secs);
        cfg.max_transport_retries = self.max_transport_retries;
        cfg.validate()?;
        Ok(cfg)
    }

    /// The configured script if any, otherwise the HTTP gateway keyed from
    /// the environment.
    pub fn gateway_source(&self) -> Result<Arc<dyn GatewaySource>, ConfigError> {
        if let Some(path) = &self.gateway_script {
            return Ok(Arc::new(ScriptSource::new(GatewayScript::load(path)?)));
        }
        let key = ApiKey::from_env().ok_or(ConfigError::MissingApiKey)?;
        let gateway = OpenAiGateway::new(self.gateway_config(key)?)?;
        Ok(Arc::new(Arc::new(gateway)))
    }
}
