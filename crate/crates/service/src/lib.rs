//! HTTP/JSON service for generating, grading and reporting on Parsons
//! problems.

pub mod config;
pub mod error;
pub mod routes;
pub mod store;

use std::future::Future;
use std::io;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use tokio::net::TcpListener;

use puzzlemaker_core::analytics::LogWriter;
use puzzlemaker_core::llm::GatewaySource;
use puzzlemaker_core::{Catalog, Generator};

pub use config::{ConfigError, ServiceConfig};
pub use error::ApiError;
pub use routes::router;
pub use store::ExerciseStore;

/// Shared state behind every handler.
pub struct AppState {
    pub generator: Generator,
    pub gateways: Arc<dyn GatewaySource>,
    pub store: ExerciseStore,
    pub log: Mutex<LogWriter>,
    pub log_dir: PathBuf,
}

impl AppState {
    /// Opens the exercise store and request log under `storage_dir`.
    pub fn open(
        config: &ServiceConfig,
        catalog: Catalog,
        gateways: Arc<dyn GatewaySource>,
    ) -> io::Result<Self> {
        let log_dir = config.storage_dir.join("log");
        Ok(Self {
            generator: Generator::new(Arc::new(catalog), config.pipeline()),
            gateways,
            store: ExerciseStore::open(&config.storage_dir)?,
            log: Mutex::new(LogWriter::open(&log_dir, config.log_rotate_bytes)?),
            log_dir,
        })
    }

    pub fn catalog(&self) -> &Catalog {
        self.generator.catalog()
    }
}

/// Serves until `shutdown` resolves, then drains in-flight requests.
pub async fn serve(
    listener: TcpListener,
    state: Arc<AppState>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> io::Result<()> {
    axum::serve(listener, router(state)).with_graceful_shutdown(shutdown).await
}

/// Resolves on ctrl-c or SIGTERM.
pub async fn shutdown_signal() {
    let ctrl_c = async {
        if let Err(e) = tokio::signal::ctrl_c().await {
            tracing::error!(error = %e, "cannot listen for ctrl-c");
            std::future::pending::<()>().await;
        }
    };
    #[cfg(unix)]
    let terminate = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(e) => {
                tracing::error!(error = %e, "cannot listen for SIGTERM");
                std::future::pending::<()>().await;
            }
        }
    };
    #[cfg(not(unix))]
    let terminate = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = terminate => {},
    }
    tracing::info!("shutdown requested; draining");
}
