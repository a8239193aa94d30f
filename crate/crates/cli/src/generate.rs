use std::sync::Arc;

use tokio::sync::Semaphore;
use tokio::task::JoinSet;

use puzzlemaker_core::bank::{BankFailure, ExerciseBankFile};
use puzzlemaker_core::llm::{ApiKey, GatewayScript, LlmGateway, OpenAiGateway};
use puzzlemaker_core::rng::derive_seed;
use puzzlemaker_core::{Catalog, Exercise, GenerationRequest, Generator};
use puzzlemaker_service::{ConfigError, ServiceConfig};

use crate::args::request_input;
use crate::CliError;

/// Where batch items get their gateway. Scripts are keyed by item index so
/// results do not depend on `--jobs`.
pub enum GatewayPlan {
    Script(GatewayScript),
    Shared(Arc<dyn LlmGateway>),
}

impl GatewayPlan {
    pub fn from_config(config: &ServiceConfig) -> Result<Self, CliError> {
        if let Some(path) = &config.gateway_script {
            return GatewayScript::load(path).map(Self::Script).map_err(CliError::usage);
        }
        let key = ApiKey::from_env().ok_or_else(|| CliError::usage(ConfigError::MissingApiKey))?;
        let cfg = config.gateway_config(key).map_err(CliError::usage)?;
        let gateway = OpenAiGateway::new(cfg).map_err(CliError::usage)?;
        Ok(Self::Shared(Arc::new(gateway)))
    }

    pub fn gateway_for(&self, item: usize) -> Arc<dyn LlmGateway> {
        match self {
            GatewayPlan::Script(script) => Arc::new(script.template_for(item).gateway()),
            GatewayPlan::Shared(gw) => gw.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BatchItem {
    pub item: usize,
    pub context: String,
    pub request: GenerationRequest,
    pub seed: u64,
}

/// Expands contexts x concept sets x count, context-major. Every pair is
/// validated up front.
pub fn plan_batch(
    catalog: &Catalog,
    contexts: &[String],
    concept_sets: &[String],
    count: usize,
    seed: u64,
) -> Result<Vec<BatchItem>, CliError> {
    if contexts.is_empty() || concept_sets.is_empty() {
        return Err(CliError::usage("at least one --contexts and one --concepts value is required"));
    }
    let mut items = Vec::new();
    for context in contexts {
        for set in concept_sets {
            let request = catalog
                .validate_request(&request_input(context, set))
                .map_err(|e| CliError::Usage(format!("{context:?} / {set:?}: {e}")))?;
            for _ in 0..count {
                let item = items.len();
                items.push(BatchItem {
                    item,
                    context: context.clone(),
                    request: request.clone(),
                    seed: derive_seed(seed, item as u64),
                });
            }
        }
    }
    Ok(items)
}

/// Runs every item with at most `jobs` in flight. Failures are recorded and
/// do not stop the batch; output order follows item order.
pub async fn run_batch(
    generator: Arc<Generator>,
    gateways: Arc<GatewayPlan>,
    items: Vec<BatchItem>,
    jobs: usize,
) -> ExerciseBankFile {
    let permits = Arc::new(Semaphore::new(jobs.max(1)));
    let mut set = JoinSet::new();
    for item in items {
        let (generator, gateways, permits) = (generator.clone(), gateways.clone(), permits.clone());
        set.spawn(async move {
            let _permit = permits.acquire_owned().await.expect("semaphore stays open");
            let gateway = gateways.gateway_for(item.item);
            let result = generator.generate(&item.request, gateway.as_ref(), item.seed).await;
            (item, result)
        });
    }
    let mut results: Vec<(BatchItem, Result<Exercise, String>)> = Vec::new();
    while let Some(joined) = set.join_next().await {
        let (item, result) = joined.expect("generation task panicked");
        results.push((item, result.map_err(|e| e.to_string())));
    }
    results.sort_by_key(|(item, _)| item.item);

    let mut bank = ExerciseBankFile::default();
    for (item, result) in results {
        match result {
            Ok(exercise) => bank.exercises.push(exercise),
            Err(error) => {
                tracing::warn!(item = item.item, context = %item.context, %error, "item failed");
                bank.failures.push(BankFailure {
                    item: item.item,
                    context: item.context,
                    concepts: item.request.concepts,
                    error,
                });
            }
        }
    }
    bank
}
