use std::path::Path;
use std::sync::Arc;

use puzzlemaker_core::analytics::{read_log, Outcome};
use puzzlemaker_core::api::{ApiErrorBody, AttemptResponse, ClientExerciseView};
use puzzlemaker_core::llm::{GatewayScript, ScriptSource};
use puzzlemaker_core::puzzle::{Attempt, GradeStatus, Placement};
use puzzlemaker_core::Catalog;
use puzzlemaker_service::{serve, AppState, ServiceConfig};
use serde_json::{json, Value};
use tokio::net::TcpListener;
use tokio::sync::oneshot;

const STATEMENT: &str = "Write a function count_legs(animals) that returns the total number of legs.";
const CLEAN: &str = "def count_legs(animals):\n    total = 0\n    for legs in animals.values():\n        total += legs\n    return total";
const BANNED: &str = "def f(xs):\n    while True:\n        break\n    return xs";

struct Server {
    base: String,
    state: Arc<AppState>,
    stop: Option<oneshot::Sender<()>>,
    task: tokio::task::JoinHandle<std::io::Result<()>>,
    http: reqwest::Client,
}

impl Server {
    async fn start(dir: &Path, script: GatewayScript) -> Self {
        Self::start_with(dir, script, Catalog::default()).await
    }

    async fn start_with(dir: &Path, script: GatewayScript, catalog: Catalog) -> Self {
        let config = ServiceConfig { storage_dir: dir.to_path_buf(), ..ServiceConfig::default() };
        let state = Arc::new(AppState::open(&config, catalog, Arc::new(ScriptSource::new(script))).unwrap());
        let listener = TcpListener::bind("127.0.0.1:0").await.unwrap();
        let base = format!("http://{}", listener.local_addr().unwrap());
        let (tx, rx) = oneshot::channel();
        let task = tokio::spawn(serve(listener, state.clone(), async {
            let _ = rx.await;
        }));
        Self { base, state, stop: Some(tx), task, http: reqwest::Client::new() }
    }

    async fn post(&self, path: &str, body: Value) -> (u16, Value) {
        let resp = self.http.post(format!("{}{path}", self.base)).json(&body).send().await.unwrap();
        (resp.status().as_u16(), resp.json().await.unwrap())
    }

    async fn get(&self, path: &str) -> (u16, Value) {
        let resp = self.http.get(format!("{}{path}", self.base)).send().await.unwrap();
        (resp.status().as_u16(), resp.json().await.unwrap_or(Value::Null))
    }

    fn outcomes(&self) -> Vec<Outcome> {
        read_log(&self.state.log_dir).unwrap().records.iter().map(|r| r.outcome).collect()
    }

    async fn stop(mut self) {
        self.stop.take().unwrap().send(()).unwrap();
        self.task.await.unwrap().unwrap();
    }
}

fn clean_script() -> GatewayScript {
    GatewayScript::Replay(vec![STATEMENT.into(), CLEAN.into()])
}

fn animals_loops() -> Value {
    json!({"context_mode": "named", "context_text": "Animals", "concepts": ["Loops"]})
}

#[tokio::test]
async fn health_and_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let srv = Server::start(dir.path(), clean_script()).await;
    let resp = srv.http.get(format!("{}/healthz", srv.base)).send().await.unwrap();
    assert_eq!(resp.status(), 200);
    let (status, catalog) = srv.get("/api/catalog").await;
    assert_eq!(status, 200);
    assert_eq!(catalog["contexts"].as_array().unwrap().len(), 20);
    assert_eq!(catalog["concepts"].as_array().unwrap().len(), 8);
    assert_eq!(catalog["modes"], json!(["named", "custom", "none", "surprise"]));
    assert_eq!(srv.get("/api/catalog").await.1, catalog);
    srv.stop().await;
}

#[tokio::test]
async fn create_hides_solution_and_logs_once() {
    let dir = tempfile::tempdir().unwrap();
    let srv = Server::start(dir.path(), clean_script()).await;
    let (status, body) = srv.post("/api/exercises", animals_loops()).await;
    assert_eq!(status, 200, "{body}");
    let view: ClientExerciseView = serde_json::from_value(body.clone()).unwrap();
    assert_eq!(view.statement, STATEMENT);
    assert_eq!(view.blocks.len(), 5);
    for block in body["blocks"].as_array().unwrap() {
        let keys: Vec<&String> = block.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["block_id", "text"]);
        assert!(!block["text"].as_str().unwrap().starts_with(' '));
    }
    assert_eq!(srv.outcomes(), [Outcome::Generated]);
    assert_eq!(srv.state.store.len(), 1);
    srv.stop().await;
}

#[tokio::test]
async fn grading_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let srv = Server::start(dir.path(), clean_script()).await;
    let (_, body) = srv.post("/api/exercises", animals_loops()).await;
    let view: ClientExerciseView = serde_json::from_value(body).unwrap();
    let exercise = srv.state.store.get(&view.exercise_id).unwrap();
    let path = format!("/api/exercises/{}/attempts", view.exercise_id);

    let solved = exercise.puzzle.solved_attempt();
    let (status, resp) = srv.post(&path, serde_json::to_value(&solved).unwrap()).await;
    assert_eq!(status, 200);
    let resp: AttemptResponse = serde_json::from_value(resp).unwrap();
    assert_eq!(resp.status, GradeStatus::Solved);
    assert_eq!(resp.messages, ["Correct — puzzle solved!"]);

    let mut wrong = solved.clone();
    wrong.placements[2].indent_level = 0;
    let (_, resp) = srv.post(&path, serde_json::to_value(&wrong).unwrap()).await;
    let resp: AttemptResponse = serde_json::from_value(resp).unwrap();
    assert_eq!(resp.status, GradeStatus::Incorrect);
    assert_eq!(resp.messages, ["Line 3: incorrect indentation"]);

    let bogus = Attempt {
        placements: vec![Placement { block_id: "nope".into(), indent_level: 0 }],
    };
    let (status, err) = srv.post(&path, serde_json::to_value(&bogus).unwrap()).await;
    assert_eq!(status, 400);
    assert_eq!(err["error"]["code"], "UnknownBlock");

    let mut dup = solved.clone();
    dup.placements[1] = dup.placements[0].clone();
    let (status, err) = srv.post(&path, serde_json::to_value(&dup).unwrap()).await;
    assert_eq!(status, 400);
    assert_eq!(err["error"]["code"], "DuplicatePlacement");

    let (status, err) = srv.post(&path, json!({"placements": "x"})).await;
    assert_eq!(status, 400);
    assert_eq!(err["error"]["code"], "InvalidBody");

    let (status, err) = srv.post("/api/exercises/missing/attempts", serde_json::to_value(&solved).unwrap()).await;
    assert_eq!(status, 404);
    assert_eq!(err["error"]["code"], "UnknownExercise");

    assert_eq!(srv.outcomes(), [Outcome::Generated]);
    srv.stop().await;
}

#[tokio::test]
async fn exhausted_generation_is_503_and_logged() {
    let dir = tempfile::tempdir().unwrap();
    let mut script = vec![STATEMENT.to_string()];
    script.extend(std::iter::repeat_n(BANNED.to_string(), 5));
    let srv = Server::start(dir.path(), GatewayScript::Replay(script)).await;
    let (status, body) = srv.post("/api/exercises", animals_loops()).await;
    assert_eq!(status, 503);
    let err: ApiErrorBody = serde_json::from_value(body).unwrap();
    assert_eq!(err.error.code, "GenerationExhausted");
    assert_eq!(srv.outcomes(), [Outcome::Exhausted]);
    assert!(srv.state.store.is_empty());
    srv.stop().await;
}

#[tokio::test]
async fn gateway_failure_is_502_and_logged() {
    let dir = tempfile::tempdir().unwrap();
    // Script runs out before the solution request.
    let srv = Server::start(dir.path(), GatewayScript::Replay(vec![STATEMENT.into()])).await;
    let (status, body) = srv.post("/api/exercises", animals_loops()).await;
    assert_eq!(status, 502);
    assert_eq!(body["error"]["code"], "GatewayFailed");
    assert_eq!(srv.outcomes(), [Outcome::GatewayFailed]);
    srv.stop().await;
}

#[tokio::test]
async fn validation_errors_are_400_and_logged_as_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let srv = Server::start(dir.path(), clean_script()).await;
    let cases = [
        (json!({"context_mode": "named", "context_text": "Animals", "concepts": []}), "NoConcepts"),
        (
            json!({"context_mode": "named", "context_text": "Animals",
                   "concepts": ["Loops", "Variables", "Strings", "Lists"]}),
            "TooManyConcepts",
        ),
        (json!({"context_mode": "named", "context_text": "Animals", "concepts": ["Recursion"]}), "UnknownConcept"),
        (json!({"context_mode": "named", "context_text": "Cats", "concepts": ["Loops"]}), "UnknownNamedContext"),
        (json!({"context_mode": "custom", "context_text": "   ", "concepts": ["Loops"]}), "EmptyCustomContext"),
        (
            json!({"context_mode": "custom", "context_text": "x".repeat(101), "concepts": ["Loops"]}),
            "CustomContextTooLong",
        ),
    ];
    for (body, code) in &cases {
        let (status, err) = srv.post("/api/exercises", body.clone()).await;
        assert_eq!(status, 400, "{body}");
        assert_eq!(err["error"]["code"], *code, "{body}");
    }
    let resp = srv
        .http
        .post(format!("{}/api/exercises", srv.base))
        .header("content-type", "application/json")
        .body("{not json")
        .send()
        .await
        .unwrap();
    assert_eq!(resp.status(), 400);
    let err: Value = resp.json().await.unwrap();
    assert_eq!(err["error"]["code"], "InvalidBody");

    assert_eq!(srv.outcomes(), vec![Outcome::Rejected; cases.len() + 1]);
    let (_, table) = srv.get("/api/analytics/contexts").await;
    assert_eq!(table["rows"], json!([]));
    srv.stop().await;
}

#[tokio::test]
async fn analytics_endpoints_count_generated_requests() {
    let dir = tempfile::tempdir().unwrap();
    let srv = Server::start(dir.path(), clean_script()).await;
    let bodies = [
        animals_loops(),
        animals_loops(),
        json!({"context_mode": "named", "context_text": "Music", "concepts": ["Loops", "Variables"]}),
        json!({"context_mode": "custom", "context_text": "Cats", "concepts": ["Variables"]}),
        json!({"context_mode": "none", "concepts": ["Lists"]}),
    ];
    for b in bodies {
        assert_eq!(srv.post("/api/exercises", b).await.0, 200);
    }
    let (status, contexts) = srv.get("/api/analytics/contexts").await;
    assert_eq!(status, 200);
    assert_eq!(contexts["dimension"], "contexts");
    assert_eq!(
        contexts["rows"],
        json!([
            {"label": "Animals", "count": 2},
            {"label": "Custom", "count": 1},
            {"label": "Music", "count": 1},
            {"label": "None", "count": 1},
        ])
    );
    let (_, concepts) = srv.get("/api/analytics/concepts").await;
    assert_eq!(concepts["rows"][0], json!({"label": "Loops", "count": 3}));
    assert_eq!(concepts["rows"][1], json!({"label": "Variables", "count": 2}));

    let log = read_log(&srv.state.log_dir).unwrap();
    let custom = &log.records[3];
    assert_eq!(custom.context_label_as_logged, "Custom");
    assert_eq!(custom.resolved_context.as_deref(), Some("Cats"));
    srv.stop().await;
}

#[tokio::test]
async fn surprise_resolves_from_configured_topics() {
    let dir = tempfile::tempdir().unwrap();
    let catalog = Catalog::with_topics(vec!["Astronomy".into()]);
    let srv = Server::start_with(dir.path(), clean_script(), catalog).await;
    let (status, _) = srv.post("/api/exercises", json!({"context_mode": "surprise", "concepts": ["Loops"]})).await;
    assert_eq!(status, 200);
    let log = read_log(&srv.state.log_dir).unwrap();
    assert_eq!(log.records[0].context_label_as_logged, "Surprise Me");
    assert_eq!(log.records[0].resolved_context.as_deref(), Some("Astronomy"));
    srv.stop().await;
}

#[tokio::test]
async fn exercises_survive_restart() {
    let dir = tempfile::tempdir().unwrap();
    let srv = Server::start(dir.path(), clean_script()).await;
    let (_, body) = srv.post("/api/exercises", animals_loops()).await;
    let view: ClientExerciseView = serde_json::from_value(body).unwrap();
    let solved = srv.state.store.get(&view.exercise_id).unwrap().puzzle.solved_attempt();
    srv.stop().await;

    let srv = Server::start(dir.path(), clean_script()).await;
    let path = format!("/api/exercises/{}/attempts", view.exercise_id);
    let (status, resp) = srv.post(&path, serde_json::to_value(&solved).unwrap()).await;
    assert_eq!(status, 200);
    assert_eq!(resp["status"], "solved");
    srv.post("/api/exercises", animals_loops()).await;
    assert_eq!(srv.outcomes(), [Outcome::Generated, Outcome::Generated]);
    srv.stop().await;
}

#[tokio::test]
async fn concurrent_requests_each_logged() {
    let dir = tempfile::tempdir().unwrap();
    let srv = Arc::new(Server::start(dir.path(), clean_script()).await);
    let mut tasks = Vec::new();
    for _ in 0..16 {
        let srv = srv.clone();
        tasks.push(tokio::spawn(async move { srv.post("/api/exercises", animals_loops()).await.0 }));
    }
    for t in tasks {
        assert_eq!(t.await.unwrap(), 200);
    }
    assert_eq!(srv.outcomes().len(), 16);
    assert_eq!(srv.state.store.len(), 16);
    Arc::try_unwrap(srv).ok().unwrap().stop().await;
}
