use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use tracing_subscriber::EnvFilter;

use puzzlemaker_cli::args::request_input;
use puzzlemaker_cli::generate::{plan_batch, run_batch, GatewayPlan};
use puzzlemaker_cli::report::{build_report, render, ReportFormat};
use puzzlemaker_cli::{grade_from_bank, CliError};
use puzzlemaker_client::PuzzleClient;
use puzzlemaker_core::analytics::Dimension;
use puzzlemaker_core::puzzle::{render_feedback, GradeStatus};
use puzzlemaker_core::validate::validate_solution;
use puzzlemaker_core::{Attempt, ExerciseId, Generator};
use puzzlemaker_service::{serve, shutdown_signal, AppState, ServiceConfig};

#[derive(Parser)]
#[command(name = "puzzlemaker", version, about = "Generate, grade and report on Parsons problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the HTTP service.
    Serve {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Replay canned model responses instead of calling the model.
        #[arg(long)]
        gateway_script: Option<PathBuf>,
        /// Overrides listen_addr from the config.
        #[arg(long)]
        listen: Option<SocketAddr>,
    },
    /// Generate an exercise bank.
    Generate {
        /// Context: a catalog name, `none`, `surprise`, or `custom:<text>`. Repeatable.
        #[arg(long = "contexts", required = true)]
        contexts: Vec<String>,
        /// Comma-separated concept set. Repeatable.
        #[arg(long = "concepts", required = true)]
        concepts: Vec<String>,
        /// Exercises per (context, concept set) pair.
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        gateway_script: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Check a solution file against the acceptance rules.
    Validate {
        file: PathBuf,
        #[arg(long)]
        max_lines: Option<usize>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Frequency table over a request log file or directory.
    Report {
        log: PathBuf,
        #[arg(long, default_value = "contexts")]
        dimension: Dimension,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Grade an attempt against an exercise in a bank.
    Grade { bank: PathBuf, exercise_id: String, attempt: PathBuf },
    /// Talk to a running service.
    Remote {
        #[arg(long, default_value = "http://127.0.0.1:8080")]
        url: String,
        #[command(subcommand)]
        command: RemoteCommand,
    },
}

#[derive(Subcommand)]
enum RemoteCommand {
    Health,
    Catalog,
    /// Request a new exercise; prints the client view as JSON.
    Create {
        #[arg(long)]
        context: String,
        #[arg(long)]
        concepts: String,
    },
    /// Submit an attempt file; exit 0 when solved, 1 otherwise.
    Attempt { exercise_id: String, attempt: PathBuf },
    Analytics {
        #[arg(long, default_value = "contexts")]
        dimension: Dimension,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

fn load_config(path: Option<&Path>) -> Result<ServiceConfig, CliError> {
    match path {
        Some(p) => ServiceConfig::load(p).map_err(CliError::usage),
        None => Ok(ServiceConfig::default()),
    }
}

fn print(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

fn feedback_exit(status: GradeStatus) -> Result<ExitCode, CliError> {
    Ok(match status {
        GradeStatus::Solved => ExitCode::SUCCESS,
        GradeStatus::Incorrect => ExitCode::from(1),
    })
}

async fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Serve { config, gateway_script, listen } => {
            let mut cfg = load_config(config.as_deref())?;
            if gateway_script.is_some() {
                cfg.gateway_script = gateway_script;
            }
            if let Some(addr) = listen {
                cfg.listen_addr = addr;
            }
            let catalog = cfg.catalog().map_err(CliError::usage)?;
            let gateways = cfg.gateway_source().map_err(CliError::usage)?;
            let state = AppState::open(&cfg, catalog, gateways)
                .map_err(|e| CliError::Usage(format!("cannot open {}: {e}", cfg.storage_dir.display())))?;
            let listener = tokio::net::TcpListener::bind(cfg.listen_addr)
                .await
                .map_err(|e| CliError::Failure(format!("cannot listen on {}: {e}", cfg.listen_addr)))?;
            let addr = listener.local_addr().map_err(|e| CliError::Failure(e.to_string()))?;
            print(&format!("listening on {addr}\n"));
            serve(listener, Arc::new(state), shutdown_signal())
                .await
                .map_err(|e| CliError::Failure(e.to_string()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Generate { contexts, concepts, count, out, seed, jobs, gateway_script, config } => {
            let mut cfg = load_config(config.as_deref())?;
            if gateway_script.is_some() {
                cfg.gateway_script = gateway_script;
            }
            let catalog = cfg.catalog().map_err(CliError::usage)?;
            let items = plan_batch(&catalog, &contexts, &concepts, count, seed)?;
            let gateways = Arc::new(GatewayPlan::from_config(&cfg)?);
            let generator = Arc::new(Generator::new(Arc::new(catalog), cfg.pipeline()));
            let total = items.len();
            let bank = run_batch(generator, gateways, items, jobs).await;
            bank.save(&out).map_err(|e| CliError::Failure(format!("cannot write {}: {e}", out.display())))?;
            eprintln!(
                "wrote {} exercise(s), {} failure(s) to {}",
                bank.exercises.len(),
                bank.failures.len(),
                out.display()
            );
            if total > 0 && bank.exercises.is_empty() {
                return Err(CliError::Failure("every item failed".into()));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { file, max_lines, config } => {
            let cfg = load_config(config.as_deref())?;
            let raw = std::fs::read_to_string(&file)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", file.display())))?;
            match validate_solution(&raw, max_lines.unwrap_or(cfg.max_lines)) {
                Ok(v) => {
                    print(&format!("ok: {} line(s)\n", v.solution.lines.len()));
                    Ok(ExitCode::SUCCESS)
                }
                Err(report) => {
                    for f in &report.failures {
                        print(&format!("fail: {f:?}\n"));
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Report { log, dimension, format } => {
            let report = build_report(&log, dimension)?;
            if report.malformed > 0 {
                eprintln!("warning: skipped {} malformed line(s)", report.malformed);
            }
            print(&render(&report.table, format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Grade { bank, exercise_id, attempt } => {
            let report = grade_from_bank(&bank, &exercise_id, &attempt)?;
            for line in render_feedback(&report) {
                print(&format!("{line}\n"));
            }
            feedback_exit(report.status)
        }
        Command::Remote { url, command } => {
            let client = PuzzleClient::new(&url).map_err(CliError::usage)?;
            let remote = |e: puzzlemaker_client::ClientError| CliError::Failure(e.to_string());
            match command {
                RemoteCommand::Health => {
                    client.health().await.map_err(remote)?;
                    print("ok\n");
                    Ok(ExitCode::SUCCESS)
                }
                RemoteCommand::Catalog => {
                    let view = client.catalog().await.map_err(remote)?;
                    print(&format!("{}\n", serde_json::to_string_pretty(&view).expect("serializes")));
                    Ok(ExitCode::SUCCESS)
                }
                RemoteCommand::Create { context, concepts } => {
                    let view = client.create_exercise(&request_input(&context, &concepts)).await.map_err(remote)?;
                    print(&format!("{}\n", serde_json::to_string_pretty(&view).expect("serializes")));
                    Ok(ExitCode::SUCCESS)
                }
                RemoteCommand::Attempt { exercise_id, attempt } => {
                    let text = std::fs::read_to_string(&attempt)
                        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", attempt.display())))?;
                    let attempt: Attempt = serde_json::from_str(&text).map_err(CliError::usage)?;
                    let resp = client
                        .submit_attempt(&ExerciseId::from(exercise_id.as_str()), &attempt)
                        .await
                        .map_err(remote)?;
                    for line in &resp.messages {
                        print(&format!("{line}\n"));
                    }
                    feedback_exit(resp.status)
                }
                RemoteCommand::Analytics { dimension, format } => {
                    let table = client.analytics(dimension).await.map_err(remote)?;
                    print(&render(&table, format));
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
    }
}

#[tokio::main]
async fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("warn")))
        .init();
    match run(Cli::parse()).await {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
