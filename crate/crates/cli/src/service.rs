//! Local graph service for the explorer UI.
//!
//! Every response carries the current graph hash in `x-graph-sha256`.
//! Fact ingestion is serialized behind one lock; solver jobs run on the
//! blocking pool, bounded by a semaphore, with a per-request timeout.

use std::sync::Arc;
use std::time::Duration;

use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use baba::pipeline::MineConfig;
use baba::verification::{DepthConfig, FeedbackConfig};
use baba::Semantics;
use serde::Deserialize;
use serde_json::json;
use tokio::sync::{Mutex, RwLock, Semaphore};

use crate::clients::Clients;
use crate::error::CliError;
use crate::ops::{self, LoadedGraph};

pub const HASH_HEADER: &str = "x-graph-sha256";

pub struct ServiceConfig {
    pub clients: Clients,
    pub mine: MineConfig,
    /// Upper bound on a solve request's timeout.
    pub solve_timeout: Duration,
    pub solver_workers: usize,
    /// Fixed feedback header timestamp; `None` uses [`crate::files::timestamp`].
    pub timestamp: Option<String>,
}

pub struct AppState {
    graph: RwLock<Arc<LoadedGraph>>,
    mutation: Mutex<()>,
    solver_slots: Semaphore,
    config: ServiceConfig,
}

impl AppState {
    pub fn new(graph: LoadedGraph, config: ServiceConfig) -> Arc<Self> {
        Arc::new(AppState {
            graph: RwLock::new(Arc::new(graph)),
            mutation: Mutex::new(()),
            solver_slots: Semaphore::new(config.solver_workers.max(1)),
            config,
        })
    }

    pub async fn snapshot(&self) -> Arc<LoadedGraph> {
        self.graph.read().await.clone()
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/graph", get(graph))
        .route("/facts", post(facts))
        .route("/solve", post(solve))
        .route("/feedback", post(feedback))
        .with_state(state)
}

pub async fn serve(listener: tokio::net::TcpListener, state: Arc<AppState>) -> std::io::Result<()> {
    axum::serve(listener, router(state)).await
}

fn reply(hash: &str, status: StatusCode, body: impl IntoResponse) -> Response {
    let mut response = (status, body).into_response();
    if let Ok(v) = HeaderValue::from_str(hash) {
        response.headers_mut().insert(HASH_HEADER, v);
    }
    response
}

fn error(hash: &str, e: &CliError) -> Response {
    let status = match e {
        CliError::Usage(_) => StatusCode::BAD_REQUEST,
        CliError::Timeout(_) => StatusCode::GATEWAY_TIMEOUT,
        CliError::Client(_) => StatusCode::SERVICE_UNAVAILABLE,
        CliError::Other(_) => StatusCode::INTERNAL_SERVER_ERROR,
    };
    reply(hash, status, Json(json!({ "error": e.to_string() })))
}

fn parse_body<T>(body: Result<Json<T>, JsonRejection>) -> Result<T, CliError> {
    body.map(|Json(b)| b)
        .map_err(|e| CliError::usage(format!("invalid request body: {e}")))
}

async fn health(State(state): State<Arc<AppState>>) -> Response {
    let g = state.snapshot().await;
    reply(
        &g.sha256,
        StatusCode::OK,
        Json(json!({
            "status": "ok",
            "graph_sha256": g.sha256,
            "nodes": g.graph.nodes().len(),
            "edges": g.graph.edges().len(),
        })),
    )
}

async fn graph(State(state): State<Arc<AppState>>) -> Response {
    let g = state.snapshot().await;
    let mut response = reply(&g.sha256, StatusCode::OK, g.json.clone());
    response.headers_mut().insert(
        axum::http::header::CONTENT_TYPE,
        HeaderValue::from_static("application/json"),
    );
    response
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactsRequest {
    pub text: String,
}

async fn facts(
    State(state): State<Arc<AppState>>,
    body: Result<Json<FactsRequest>, JsonRejection>,
) -> Response {
    let _exclusive = state.mutation.lock().await;
    let current = state.snapshot().await;
    let request = match parse_body(body) {
        Ok(r) => r,
        Err(e) => return error(&current.sha256, &e),
    };
    let clients = state.config.clients.clone();
    let config = state.config.mine.clone();
    let base = current.clone();
    let result = tokio::task::spawn_blocking(move || {
        ops::factcheck(&base.graph, request.text, &clients, &config)
    })
    .await;
    let out = match result {
        Ok(Ok(out)) => out,
        Ok(Err(e)) => return error(&current.sha256, &e),
        Err(e) => return error(&current.sha256, &CliError::Other(e.into())),
    };
    let body = serde_json::to_value(&out).expect("output serializes");
    *state.graph.write().await = Arc::new(out.graph);
    reply(&out.graph_sha256, StatusCode::OK, Json(body))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveRequest {
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default)]
    pub semantics: Option<Semantics>,
    /// Seconds; capped by the service's limit.
    #[serde(default)]
    pub timeout: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

fn default_k() -> usize {
    3
}

async fn solve(
    State(state): State<Arc<AppState>>,
    body: Result<Json<SolveRequest>, JsonRejection>,
) -> Response {
    let g = state.snapshot().await;
    let request = match parse_body(body) {
        Ok(r) => r,
        Err(e) => return error(&g.sha256, &e),
    };
    let limit = state.config.solve_timeout;
    let timeout = match request.timeout {
        None => limit,
        Some(secs) => match Duration::try_from_secs_f64(secs) {
            Ok(d) => d.min(limit),
            Err(_) => {
                return error(
                    &g.sha256,
                    &CliError::usage("invalid timeout: must be a non-negative number of seconds"),
                )
            }
        },
    };
    let semantics = request.semantics.unwrap_or(Semantics::Admissible);
    let _slot = state
        .solver_slots
        .acquire()
        .await
        .expect("semaphore is never closed");
    let snapshot = g.clone();
    let result = tokio::task::spawn_blocking(move || {
        ops::solve(&snapshot, request.k, semantics, timeout, request.seed)
    })
    .await;
    match result {
        Ok(Ok(report)) if report.complete => reply(&g.sha256, StatusCode::OK, Json(report)),
        Ok(Ok(report)) => reply(
            &g.sha256,
            StatusCode::GATEWAY_TIMEOUT,
            Json(json!({ "error": "solver timed out", "partial": report })),
        ),
        Ok(Err(e)) => error(&g.sha256, &e),
        Err(e) => error(&g.sha256, &CliError::Other(e.into())),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeedbackRequest {
    pub m: Option<usize>,
    pub top_j: Option<usize>,
    pub chain_depth: Option<usize>,
}

async fn feedback(
    State(state): State<Arc<AppState>>,
    body: Result<Json<FeedbackRequest>, JsonRejection>,
) -> Response {
    let g = state.snapshot().await;
    let request = match parse_body(body) {
        Ok(r) => r,
        Err(e) => return error(&g.sha256, &e),
    };
    let defaults = FeedbackConfig::default();
    let config = FeedbackConfig {
        depth: DepthConfig {
            m: request.m.unwrap_or(defaults.depth.m),
            chain_depth: request.chain_depth.unwrap_or(defaults.depth.chain_depth),
        },
        top_j: request.top_j.unwrap_or(defaults.top_j),
    };
    let timestamp = match crate::files::timestamp(state.config.timestamp.as_deref()) {
        Ok(t) => t,
        Err(e) => return error(&g.sha256, &e),
    };
    match ops::feedback(&g, config, timestamp) {
        Ok(out) => reply(&g.sha256, StatusCode::OK, Json(out)),
        Err(e) => error(&g.sha256, &e),
    }
}
