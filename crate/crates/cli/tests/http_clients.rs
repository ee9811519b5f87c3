//! The HTTP clients against an in-process model server that wraps the mocks.

use std::collections::HashSet;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use axum::extract::State;
use axum::http::StatusCode;
use axum::routing::post;
use axum::{Json, Router};
use baba::pipeline::clients::{ExtractRequest, PairRequest};
use baba::pipeline::{
    ClassifierClient, ClientError, DocFormat, ExtractorClient, MineConfig, MockClassifier,
    MockExtractor,
};
use baba_cli::clients::{read_relations, Clients, HttpClassifier, HttpExtractor};
use baba_cli::error::CliError;
use baba_cli::ops;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

struct Models {
    extractor: MockExtractor,
    classifier: MockClassifier,
    classify_calls: AtomicUsize,
    /// Batches (by pair ids) the flaky endpoint has already failed once.
    failed_once: Mutex<HashSet<Vec<u64>>>,
}

async fn extract(
    State(m): State<Arc<Models>>,
    Json(req): Json<ExtractRequest>,
) -> Json<serde_json::Value> {
    Json(serde_json::to_value(m.extractor.extract(&req).unwrap()).unwrap())
}

async fn classify(
    State(m): State<Arc<Models>>,
    Json(batch): Json<Vec<PairRequest>>,
) -> Json<serde_json::Value> {
    m.classify_calls.fetch_add(1, Ordering::SeqCst);
    Json(serde_json::to_value(m.classifier.classify(&batch).unwrap()).unwrap())
}

/// Fails the first attempt at each batch with a 503.
async fn flaky(
    State(m): State<Arc<Models>>,
    Json(batch): Json<Vec<PairRequest>>,
) -> Result<Json<serde_json::Value>, StatusCode> {
    m.classify_calls.fetch_add(1, Ordering::SeqCst);
    let key: Vec<u64> = batch.iter().map(|p| p.pair_id).collect();
    if m.failed_once.lock().unwrap().insert(key) {
        return Err(StatusCode::SERVICE_UNAVAILABLE);
    }
    Ok(Json(
        serde_json::to_value(m.classifier.classify(&batch).unwrap()).unwrap(),
    ))
}

async fn garbled() -> &'static str {
    "[{\"pair_id\": \"one\"}]"
}

async fn rejects() -> (StatusCode, &'static str) {
    (StatusCode::BAD_REQUEST, "unsupported input")
}

fn start() -> (String, Arc<Models>) {
    let models = Arc::new(Models {
        extractor: MockExtractor::default(),
        classifier: MockClassifier::new()
            .with_default_rules()
            .with_planted(read_relations(&fixture("risk_relations.json")).unwrap()),
        classify_calls: AtomicUsize::new(0),
        failed_once: Mutex::new(HashSet::new()),
    });
    let app = Router::new()
        .route("/extract", post(extract))
        .route("/classify", post(classify))
        .route("/flaky", post(flaky))
        .route("/garbled", post(garbled))
        .route("/rejects", post(rejects))
        .with_state(models.clone());
    let (tx, rx) = std::sync::mpsc::channel::<SocketAddr>();
    std::thread::spawn(move || {
        let rt = tokio::runtime::Runtime::new().unwrap();
        rt.block_on(async move {
            let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
            tx.send(listener.local_addr().unwrap()).unwrap();
            axum::serve(listener, app).await.unwrap();
        });
    });
    (format!("http://{}", rx.recv().unwrap()), models)
}

fn http(base: &str, classify_path: &str) -> Clients {
    let timeout = Duration::from_secs(30);
    Clients {
        extractor: Arc::new(HttpExtractor {
            url: format!("{base}/extract"),
            timeout,
        }),
        classifier: Arc::new(HttpClassifier {
            url: format!("{base}{classify_path}"),
            timeout,
        }),
    }
}

fn mine(clients: &Clients) -> Result<ops::LoadedGraph, CliError> {
    let text = std::fs::read_to_string(fixture("risk.md")).unwrap();
    ops::mine(text, DocFormat::Markdown, clients, &MineConfig::default()).map(|(g, _)| g)
}

fn mock() -> Clients {
    Clients::mock(read_relations(&fixture("risk_relations.json")).unwrap())
}

#[test]
fn http_mining_matches_in_process_mocks() {
    let (base, _) = start();
    let over_http = mine(&http(&base, "/classify")).unwrap();
    let direct = mine(&mock()).unwrap();
    assert_eq!(over_http.json, direct.json);
}

#[test]
fn endpoint_urls_come_from_the_environment() {
    let (base, models) = start();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("risk.json");
    let status = Command::new(env!("CARGO_BIN_EXE_baba"))
        .args(["mine", fixture("risk.md").to_str().unwrap(), "--out"])
        .arg(&out)
        .env("BABA_EXTRACTOR_URL", format!("{base}/extract"))
        .env("BABA_CLASSIFIER_URL", format!("{base}/classify"))
        .status()
        .unwrap();
    assert!(status.success());
    assert!(models.classify_calls.load(Ordering::SeqCst) > 0);
    assert_eq!(
        std::fs::read_to_string(&out).unwrap(),
        mine(&mock()).unwrap().json
    );
}

#[test]
fn server_errors_are_retried_once() {
    let (base, models) = start();
    let g = mine(&http(&base, "/flaky")).unwrap();
    assert_eq!(g.json, mine(&mock()).unwrap().json);
    let batches = models.failed_once.lock().unwrap().len();
    assert!(batches > 1);
    assert_eq!(models.classify_calls.load(Ordering::SeqCst), 2 * batches);
}

#[test]
fn malformed_responses_fail_the_run() {
    let (base, _) = start();
    let err = mine(&http(&base, "/garbled")).unwrap_err();
    assert_eq!(err.exit_code(), 4, "{err}");
    assert!(err.to_string().contains("batch"), "{err}");
}

#[test]
fn client_errors_carry_the_response_excerpt() {
    let (base, _) = start();
    let client = HttpClassifier {
        url: format!("{base}/rejects"),
        timeout: Duration::from_secs(5),
    };
    let batch = [PairRequest {
        pair_id: 0,
        text_a: "a".into(),
        text_b: "b".into(),
    }];
    match client.classify(&batch) {
        Err(ClientError::Protocol { excerpt, .. }) => assert!(excerpt.contains("unsupported")),
        other => panic!("expected a protocol error, got {other:?}"),
    }
}
