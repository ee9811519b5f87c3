//! Extractor and classifier endpoints over HTTP/JSON, and the choice
//! between them and the mocks.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use baba::pipeline::clients::{
    parse_classifier_response, parse_extractor_response, ExtractRequest, ExtractResponse,
    PairRequest, PairResponse,
};
use baba::pipeline::{
    ClassifierClient, ClientError, ExtractorClient, MockClassifier, MockExtractor, PlantedRelation,
};

use crate::error::CliError;
use crate::files::read_input;

pub const EXTRACTOR_URL_ENV: &str = "BABA_EXTRACTOR_URL";
pub const CLASSIFIER_URL_ENV: &str = "BABA_CLASSIFIER_URL";

fn post(url: &str, body: String, timeout: Duration) -> Result<String, ClientError> {
    // A fresh blocking client per call: cheap for local endpoints, and safe
    // to create and drop on any worker thread.
    let client = reqwest::blocking::Client::builder()
        .timeout(timeout)
        .build()
        .map_err(|e| ClientError::Unavailable(e.to_string()))?;
    let response = client
        .post(url)
        .header("content-type", "application/json")
        .body(body)
        .send()
        .map_err(|e| {
            if e.is_connect() {
                ClientError::Unavailable(format!("{url}: {e}"))
            } else {
                ClientError::Transport(format!("{url}: {e}"))
            }
        })?;
    let status = response.status();
    let text = response
        .text()
        .map_err(|e| ClientError::Transport(format!("{url}: {e}")))?;
    if status.is_server_error() {
        return Err(ClientError::Transport(format!("{url}: HTTP {status}")));
    }
    if !status.is_success() {
        return Err(ClientError::protocol(
            format!("{url}: HTTP {status}"),
            &text,
        ));
    }
    Ok(text)
}

#[derive(Debug, Clone)]
pub struct HttpExtractor {
    pub url: String,
    pub timeout: Duration,
}

impl ExtractorClient for HttpExtractor {
    fn extract(&self, request: &ExtractRequest) -> Result<ExtractResponse, ClientError> {
        let body = serde_json::to_string(request).expect("request serializes");
        parse_extractor_response(&post(&self.url, body, self.timeout)?)
    }
}

#[derive(Debug, Clone)]
pub struct HttpClassifier {
    pub url: String,
    pub timeout: Duration,
}

impl ClassifierClient for HttpClassifier {
    fn classify(&self, batch: &[PairRequest]) -> Result<Vec<PairResponse>, ClientError> {
        let body = serde_json::to_string(batch).expect("request serializes");
        parse_classifier_response(&post(&self.url, body, self.timeout)?, batch)
    }
}

pub type SharedExtractor = Arc<dyn ExtractorClient + Send + Sync>;
pub type SharedClassifier = Arc<dyn ClassifierClient + Send + Sync>;

#[derive(Clone)]
pub struct Clients {
    pub extractor: SharedExtractor,
    pub classifier: SharedClassifier,
}

impl Clients {
    /// Keyword mocks plus planted relations.
    pub fn mock(relations: Vec<PlantedRelation>) -> Self {
        Clients {
            extractor: Arc::new(MockExtractor::default()),
            classifier: Arc::new(
                MockClassifier::new()
                    .with_default_rules()
                    .with_planted(relations),
            ),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ClientSettings {
    pub mock: bool,
    pub relations: Option<PathBuf>,
    pub extractor_url: Option<String>,
    pub classifier_url: Option<String>,
    pub timeout: Duration,
}

pub fn read_relations(path: &std::path::Path) -> Result<Vec<PlantedRelation>, CliError> {
    let text = read_input(path)?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("invalid relations file {}: {e}", path.display())))
}

impl ClientSettings {
    /// Validates the settings without contacting anything.
    pub fn build(&self) -> Result<Clients, CliError> {
        if self.mock {
            let relations = match &self.relations {
                Some(p) => read_relations(p)?,
                None => Vec::new(),
            };
            return Ok(Clients::mock(relations));
        }
        if self.relations.is_some() {
            return Err(CliError::usage("invalid relations: only used with --mock"));
        }
        let url = |value: &Option<String>, field: &str, env: &str| {
            let url = value.clone().ok_or_else(|| {
                CliError::usage(format!(
                    "invalid {field}: not set (pass --{}, set {env}, or use --mock)",
                    field.replace('_', "-")
                ))
            })?;
            if !(url.starts_with("http://") || url.starts_with("https://")) {
                return Err(CliError::usage(format!(
                    "invalid {field}: `{url}` is not an http(s) URL"
                )));
            }
            Ok(url)
        };
        let timeout = if self.timeout.is_zero() {
            Duration::from_secs(60)
        } else {
            self.timeout
        };
        Ok(Clients {
            extractor: Arc::new(HttpExtractor {
                url: url(&self.extractor_url, "extractor_url", EXTRACTOR_URL_ENV)?,
                timeout,
            }),
            classifier: Arc::new(HttpClassifier {
                url: url(&self.classifier_url, "classifier_url", CLASSIFIER_URL_ENV)?,
                timeout,
            }),
        })
    }
}
