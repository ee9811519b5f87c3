//! Extractor and classifier client contracts, plus deterministic mocks.
//!
//! Wire format (JSON):
//!
//! * extractor: request `{"section_text": "..."}`, response
//!   `{"<literal id>": "<span text>", ...}`
//! * classifier: request `[{"pair_id": 0, "text_a": "...", "text_b": "..."}]`,
//!   response `[{"pair_id": 0, "label": "support", "confidence": 0.93}]`

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Relation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClientError {
    /// Worth retrying: connection refused, timeouts, 5xx.
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("protocol violation: {message} (body: {excerpt:?})")]
    Protocol { message: String, excerpt: String },
    #[error("client unavailable: {0}")]
    Unavailable(String),
}

impl ClientError {
    pub fn protocol(message: impl Into<String>, body: &str) -> Self {
        ClientError::Protocol {
            message: message.into(),
            excerpt: body.chars().take(200).collect(),
        }
    }

    pub fn is_retriable(&self) -> bool {
        matches!(self, ClientError::Transport(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Support,
    Attack,
    None,
}

impl Label {
    pub fn relation(self) -> Option<Relation> {
        match self {
            Label::Support => Some(Relation::Support),
            Label::Attack => Some(Relation::Attack),
            Label::None => None,
        }
    }
}

impl From<Relation> for Label {
    fn from(r: Relation) -> Self {
        match r {
            Relation::Support => Label::Support,
            Relation::Attack => Label::Attack,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractRequest {
    pub section_text: String,
}

pub type ExtractResponse = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRequest {
    pub pair_id: u64,
    pub text_a: String,
    pub text_b: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairResponse {
    pub pair_id: u64,
    pub label: Label,
    pub confidence: f64,
}

pub trait ExtractorClient: Sync {
    fn extract(&self, request: &ExtractRequest) -> Result<ExtractResponse, ClientError>;
}

pub trait ClassifierClient: Sync {
    fn classify(&self, batch: &[PairRequest]) -> Result<Vec<PairResponse>, ClientError>;
}

impl<T: ExtractorClient + ?Sized> ExtractorClient for &T {
    fn extract(&self, request: &ExtractRequest) -> Result<ExtractResponse, ClientError> {
        (**self).extract(request)
    }
}

impl<T: ClassifierClient + ?Sized> ClassifierClient for &T {
    fn classify(&self, batch: &[PairRequest]) -> Result<Vec<PairResponse>, ClientError> {
        (**self).classify(batch)
    }
}

/// Parses and validates a classifier response body against its batch.
/// Any missing or unknown pair id, or confidence outside [0, 1], rejects
/// the whole batch. When a pair id appears twice the more confident label
/// wins.
pub fn parse_classifier_response(
    body: &str,
    batch: &[PairRequest],
) -> Result<Vec<PairResponse>, ClientError> {
    let parsed: Vec<PairResponse> = serde_json::from_str(body)
        .map_err(|e| ClientError::protocol(format!("invalid JSON: {e}"), body))?;
    validate_classifier_response(parsed, batch).map_err(|m| ClientError::protocol(m, body))
}

pub(crate) fn validate_classifier_response(
    responses: Vec<PairResponse>,
    batch: &[PairRequest],
) -> Result<Vec<PairResponse>, String> {
    let expected: HashSet<u64> = batch.iter().map(|r| r.pair_id).collect();
    let mut best: HashMap<u64, PairResponse> = HashMap::new();
    for r in responses {
        if !expected.contains(&r.pair_id) {
            return Err(format!("unknown pair_id {}", r.pair_id));
        }
        if !(0.0..=1.0).contains(&r.confidence) {
            return Err(format!(
                "confidence {} out of range for pair_id {}",
                r.confidence, r.pair_id
            ));
        }
        match best.get(&r.pair_id) {
            Some(prev) if prev.confidence >= r.confidence => {}
            _ => {
                best.insert(r.pair_id, r);
            }
        }
    }
    batch
        .iter()
        .map(|req| {
            best.remove(&req.pair_id)
                .ok_or_else(|| format!("missing pair_id {}", req.pair_id))
        })
        .collect()
}

pub fn parse_extractor_response(body: &str) -> Result<ExtractResponse, ClientError> {
    serde_json::from_str(body)
        .map_err(|e| ClientError::protocol(format!("invalid JSON: {e}"), body))
}

fn contains_word(text: &str, word: &str) -> bool {
    text.split(|c: char| !c.is_alphanumeric())
        .any(|w| w.eq_ignore_ascii_case(word))
}

/// Sentences of `text`: split after `.`, `!`, `?` and at line breaks,
/// with list and heading markers stripped.
pub fn sentences(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    for line in text.lines() {
        let mut start = 0;
        let bytes = line.as_bytes();
        for i in 0..bytes.len() {
            let ends = matches!(bytes[i], b'.' | b'!' | b'?')
                && (i + 1 == bytes.len() || bytes[i + 1].is_ascii_whitespace());
            if ends {
                out.push(&line[start..=i]);
                start = i + 1;
            }
        }
        out.push(&line[start..]);
    }
    out.into_iter()
        .map(|s| s.trim().trim_start_matches(['#', '-', '*', '>']).trim())
        .filter(|s| !s.is_empty())
        .collect()
}

/// Marks every sentence containing one of its keywords as a literal.
#[derive(Debug, Clone)]
pub struct MockExtractor {
    keywords: Vec<String>,
}

impl Default for MockExtractor {
    fn default() -> Self {
        MockExtractor::new(["should", "because"])
    }
}

impl MockExtractor {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(keywords: I) -> Self {
        MockExtractor {
            keywords: keywords.into_iter().map(Into::into).collect(),
        }
    }
}

impl ExtractorClient for MockExtractor {
    fn extract(&self, request: &ExtractRequest) -> Result<ExtractResponse, ClientError> {
        Ok(sentences(&request.section_text)
            .into_iter()
            .filter(|s| self.keywords.iter().any(|k| contains_word(s, k)))
            .enumerate()
            .map(|(i, s)| ((i + 1).to_string(), s.to_string()))
            .collect())
    }
}

/// A labelled pair recognised by [`MockClassifier`], keyed on exact text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedRelation {
    pub src: String,
    pub dst: String,
    pub relation: Relation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeywordRule {
    pub keyword: String,
    pub relation: Relation,
}

pub const PLANTED_CONFIDENCE: f64 = 0.9;
pub const KEYWORD_CONFIDENCE: f64 = 0.75;
pub const NONE_CONFIDENCE: f64 = 0.9;

/// Deterministic classifier. Planted `(text_a, text_b)` pairs take
/// precedence; otherwise the first keyword rule matching `text_a` fires;
/// everything else is `none`.
#[derive(Debug, Clone, Default)]
pub struct MockClassifier {
    planted: HashMap<(String, String), Relation>,
    rules: Vec<KeywordRule>,
}

impl MockClassifier {
    pub fn new() -> Self {
        Self::default()
    }

    /// `however` attacks, `moreover` and `furthermore` support.
    pub fn with_default_rules(self) -> Self {
        self.with_rule("however", Relation::Attack)
            .with_rule("moreover", Relation::Support)
            .with_rule("furthermore", Relation::Support)
    }

    pub fn with_rule(mut self, keyword: impl Into<String>, relation: Relation) -> Self {
        self.rules.push(KeywordRule {
            keyword: keyword.into(),
            relation,
        });
        self
    }

    pub fn with_planted<I: IntoIterator<Item = PlantedRelation>>(mut self, planted: I) -> Self {
        for p in planted {
            self.planted.insert(
                (p.src.trim().to_string(), p.dst.trim().to_string()),
                p.relation,
            );
        }
        self
    }

    pub fn label(&self, text_a: &str, text_b: &str) -> (Label, f64) {
        let key = (text_a.trim().to_string(), text_b.trim().to_string());
        if let Some(r) = self.planted.get(&key) {
            return ((*r).into(), PLANTED_CONFIDENCE);
        }
        for rule in &self.rules {
            if contains_word(text_a, &rule.keyword) {
                return (rule.relation.into(), KEYWORD_CONFIDENCE);
            }
        }
        (Label::None, NONE_CONFIDENCE)
    }
}

impl ClassifierClient for MockClassifier {
    fn classify(&self, batch: &[PairRequest]) -> Result<Vec<PairResponse>, ClientError> {
        Ok(batch
            .iter()
            .map(|r| {
                let (label, confidence) = self.label(&r.text_a, &r.text_b);
                PairResponse {
                    pair_id: r.pair_id,
                    label,
                    confidence,
                }
            })
            .collect())
    }
}
