use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::clients::{ClassifierClient, Label, PairRequest, PairResponse};
use super::literals::with_retry;
use super::pairs::OrderedPair;
use super::PipelineError;
use crate::graph::Relation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub batch: usize,
    /// Maximum concurrent classifier requests.
    pub parallelism: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            batch: 32,
            parallelism: 4,
        }
    }
}

impl ClassifyOptions {
    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.batch == 0 {
            return Err(PipelineError::InvalidConfig {
                field: "batch",
                reason: "must be at least 1".into(),
            });
        }
        if self.parallelism == 0 {
            return Err(PipelineError::InvalidConfig {
                field: "parallelism",
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }
}

pub(crate) fn validate_threshold(threshold: f64) -> Result<(), PipelineError> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(PipelineError::InvalidConfig {
            field: "threshold",
            reason: format!("must lie in [0, 1], got {threshold}"),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationResult {
    pub pair: OrderedPair,
    pub label: Label,
    pub confidence: f64,
}

/// A batch that still failed after its retry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BatchFailure {
    pub batch: usize,
    pub pairs: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyOutcome {
    /// One result per input pair, in input order.
    pub results: Vec<RelationResult>,
    pub requests: usize,
    pub failures: Vec<BatchFailure>,
}

/// Number of classifier requests needed for `pairs` pairs.
pub fn projected_requests(pairs: usize, batch: usize) -> usize {
    pairs.div_ceil(batch)
}

/// Classifies pairs in batches of `options.batch`, with up to
/// `options.parallelism` batches in flight. Pair ids are positions in
/// `pairs`. A batch that fails twice is fail-open: its pairs get label
/// `none` with confidence 0 and the failure is reported.
pub fn classify_pairs(
    pairs: &[OrderedPair],
    texts: &HashMap<&str, &str>,
    client: &dyn ClassifierClient,
    options: &ClassifyOptions,
) -> Result<ClassifyOutcome, PipelineError> {
    options.validate()?;
    let text = |id: &str| {
        texts
            .get(id)
            .map(|t| t.to_string())
            .ok_or_else(|| PipelineError::InvalidConfig {
                field: "pairs",
                reason: format!("no text for literal `{id}`"),
            })
    };
    let requests: Vec<PairRequest> = pairs
        .iter()
        .enumerate()
        .map(|(i, p)| {
            Ok(PairRequest {
                pair_id: i as u64,
                text_a: text(&p.src)?,
                text_b: text(&p.dst)?,
            })
        })
        .collect::<Result<_, PipelineError>>()?;

    let batches: Vec<&[PairRequest]> = requests.chunks(options.batch).collect();
    log::info!(
        "classifying {} pairs in {} request(s) of up to {}",
        pairs.len(),
        projected_requests(pairs.len(), options.batch),
        options.batch
    );

    let per_worker = batches.len().div_ceil(options.parallelism).max(1);
    let answers: Vec<Result<Vec<PairResponse>, String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = batches
            .chunks(per_worker)
            .map(|group| {
                scope.spawn(move || {
                    group
                        .iter()
                        .map(|batch| run_batch(client, batch))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("classifier worker panicked"))
            .collect()
    });

    let mut results = Vec::with_capacity(pairs.len());
    let mut failures = Vec::new();
    for (index, (batch, answer)) in batches.iter().zip(answers).enumerate() {
        match answer {
            Ok(responses) => {
                for r in responses {
                    results.push(RelationResult {
                        pair: pairs[r.pair_id as usize].clone(),
                        label: r.label,
                        confidence: r.confidence,
                    });
                }
            }
            Err(error) => {
                log::error!("classifier batch {index} failed after retry: {error}");
                failures.push(BatchFailure {
                    batch: index,
                    pairs: batch.len(),
                    error,
                });
                for req in batch.iter() {
                    results.push(RelationResult {
                        pair: pairs[req.pair_id as usize].clone(),
                        label: Label::None,
                        confidence: 0.0,
                    });
                }
            }
        }
    }
    Ok(ClassifyOutcome {
        results,
        requests: batches.len(),
        failures,
    })
}

fn run_batch(
    client: &dyn ClassifierClient,
    batch: &[PairRequest],
) -> Result<Vec<PairResponse>, String> {
    with_retry(|| {
        let responses = client.classify(batch)?;
        // Clients built on the wire parser already validate; in-process
        // clients are checked here so every path gets the same contract.
        super::clients::validate_classifier_response(responses, batch)
            .map_err(|m| super::clients::ClientError::protocol(m, ""))
    })
    .map_err(|e| e.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinedEdge {
    pub src: String,
    pub dst: String,
    pub relation: Relation,
    pub confidence: f64,
}

/// Keeps labelled results at or above `threshold` as directed edges.
/// Opposite directions are independent; a repeated `(src, dst, relation)`
/// keeps its highest confidence. Output is sorted by triple.
pub fn merge_relations(
    results: &[RelationResult],
    threshold: f64,
) -> Result<Vec<MinedEdge>, PipelineError> {
    validate_threshold(threshold)?;
    let mut best: BTreeMap<(&str, &str, Relation), f64> = BTreeMap::new();
    for r in results {
        let Some(relation) = r.label.relation() else {
            continue;
        };
        if r.confidence < threshold || r.pair.src == r.pair.dst {
            continue;
        }
        let slot = best
            .entry((&r.pair.src, &r.pair.dst, relation))
            .or_insert(r.confidence);
        *slot = slot.max(r.confidence);
    }
    Ok(best
        .into_iter()
        .map(|((src, dst, relation), confidence)| MinedEdge {
            src: src.to_string(),
            dst: dst.to_string(),
            relation,
            confidence,
        })
        .collect())
}
