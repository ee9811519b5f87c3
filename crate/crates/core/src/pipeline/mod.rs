//! Document → argument graph: sectioning, literal extraction, pair
//! generation, relation classification, edge assembly and fact ingestion.

use std::path::PathBuf;

use thiserror::Error;

use crate::graph::{ArgumentGraph, GraphError, Node, NodeKind};

pub mod bieo;
pub mod classify;
pub mod clients;
pub mod facts;
pub mod literals;
pub mod pairs;
pub mod sections;
pub mod stats;

pub use classify::{
    classify_pairs, merge_relations, BatchFailure, ClassifyOptions, ClassifyOutcome, MinedEdge,
    RelationResult,
};
pub use clients::{
    ClassifierClient, ClientError, ExtractorClient, Label, MockClassifier, MockExtractor,
    PlantedRelation,
};
pub use facts::{ingest_facts, FactIngestion};
pub use literals::{extract_literals, Extraction, LiteralSpan};
pub use pairs::{generate_pairs, OrderedPair, WindowMode};
pub use sections::{split_sections, DocFormat, Document, Section};
pub use stats::{graph_stats, GraphStats};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("document is empty")]
    EmptyDocument,
    #[error("invalid {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("extractor failed on section {section}: {source}")]
    Extractor { section: usize, source: ClientError },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MineConfig {
    pub max_chars: usize,
    pub window: WindowMode,
    pub threshold: f64,
    pub classify: ClassifyOptions,
}

impl Default for MineConfig {
    fn default() -> Self {
        MineConfig {
            max_chars: 1200,
            window: WindowMode::Window(1),
            threshold: 0.5,
            classify: ClassifyOptions::default(),
        }
    }
}

impl MineConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.max_chars < sections::MIN_SECTION_CHARS {
            return Err(PipelineError::InvalidConfig {
                field: "max_chars",
                reason: format!(
                    "must be at least {}, got {}",
                    sections::MIN_SECTION_CHARS,
                    self.max_chars
                ),
            });
        }
        classify::validate_threshold(self.threshold)?;
        self.classify.validate()
    }
}

/// Counters from one mining run.
#[derive(Debug, Clone, Default, PartialEq, serde::Serialize)]
pub struct MineReport {
    pub sections: usize,
    pub literals: usize,
    pub dropped_spans: usize,
    pub pairs: usize,
    pub requests: usize,
    pub failed_batches: Vec<BatchFailure>,
}

#[derive(Debug, Clone)]
pub struct MineOutcome {
    pub graph: ArgumentGraph,
    pub report: MineReport,
}

/// Runs the whole pipeline over one document. Classifier failures are
/// fail-open (see [`classify_pairs`]) and listed in the report; callers
/// that must not persist partial graphs check `report.failed_batches`.
pub fn mine_document(
    doc: &Document,
    extractor: &dyn ExtractorClient,
    classifier: &dyn ClassifierClient,
    config: &MineConfig,
) -> Result<MineOutcome, PipelineError> {
    config.validate()?;
    let sections = split_sections(doc, config.max_chars)?;
    let mut literals = Vec::new();
    let mut dropped = 0;
    for section in &sections {
        let extraction = extract_literals(section, extractor)?;
        dropped += extraction.dropped;
        literals.extend(extraction.literals);
    }

    let pairs: Vec<OrderedPair> = generate_pairs(&literals, sections.len(), config.window)
        .into_iter()
        .collect();
    let texts = literals
        .iter()
        .map(|l| (l.id.as_str(), l.text.as_str()))
        .collect();
    let outcome = classify_pairs(&pairs, &texts, classifier, &config.classify)?;

    let mut graph = ArgumentGraph::new();
    for l in &literals {
        graph.add_node(Node::new(
            l.id.clone(),
            l.text.clone(),
            Some(l.section),
            NodeKind::Assumption,
        ))?;
    }
    for e in merge_relations(&outcome.results, config.threshold)? {
        graph.add_edge(&e.src, &e.dst, e.relation, e.confidence)?;
    }

    Ok(MineOutcome {
        graph,
        report: MineReport {
            sections: sections.len(),
            literals: literals.len(),
            dropped_spans: dropped,
            pairs: pairs.len(),
            requests: outcome.requests,
            failed_batches: outcome.failures,
        },
    })
}
