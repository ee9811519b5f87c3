//! Operations shared by the command line and the service, so both return
//! the same results for the same inputs.

use std::path::Path;
use std::time::Duration;

use baba::graph::{content_hash, ArgumentGraph};
use baba::pipeline::facts::FactSummary;
use baba::pipeline::{ingest_facts, mine_document, Document, MineConfig, MineReport};
use baba::solver::{solve_k_largest, SolverConfig};
use baba::verification::{
    fact_check, feedback_for, render_feedback_file, render_feedback_message, FactCheckReport,
    FeedbackConfig, FeedbackMeta, FeedbackReport,
};
use baba::{from_graph, Semantics};
use serde::{Deserialize, Serialize};

use crate::clients::Clients;
use crate::error::CliError;
use crate::files::read_input;

/// A graph with its canonical JSON and that JSON's SHA-256.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: ArgumentGraph,
    pub json: String,
    pub sha256: String,
}

impl LoadedGraph {
    pub fn new(graph: ArgumentGraph) -> Self {
        let json = graph.to_json();
        let sha256 = content_hash(json.as_bytes());
        LoadedGraph {
            graph,
            json,
            sha256,
        }
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = read_input(path)?;
        let graph = ArgumentGraph::from_json(&text)
            .map_err(|e| CliError::usage(format!("invalid graph file {}: {e}", path.display())))?;
        Ok(Self::new(graph))
    }
}

fn failed_batches(report: &[baba::pipeline::BatchFailure]) -> Result<(), CliError> {
    if report.is_empty() {
        return Ok(());
    }
    let ids: Vec<String> = report.iter().map(|f| f.batch.to_string()).collect();
    Err(CliError::Client(format!(
        "classifier failed on batch(es) {} after retry: {}",
        ids.join(", "),
        report[0].error
    )))
}

/// Mines a document. Any classifier batch failure is an error, so no
/// partial graph reaches the caller.
pub fn mine(
    text: String,
    format: baba::pipeline::DocFormat,
    clients: &Clients,
    config: &MineConfig,
) -> Result<(LoadedGraph, MineReport), CliError> {
    config.validate()?;
    let doc = Document::new(text, format)?;
    let out = mine_document(&doc, &*clients.extractor, &*clients.classifier, config)?;
    failed_batches(&out.report.failed_batches)?;
    Ok((LoadedGraph::new(out.graph), out.report))
}

#[derive(Debug, Clone, Serialize)]
pub struct FactcheckOutput {
    #[serde(skip)]
    pub graph: LoadedGraph,
    pub graph_sha256: String,
    pub summary: FactSummary,
    pub report: FactCheckReport,
}

pub fn factcheck(
    graph: &ArgumentGraph,
    facts_text: String,
    clients: &Clients,
    config: &MineConfig,
) -> Result<FactcheckOutput, CliError> {
    config.validate()?;
    let doc = Document::markdown(facts_text)?;
    let out = ingest_facts(
        &doc,
        graph,
        &*clients.extractor,
        &*clients.classifier,
        config,
    )?;
    failed_batches(&out.summary.failed_batches)?;
    let loaded = LoadedGraph::new(out.graph);
    Ok(FactcheckOutput {
        report: fact_check(&loaded.graph),
        graph_sha256: loaded.sha256.clone(),
        graph: loaded,
        summary: out.summary,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionEntry {
    pub size: usize,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub graph_sha256: String,
    pub semantics: Semantics,
    pub k: usize,
    pub seed: u64,
    /// False when the timeout cut the search short.
    pub complete: bool,
    pub extensions: Vec<ExtensionEntry>,
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn listing(&self) -> String {
        let mut out = String::new();
        for e in &self.extensions {
            out.push_str(&format!("{{{}}} (size {})\n", e.members.join(", "), e.size));
        }
        if !self.complete {
            out.push_str("(incomplete: solver timed out)\n");
        }
        out
    }
}

pub fn solve(
    loaded: &LoadedGraph,
    k: usize,
    semantics: Semantics,
    timeout: Duration,
    seed: u64,
) -> Result<SolveReport, CliError> {
    let config = SolverConfig {
        k,
        semantics,
        timeout,
        seed,
    };
    config
        .validate()
        .map_err(|_| CliError::usage("invalid k: must be at least 1"))?;
    let translation = from_graph(&loaded.graph)?;
    let outcome = solve_k_largest(&translation.framework, &config)?;
    Ok(SolveReport {
        graph_sha256: loaded.sha256.clone(),
        semantics,
        k,
        seed,
        complete: outcome.complete,
        extensions: outcome
            .extensions
            .iter()
            .map(|e| ExtensionEntry {
                size: e.len(),
                members: e.iter().map(str::to_string).collect(),
            })
            .collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FeedbackOutput {
    pub report: FeedbackReport,
    pub message: String,
    /// The message behind its metadata header, as written to disk.
    pub file: String,
}

pub fn feedback(
    loaded: &LoadedGraph,
    config: FeedbackConfig,
    timestamp: String,
) -> Result<FeedbackOutput, CliError> {
    let report = feedback_for(&loaded.graph, config)?;
    let message = render_feedback_message(&report);
    let file = render_feedback_file(
        &FeedbackMeta {
            graph_sha256: loaded.sha256.clone(),
            config,
            timestamp,
        },
        &message,
    );
    Ok(FeedbackOutput {
        report,
        message,
        file,
    })
}
