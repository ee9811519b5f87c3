use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::classify::{classify_pairs, merge_relations, BatchFailure, RelationResult};
use super::clients::{ClassifierClient, ExtractorClient};
use super::literals::extract_literals;
use super::pairs::OrderedPair;
use super::sections::{split_sections, Document};
use super::{MineConfig, PipelineError};
use crate::graph::{ArgumentGraph, Node, NodeKind};

#[derive(Debug, Clone)]
pub struct FactIngestion {
    pub graph: ArgumentGraph,
    pub summary: FactSummary,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FactSummary {
    /// Fact ids mined from the document, in order; includes facts whose
    /// text was already in the graph.
    pub facts: Vec<String>,
    pub new_facts: usize,
    pub edges_added: usize,
    /// Labelled assumption → fact results, which are never kept.
    pub discarded_reverse: usize,
    pub dropped_spans: usize,
    pub requests: usize,
    pub failed_batches: Vec<BatchFailure>,
}

fn fact_number(id: &str) -> Option<usize> {
    id.strip_prefix('F')?.parse().ok()
}

/// Mines `facts_doc` with the body-text extractor and adds each literal as a
/// fact node. Every (fact, assumption) pair is classified in both
/// directions, but only fact → assumption edges are added: facts never
/// receive edges. Fact-fact pairs are never generated.
pub fn ingest_facts(
    facts_doc: &Document,
    graph: &ArgumentGraph,
    extractor: &dyn ExtractorClient,
    classifier: &dyn ClassifierClient,
    config: &MineConfig,
) -> Result<FactIngestion, PipelineError> {
    config.validate()?;
    let mut graph = graph.clone();
    let mut summary = FactSummary::default();

    let mut by_text: HashMap<String, String> = graph
        .nodes()
        .iter()
        .filter(|n| n.kind == NodeKind::Fact)
        .map(|n| (n.text.clone(), n.id.clone()))
        .collect();
    let mut next = graph
        .nodes()
        .iter()
        .filter_map(|n| fact_number(&n.id))
        .max()
        .map_or(1, |n| n + 1);

    let mut facts = BTreeSet::new();
    for section in split_sections(facts_doc, config.max_chars)? {
        let extraction = extract_literals(&section, extractor)?;
        summary.dropped_spans += extraction.dropped;
        for literal in extraction.literals {
            let id = match by_text.get(&literal.text) {
                Some(id) => id.clone(),
                None => {
                    let mut id = format!("F{next:03}");
                    while graph.index_of(&id).is_some() {
                        next += 1;
                        id = format!("F{next:03}");
                    }
                    next += 1;
                    graph.add_node(Node::new(
                        id.clone(),
                        literal.text.clone(),
                        None,
                        NodeKind::Fact,
                    ))?;
                    by_text.insert(literal.text, id.clone());
                    summary.new_facts += 1;
                    id
                }
            };
            if facts.insert(id.clone()) {
                summary.facts.push(id);
            }
        }
    }

    let assumptions: Vec<&Node> = graph
        .nodes()
        .iter()
        .filter(|n| n.kind == NodeKind::Assumption)
        .collect();
    let mut pairs = Vec::new();
    for f in &summary.facts {
        for a in &assumptions {
            pairs.push(OrderedPair::new(f.clone(), a.id.clone()));
            pairs.push(OrderedPair::new(a.id.clone(), f.clone()));
        }
    }
    let texts: HashMap<&str, &str> = graph
        .nodes()
        .iter()
        .map(|n| (n.id.as_str(), n.text.as_str()))
        .collect();
    let outcome = classify_pairs(&pairs, &texts, classifier, &config.classify)?;
    summary.requests = outcome.requests;
    summary.failed_batches = outcome.failures;

    let (forward, reverse): (Vec<RelationResult>, Vec<RelationResult>) = outcome
        .results
        .into_iter()
        .partition(|r| facts.contains(&r.pair.src));
    summary.discarded_reverse = merge_relations(&reverse, config.threshold)?.len();
    if summary.discarded_reverse > 0 {
        log::warn!(
            "discarded {} assumption -> fact relation(s): facts are unattackable",
            summary.discarded_reverse
        );
    }
    for e in merge_relations(&forward, config.threshold)? {
        if graph.add_edge(&e.src, &e.dst, e.relation, e.confidence)? {
            summary.edges_added += 1;
        }
    }
    Ok(FactIngestion { graph, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Relation;
    use crate::pipeline::clients::{MockClassifier, MockExtractor, PlantedRelation};

    fn base() -> ArgumentGraph {
        let mut g = ArgumentGraph::new();
        for (id, text) in [
            ("a", "We should expand the port."),
            ("b", "Trade should grow."),
        ] {
            g.add_node(Node::new(id, text, Some(0), NodeKind::Assumption))
                .unwrap();
        }
        g.add_edge("b", "a", Relation::Support, 0.9).unwrap();
        g
    }

    fn classifier() -> MockClassifier {
        MockClassifier::new().with_planted([
            PlantedRelation {
                src: "The port is full because ships wait for weeks.".into(),
                dst: "We should expand the port.".into(),
                relation: Relation::Attack,
            },
            PlantedRelation {
                src: "Trade should grow.".into(),
                dst: "The port is full because ships wait for weeks.".into(),
                relation: Relation::Support,
            },
        ])
    }

    #[test]
    fn contradicting_fact_adds_one_attack() {
        let doc = Document::markdown("The port is full because ships wait for weeks.").unwrap();
        let out = ingest_facts(
            &doc,
            &base(),
            &MockExtractor::default(),
            &classifier(),
            &MineConfig::default(),
        )
        .unwrap();
        assert_eq!(out.summary.facts, vec!["F001"]);
        assert_eq!(out.summary.edges_added, 1);
        assert_eq!(out.summary.discarded_reverse, 1);
        let g = &out.graph;
        assert_eq!(g.count(Relation::Attack), 1);
        let f = g.index_of("F001").unwrap();
        assert!(g.edges().iter().all(|e| e.dst != f));
        assert!(g
            .edges()
            .iter()
            .any(|e| e.src == f && g.node(e.dst).id == "a"));
    }

    #[test]
    fn unrelated_fact_is_isolated() {
        let doc = Document::markdown("Tides rise because of the moon.").unwrap();
        let before = base();
        let out = ingest_facts(
            &doc,
            &before,
            &MockExtractor::default(),
            &classifier(),
            &MineConfig::default(),
        )
        .unwrap();
        assert_eq!(out.graph.nodes().len(), before.nodes().len() + 1);
        assert_eq!(out.graph.edges().len(), before.edges().len());
    }

    #[test]
    fn repeated_ingestion_reuses_fact_ids() {
        let doc = Document::markdown("The port is full because ships wait for weeks.").unwrap();
        let cfg = MineConfig::default();
        let once = ingest_facts(
            &doc,
            &base(),
            &MockExtractor::default(),
            &classifier(),
            &cfg,
        )
        .unwrap()
        .graph;
        let twice =
            ingest_facts(&doc, &once, &MockExtractor::default(), &classifier(), &cfg).unwrap();
        assert_eq!(twice.summary.new_facts, 0);
        assert_eq!(twice.summary.edges_added, 0);
        assert_eq!(twice.graph.to_json(), once.to_json());

        let more = Document::markdown("Tides rise because of the moon.").unwrap();
        let third =
            ingest_facts(&more, &once, &MockExtractor::default(), &classifier(), &cfg).unwrap();
        assert_eq!(third.summary.facts, vec!["F002"]);
    }
}
