use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    fact_check, select_key_literals, undefended_with, AttackChain, DepthConfig, FactCheckReport,
    FactEntry, GraphIndex, VerificationError,
};
use crate::graph::ArgumentGraph;

/// The whole message when there is nothing to report.
pub const NO_FINDINGS: &str =
    "No findings: no literal is attacked by a fact and no key literal faces an undefended attack.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackConfig {
    pub depth: DepthConfig,
    pub top_j: usize,
}

impl Default for FeedbackConfig {
    fn default() -> Self {
        FeedbackConfig {
            depth: DepthConfig::default(),
            top_j: 5,
        }
    }
}

/// `src` supports `dst`; `depth` is the distance of `src` from the
/// literal whose ancestry this is.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportLink {
    pub src: String,
    pub dst: String,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactCheckedLiteral {
    pub literal: String,
    pub attacking_facts: Vec<FactEntry>,
    /// Support ancestry, truncated at the configured chain depth.
    pub ancestry: Vec<SupportLink>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyLiteralFindings {
    pub literal: String,
    pub chains: Vec<AttackChain>,
    /// Attacked nodes of the chains, sorted.
    pub weak_links: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackReport {
    pub config: FeedbackConfig,
    /// Sorted by literal id.
    pub fact_checked: Vec<FactCheckedLiteral>,
    /// In key-literal rank order.
    pub key_literals: Vec<KeyLiteralFindings>,
    pub corroborations: Vec<FactEntry>,
    /// Text of every id mentioned above.
    pub texts: BTreeMap<String, String>,
}

impl FeedbackReport {
    pub fn is_empty(&self) -> bool {
        self.fact_checked.is_empty() && self.key_literals.iter().all(|k| k.chains.is_empty())
    }

    /// Every `(literal, fact)` attack reported, sorted.
    pub fn fact_attacks(&self) -> Vec<(&str, &str)> {
        let mut out: Vec<(&str, &str)> = self
            .fact_checked
            .iter()
            .flat_map(|l| {
                l.attacking_facts
                    .iter()
                    .map(move |f| (l.literal.as_str(), f.fact.as_str()))
            })
            .collect();
        out.sort();
        out
    }

    pub fn weak_links(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self
            .key_literals
            .iter()
            .flat_map(|k| k.weak_links.iter().map(String::as_str))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Assembles the report from a fact-check and the chains found for each
/// key literal (`chains` in key-literal order).
pub fn build_feedback(
    graph: &ArgumentGraph,
    fact_report: &FactCheckReport,
    chains: Vec<(String, Vec<AttackChain>)>,
    config: FeedbackConfig,
) -> FeedbackReport {
    let index = GraphIndex::new(graph);
    let mut mentioned: Vec<String> = Vec::new();

    let mut fact_checked = Vec::new();
    for (literal, facts) in fact_report.by_literal() {
        let Some(i) = graph.index_of(literal) else {
            continue;
        };
        let ancestry: Vec<SupportLink> = index
            .support_ancestry(i, config.depth.chain_depth)
            .into_iter()
            .map(|(u, depth, next)| SupportLink {
                src: index.id(u).to_string(),
                dst: index.id(next).to_string(),
                depth,
            })
            .collect();
        mentioned.push(literal.to_string());
        mentioned.extend(facts.iter().map(|f| f.fact.clone()));
        mentioned.extend(ancestry.iter().map(|l| l.src.clone()));
        fact_checked.push(FactCheckedLiteral {
            literal: literal.to_string(),
            attacking_facts: facts.into_iter().cloned().collect(),
            ancestry,
        });
    }

    let key_literals: Vec<KeyLiteralFindings> = chains
        .into_iter()
        .map(|(literal, chains)| {
            let mut weak_links: Vec<String> =
                chains.iter().map(|c| c.weak_link().to_string()).collect();
            weak_links.sort();
            weak_links.dedup();
            mentioned.push(literal.clone());
            mentioned.extend(chains.iter().flat_map(|c| c.nodes.iter().cloned()));
            KeyLiteralFindings {
                literal,
                chains,
                weak_links,
            }
        })
        .collect();

    let mut corroborations = fact_report.corroborations.clone();
    corroborations.sort_by(|a, b| (&a.literal, &a.fact).cmp(&(&b.literal, &b.fact)));
    for c in &corroborations {
        mentioned.push(c.literal.clone());
        mentioned.push(c.fact.clone());
    }

    let texts = mentioned
        .into_iter()
        .filter_map(|id| graph.node_by_id(&id).map(|n| (id, n.text.clone())))
        .collect();
    FeedbackReport {
        config,
        fact_checked,
        key_literals,
        corroborations,
        texts,
    }
}

/// Fact-check, key-literal selection and chain search in one call.
pub fn feedback_for(
    graph: &ArgumentGraph,
    config: FeedbackConfig,
) -> Result<FeedbackReport, VerificationError> {
    config.depth.validate()?;
    let keys = if graph.nodes().is_empty() {
        Vec::new()
    } else {
        select_key_literals(graph, config.top_j)?
    };
    let index = GraphIndex::new(graph);
    let chains = keys
        .into_iter()
        .map(|k| {
            let found = undefended_with(&index, &k, config.depth)?;
            Ok((k, found))
        })
        .collect::<Result<_, VerificationError>>()?;
    Ok(build_feedback(graph, &fact_check(graph), chains, config))
}

fn quoted(report: &FeedbackReport, id: &str) -> String {
    match report.texts.get(id) {
        Some(text) => format!("{id} \"{text}\""),
        None => id.to_string(),
    }
}

/// Plain-text critique for an external agent. Deterministic; every report
/// entry appears.
pub fn render_feedback_message(report: &FeedbackReport) -> String {
    if report.is_empty() {
        let mut out = format!("{NO_FINDINGS}\n");
        for c in &report.corroborations {
            writeln!(
                out,
                "Corroborated: {} --supports--> {} (confidence {:.2})",
                c.fact, c.literal, c.confidence
            )
            .unwrap();
        }
        return out;
    }
    let depth = report.config.depth;
    let mut out = String::new();
    let under_attack = report
        .key_literals
        .iter()
        .filter(|k| !k.chains.is_empty())
        .count();
    writeln!(
        out,
        "Feedback: {} literal(s) attacked by facts; {} of {} key literal(s) face undefended attacks within depth {}.",
        report.fact_checked.len(),
        under_attack,
        report.key_literals.len(),
        depth.m
    )
    .unwrap();

    if !report.fact_checked.is_empty() {
        out.push_str("\nFact-checked literals:\n");
        for l in &report.fact_checked {
            writeln!(out, "- {}", quoted(report, &l.literal)).unwrap();
            for f in &l.attacking_facts {
                writeln!(
                    out,
                    "  attacked by {} (confidence {:.2})",
                    quoted(report, &f.fact),
                    f.confidence
                )
                .unwrap();
            }
            if l.ancestry.is_empty() {
                out.push_str("  reasoning chain: none\n");
            } else {
                writeln!(
                    out,
                    "  reasoning chain (truncated at depth {}):",
                    depth.chain_depth
                )
                .unwrap();
                for link in &l.ancestry {
                    writeln!(
                        out,
                        "    [{}] {} --supports--> {}",
                        link.depth, link.src, link.dst
                    )
                    .unwrap();
                }
            }
        }
    }

    if !report.key_literals.is_empty() {
        out.push_str("\nKey literals:\n");
        for k in &report.key_literals {
            writeln!(out, "- {}", quoted(report, &k.literal)).unwrap();
            if k.chains.is_empty() {
                writeln!(out, "  no undefended attacks within depth {}", depth.m).unwrap();
                continue;
            }
            for c in &k.chains {
                writeln!(out, "  undefended: {}", c.arrows()).unwrap();
            }
            writeln!(out, "  weak links: {}", k.weak_links.join(", ")).unwrap();
        }
    }

    if !report.corroborations.is_empty() {
        out.push_str("\nCorroborating facts:\n");
        for c in &report.corroborations {
            writeln!(
                out,
                "- {} --supports--> {} (confidence {:.2})",
                c.fact, c.literal, c.confidence
            )
            .unwrap();
        }
    }

    out.push_str("\nReferenced literals:\n");
    for (id, text) in &report.texts {
        writeln!(out, "  {id}: \"{text}\"").unwrap();
    }
    out
}

/// Metadata for the feedback file header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackMeta {
    pub graph_sha256: String,
    pub config: FeedbackConfig,
    pub timestamp: String,
}

/// The message behind a `---` fenced metadata header.
pub fn render_feedback_file(meta: &FeedbackMeta, message: &str) -> String {
    format!(
        "---\ngraph_sha256: {}\nconfig: m={} chain_depth={} top_j={}\ntimestamp: {}\n---\n\n{}",
        meta.graph_sha256,
        meta.config.depth.m,
        meta.config.depth.chain_depth,
        meta.config.top_j,
        meta.timestamp,
        message
    )
}

/// A line in a checkpoint log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointEntry {
    pub timestamp: String,
    pub graph_sha256: String,
    pub message: String,
}

/// Appends `entry` as one JSON line.
pub fn append_checkpoint(path: &Path, entry: &CheckpointEntry) -> std::io::Result<()> {
    let mut line = serde_json::to_string(entry).map_err(std::io::Error::other)?;
    line.push('\n');
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    file.write_all(line.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::super::tests::graph;
    use super::*;
    use crate::graph::{NodeKind::*, Relation::*};

    #[test]
    fn empty_report_renders_no_findings() {
        let g = graph(
            &[("a", Assumption), ("b", Assumption)],
            &[("b", "a", Support)],
        );
        let report = feedback_for(&g, FeedbackConfig::default()).unwrap();
        assert!(report.is_empty());
        assert_eq!(render_feedback_message(&report), format!("{NO_FINDINGS}\n"));
        let empty = feedback_for(&ArgumentGraph::new(), FeedbackConfig::default()).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn single_fact_attack() {
        let g = graph(
            &[
                ("a", Assumption),
                ("b", Assumption),
                ("c", Assumption),
                ("f", Fact),
            ],
            &[("f", "a", Attack), ("b", "a", Support), ("c", "b", Support)],
        );
        let report = feedback_for(&g, FeedbackConfig::default()).unwrap();
        assert_eq!(report.fact_checked.len(), 1);
        let l = &report.fact_checked[0];
        assert_eq!(l.literal, "a");
        assert_eq!(l.attacking_facts[0].fact, "f");
        assert_eq!(
            l.ancestry,
            vec![
                SupportLink {
                    src: "b".into(),
                    dst: "a".into(),
                    depth: 1
                },
                SupportLink {
                    src: "c".into(),
                    dst: "b".into(),
                    depth: 2
                },
            ]
        );
        let msg = render_feedback_message(&report);
        assert!(msg.contains("\"text of a\""));
        assert!(msg.contains("f --attacks--> a"));
        assert!(msg.contains("attacked by f \"text of f\""));
    }

    #[test]
    fn file_header_and_checkpoint() {
        let meta = FeedbackMeta {
            graph_sha256: "ab".into(),
            config: FeedbackConfig::default(),
            timestamp: "1970-01-01T00:00:00Z".into(),
        };
        let file = render_feedback_file(&meta, "body\n");
        assert!(file.starts_with("---\ngraph_sha256: ab\nconfig: m=3 chain_depth=4 top_j=5\n"));
        assert!(file.ends_with("---\n\nbody\n"));

        let dir = std::env::temp_dir().join(format!("baba-ckpt-{}", std::process::id()));
        let _ = std::fs::remove_file(&dir);
        let entry = CheckpointEntry {
            timestamp: meta.timestamp.clone(),
            graph_sha256: "ab".into(),
            message: "m\n".into(),
        };
        append_checkpoint(&dir, &entry).unwrap();
        append_checkpoint(&dir, &entry).unwrap();
        let text = std::fs::read_to_string(&dir).unwrap();
        std::fs::remove_file(&dir).unwrap();
        let lines: Vec<CheckpointEntry> = text
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(lines, vec![entry.clone(), entry]);
    }
}
