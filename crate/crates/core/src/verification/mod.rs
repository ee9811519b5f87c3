//! Fact-check reports and the refinement feedback loop: key literals,
//! undefended attack chains within depth `m`, weak links and truncated
//! support ancestry.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ArgumentGraph, NodeKind, Relation};

mod feedback;

pub use feedback::{
    append_checkpoint, build_feedback, feedback_for, render_feedback_file, render_feedback_message,
    CheckpointEntry, FactCheckedLiteral, FeedbackConfig, FeedbackMeta, FeedbackReport,
    KeyLiteralFindings, SupportLink, NO_FINDINGS,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerificationError {
    #[error("unknown literal `{0}`")]
    UnknownTarget(String),
    #[error("invalid {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
}

/// One fact → assumption edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactEntry {
    pub literal: String,
    pub fact: String,
    pub confidence: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FactCheckReport {
    /// Attack edges from facts, in graph edge order.
    pub entries: Vec<FactEntry>,
    /// Support edges from facts.
    pub corroborations: Vec<FactEntry>,
}

impl FactCheckReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries grouped by attacked literal; facts sorted by id.
    pub fn by_literal(&self) -> BTreeMap<&str, Vec<&FactEntry>> {
        let mut out: BTreeMap<&str, Vec<&FactEntry>> = BTreeMap::new();
        for e in &self.entries {
            out.entry(&e.literal).or_default().push(e);
        }
        for v in out.values_mut() {
            v.sort_by(|a, b| a.fact.cmp(&b.fact));
        }
        out
    }
}

/// Linear in the edge list; only fact → assumption edges count.
pub fn fact_check(graph: &ArgumentGraph) -> FactCheckReport {
    let nodes = graph.nodes();
    let from_fact = |e: &&crate::graph::Edge| {
        nodes[e.src].kind == NodeKind::Fact && nodes[e.dst].kind == NodeKind::Assumption
    };
    // Counting first keeps large reports from regrowing (and copying)
    // their buffers, which otherwise dominates on big graphs.
    let (mut attacks, mut supports) = (0, 0);
    for e in graph.edges().iter().filter(from_fact) {
        match e.relation {
            Relation::Attack => attacks += 1,
            Relation::Support => supports += 1,
        }
    }
    let mut report = FactCheckReport {
        entries: Vec::with_capacity(attacks),
        corroborations: Vec::with_capacity(supports),
    };
    for e in graph.edges().iter().filter(from_fact) {
        let (src, dst) = (&nodes[e.src], &nodes[e.dst]);
        let entry = FactEntry {
            literal: dst.id.clone(),
            fact: src.id.clone(),
            confidence: e.confidence,
        };
        match e.relation {
            Relation::Attack => report.entries.push(entry),
            Relation::Support => report.corroborations.push(entry),
        }
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthConfig {
    /// Longest attack chain explored, in edges.
    pub m: usize,
    /// Support-ancestry truncation depth.
    pub chain_depth: usize,
}

impl Default for DepthConfig {
    fn default() -> Self {
        DepthConfig {
            m: 3,
            chain_depth: 4,
        }
    }
}

impl DepthConfig {
    pub fn validate(&self) -> Result<(), VerificationError> {
        if self.m == 0 {
            return Err(VerificationError::InvalidConfig {
                field: "m",
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }
}

/// Adjacency over the edges that matter to the semantics: supports
/// between assumptions and attacks into assumptions. Neighbour lists are
/// sorted by node id.
pub(crate) struct GraphIndex<'g> {
    pub graph: &'g ArgumentGraph,
    pub support_in: Vec<Vec<usize>>,
    pub support_out: Vec<Vec<usize>>,
    pub attack_in: Vec<Vec<usize>>,
}

impl<'g> GraphIndex<'g> {
    pub fn new(graph: &'g ArgumentGraph) -> Self {
        let n = graph.nodes().len();
        let mut support_in = vec![Vec::new(); n];
        let mut support_out = vec![Vec::new(); n];
        let mut attack_in = vec![Vec::new(); n];
        let is_assumption = |i: usize| graph.node(i).kind == NodeKind::Assumption;
        for e in graph.edges() {
            if !is_assumption(e.dst) {
                continue;
            }
            match e.relation {
                Relation::Support if is_assumption(e.src) => {
                    support_in[e.dst].push(e.src);
                    support_out[e.src].push(e.dst);
                }
                Relation::Support => {}
                Relation::Attack => attack_in[e.dst].push(e.src),
            }
        }
        let by_id =
            |v: &mut Vec<usize>| v.sort_by(|&a, &b| graph.node(a).id.cmp(&graph.node(b).id));
        support_in.iter_mut().for_each(by_id);
        support_out.iter_mut().for_each(by_id);
        attack_in.iter_mut().for_each(by_id);
        GraphIndex {
            graph,
            support_in,
            support_out,
            attack_in,
        }
    }

    pub fn id(&self, i: usize) -> &'g str {
        &self.graph.node(i).id
    }

    pub fn is_fact(&self, i: usize) -> bool {
        self.graph.node(i).kind == NodeKind::Fact
    }

    /// Backward BFS over support edges from `start`, at most `depth` hops.
    /// Returns `(node, distance, successor towards start)` in BFS order,
    /// excluding `start`.
    pub fn support_ancestry(&self, start: usize, depth: usize) -> Vec<(usize, usize, usize)> {
        let mut seen = vec![false; self.support_in.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([(start, 0)]);
        let mut out = Vec::new();
        while let Some((v, d)) = queue.pop_front() {
            if d == depth {
                continue;
            }
            for &u in &self.support_in[v] {
                if !seen[u] {
                    seen[u] = true;
                    out.push((u, d + 1, v));
                    queue.push_back((u, d + 1));
                }
            }
        }
        out
    }

    /// Whether some node attacks a member of the support closure of `x`.
    /// Facts are never countered.
    pub fn is_countered(&self, x: usize) -> bool {
        if self.is_fact(x) {
            return false;
        }
        let mut seen = vec![false; self.support_out.len()];
        seen[x] = true;
        let mut stack = vec![x];
        while let Some(v) = stack.pop() {
            if !self.attack_in[v].is_empty() {
                return true;
            }
            for &w in &self.support_out[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    }
}

/// Assumptions ranked by how many other assumptions reach them through
/// support edges; ties by id.
pub fn select_key_literals(
    graph: &ArgumentGraph,
    top_j: usize,
) -> Result<Vec<String>, VerificationError> {
    if top_j == 0 {
        return Err(VerificationError::InvalidConfig {
            field: "top_j",
            reason: "must be at least 1".into(),
        });
    }
    let index = GraphIndex::new(graph);
    let mut ranked: Vec<(usize, &str)> = (0..graph.nodes().len())
        .filter(|&i| !index.is_fact(i))
        .map(|i| (index.support_ancestry(i, usize::MAX).len(), index.id(i)))
        .collect();
    ranked.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(b.1)));
    Ok(ranked
        .into_iter()
        .take(top_j)
        .map(|(_, id)| id.to_string())
        .collect())
}

/// An attack followed by support edges, ending at the target.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AttackChain {
    /// `nodes[0]` attacks `nodes[1]`, which supports `nodes[2]`, and so on.
    pub nodes: Vec<String>,
}

impl AttackChain {
    pub fn attacker(&self) -> &str {
        &self.nodes[0]
    }

    /// The attacked node.
    pub fn weak_link(&self) -> &str {
        &self.nodes[1]
    }

    pub fn target(&self) -> &str {
        self.nodes.last().expect("chains have at least two nodes")
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn relations(&self) -> impl Iterator<Item = Relation> + '_ {
        (0..self.len()).map(|i| {
            if i == 0 {
                Relation::Attack
            } else {
                Relation::Support
            }
        })
    }

    pub fn arrows(&self) -> String {
        let mut out = self.nodes[0].clone();
        for (node, rel) in self.nodes[1..].iter().zip(self.relations()) {
            let verb = match rel {
                Relation::Attack => "attacks",
                Relation::Support => "supports",
            };
            out.push_str(&format!(" --{verb}--> {node}"));
        }
        out
    }
}

/// Attacks on `target` or on its support ancestors, with the whole chain at
/// most `depth.m` edges (ancestors also capped at `depth.chain_depth`
/// hops), whose attacker nothing in the graph counters. An attacker is
/// countered when some node attacks it or anything it transitively
/// supports; facts are never countered.
pub fn find_undefended_attacks(
    graph: &ArgumentGraph,
    target: &str,
    depth: DepthConfig,
) -> Result<Vec<AttackChain>, VerificationError> {
    depth.validate()?;
    let index = GraphIndex::new(graph);
    undefended_with(&index, target, depth)
}

pub(crate) fn undefended_with(
    index: &GraphIndex<'_>,
    target: &str,
    depth: DepthConfig,
) -> Result<Vec<AttackChain>, VerificationError> {
    let t = index
        .graph
        .index_of(target)
        .ok_or_else(|| VerificationError::UnknownTarget(target.to_string()))?;
    if index.is_fact(t) {
        return Ok(Vec::new());
    }
    let hops = (depth.m - 1).min(depth.chain_depth);
    let ancestry = index.support_ancestry(t, hops);
    let mut towards: HashMap<usize, usize> = HashMap::new();
    let mut attacked = vec![t];
    for &(u, _, next) in &ancestry {
        towards.insert(u, next);
        attacked.push(u);
    }

    let mut countered: HashMap<usize, bool> = HashMap::new();
    let mut chains = BTreeSet::new();
    for u in attacked {
        for &x in &index.attack_in[u] {
            let hit = *countered.entry(x).or_insert_with(|| index.is_countered(x));
            if hit {
                continue;
            }
            let mut nodes = vec![index.id(x).to_string(), index.id(u).to_string()];
            let mut v = u;
            while let Some(&next) = towards.get(&v) {
                nodes.push(index.id(next).to_string());
                v = next;
            }
            chains.insert(AttackChain { nodes });
        }
    }
    let mut chains: Vec<AttackChain> = chains.into_iter().collect();
    chains.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(chains)
}
