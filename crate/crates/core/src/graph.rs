//! Mined argument graphs and their JSON interchange file.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Current interchange format version.
pub const GRAPH_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge {src} -> {dst} ({relation})")]
    DuplicateEdge {
        src: String,
        dst: String,
        relation: Relation,
    },
    #[error("confidence {0} outside [0, 1]")]
    Confidence(f64),
    #[error("graph file has no `version` field")]
    MissingVersion,
    #[error("unsupported graph file version {0} (expected {GRAPH_FORMAT_VERSION})")]
    UnsupportedVersion(u64),
    #[error("malformed graph file: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Assumption,
    Fact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Support,
    Attack,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Support => "support",
            Relation::Attack => "attack",
        })
    }
}

impl FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "support" => Ok(Relation::Support),
            "attack" => Ok(Relation::Attack),
            other => Err(format!("unknown relation `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub text: String,
    /// Section index in the source document; `None` for facts.
    pub section: Option<usize>,
    pub kind: NodeKind,
}

impl Node {
    pub fn new(
        id: impl Into<String>,
        text: impl Into<String>,
        section: Option<usize>,
        kind: NodeKind,
    ) -> Self {
        Node {
            id: id.into(),
            text: text.into(),
            section,
            kind,
        }
    }
}

/// Edge between node positions in [`ArgumentGraph::nodes`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub relation: Relation,
    pub confidence: f64,
}

/// Directed support/attack graph. No self-loops, no duplicate
/// `(src, dst, relation)` triples, every endpoint exists.
#[derive(Debug, Clone, Default)]
pub struct ArgumentGraph {
    nodes: Vec<Node>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    triples: HashSet<(usize, usize, Relation)>,
}

impl ArgumentGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, index: usize) -> &Node {
        &self.nodes[index]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn node_by_id(&self, id: &str) -> Option<&Node> {
        self.index_of(id).map(|i| &self.nodes[i])
    }

    pub fn add_node(&mut self, node: Node) -> Result<usize, GraphError> {
        if self.index.contains_key(&node.id) {
            return Err(GraphError::DuplicateNode(node.id));
        }
        let i = self.nodes.len();
        self.index.insert(node.id.clone(), i);
        self.nodes.push(node);
        Ok(i)
    }

    /// Adds an edge. Returns `false` if the same triple already exists.
    pub fn add_edge(
        &mut self,
        src: &str,
        dst: &str,
        relation: Relation,
        confidence: f64,
    ) -> Result<bool, GraphError> {
        let s = self
            .index_of(src)
            .ok_or_else(|| GraphError::UnknownNode(src.to_string()))?;
        let d = self
            .index_of(dst)
            .ok_or_else(|| GraphError::UnknownNode(dst.to_string()))?;
        if s == d {
            return Err(GraphError::SelfLoop(src.to_string()));
        }
        if !(0.0..=1.0).contains(&confidence) {
            return Err(GraphError::Confidence(confidence));
        }
        if !self.triples.insert((s, d, relation)) {
            return Ok(false);
        }
        self.edges.push(Edge {
            src: s,
            dst: d,
            relation,
            confidence,
        });
        Ok(true)
    }

    pub fn count(&self, relation: Relation) -> usize {
        self.edges.iter().filter(|e| e.relation == relation).count()
    }

    /// Copy with nodes sorted by id and edges by `(src id, dst id, relation)`.
    pub fn canonical(&self) -> ArgumentGraph {
        let mut order: Vec<usize> = (0..self.nodes.len()).collect();
        order.sort_by(|&a, &b| self.nodes[a].id.cmp(&self.nodes[b].id));
        let mut out = ArgumentGraph::new();
        for &i in &order {
            out.add_node(self.nodes[i].clone())
                .expect("ids are already unique");
        }
        let mut edges: Vec<&Edge> = self.edges.iter().collect();
        edges.sort_by(|a, b| {
            (&self.nodes[a.src].id, &self.nodes[a.dst].id, a.relation).cmp(&(
                &self.nodes[b.src].id,
                &self.nodes[b.dst].id,
                b.relation,
            ))
        });
        for e in edges {
            out.add_edge(
                &self.nodes[e.src].id,
                &self.nodes[e.dst].id,
                e.relation,
                e.confidence,
            )
            .expect("edges are already valid");
        }
        out
    }

    pub fn to_file(&self) -> GraphFile {
        let g = self.canonical();
        GraphFile {
            version: GRAPH_FORMAT_VERSION,
            nodes: g.nodes.clone(),
            edges: g
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    src: g.nodes[e.src].id.clone(),
                    dst: g.nodes[e.dst].id.clone(),
                    relation: e.relation,
                    confidence: e.confidence,
                })
                .collect(),
        }
    }

    /// Canonical pretty-printed JSON, newline terminated.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("graph serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<ArgumentGraph, GraphError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        match value.get("version") {
            None => return Err(GraphError::MissingVersion),
            Some(v) => match v.as_u64() {
                Some(v) if v == GRAPH_FORMAT_VERSION as u64 => {}
                Some(v) => return Err(GraphError::UnsupportedVersion(v)),
                None => return Err(GraphError::MissingVersion),
            },
        }
        let file: GraphFile = serde_json::from_value(value)?;
        file.into_graph()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub src: String,
    pub dst: String,
    pub relation: Relation,
    pub confidence: f64,
}

/// The versioned interchange document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub version: u32,
    pub nodes: Vec<Node>,
    pub edges: Vec<EdgeRecord>,
}

impl GraphFile {
    pub fn into_graph(self) -> Result<ArgumentGraph, GraphError> {
        let mut g = ArgumentGraph::new();
        for n in self.nodes {
            g.add_node(n)?;
        }
        for e in self.edges {
            if !g.add_edge(&e.src, &e.dst, e.relation, e.confidence)? {
                return Err(GraphError::DuplicateEdge {
                    src: e.src,
                    dst: e.dst,
                    relation: e.relation,
                });
            }
        }
        Ok(g)
    }
}

/// Hex SHA-256 of a graph file's bytes.
pub fn content_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Random graph with `assumptions` literals, three per section, plus
/// `facts` facts; each ordered pair gets an edge with probability `density`.
pub fn random_graph<R: rand::Rng>(
    rng: &mut R,
    assumptions: usize,
    facts: usize,
    density: f64,
) -> ArgumentGraph {
    let mut g = ArgumentGraph::new();
    for i in 0..assumptions {
        g.add_node(Node::new(
            format!("L{i:03}"),
            format!("literal {i}"),
            Some(i / 3),
            NodeKind::Assumption,
        ))
        .unwrap();
    }
    for i in 0..facts {
        g.add_node(Node::new(
            format!("F{i:03}"),
            format!("fact {i}"),
            None,
            NodeKind::Fact,
        ))
        .unwrap();
    }
    let ids: Vec<String> = g.nodes().iter().map(|n| n.id.clone()).collect();
    for s in &ids {
        for d in &ids {
            if s != d && rng.gen_bool(density) {
                let rel = if rng.gen_bool(0.7) {
                    Relation::Support
                } else {
                    Relation::Attack
                };
                g.add_edge(s, d, rel, 0.5 + rng.gen::<f64>() / 2.0).unwrap();
            }
        }
    }
    g
}
