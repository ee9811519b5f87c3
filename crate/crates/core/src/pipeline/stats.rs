use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::graph::{ArgumentGraph, NodeKind, Relation};

/// Reduced `attack:support` ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Ratio {
    pub attack: usize,
    pub support: usize,
}

impl Ratio {
    /// `None` when the graph has no edges at all.
    pub fn reduced(attack: usize, support: usize) -> Option<Ratio> {
        let g = gcd(attack, support);
        (g > 0).then(|| Ratio {
            attack: attack / g,
            support: support / g,
        })
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.attack, self.support)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct EdgeCounts {
    pub support: usize,
    pub attack: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub assumptions: usize,
    pub facts: usize,
    pub supports: usize,
    pub attacks: usize,
    /// `None` (undefined) for an edgeless graph.
    pub ratio: Option<Ratio>,
    pub attacks_per_support: Option<f64>,
    pub supports_per_attack: Option<f64>,
    /// Edges by the section of their source; fact sources are counted
    /// under `facts`.
    pub by_section: BTreeMap<String, EdgeCounts>,
}

impl GraphStats {
    pub fn ratio_label(&self) -> String {
        self.ratio
            .map_or_else(|| "undefined (no edges)".to_string(), |r| r.to_string())
    }
}

impl fmt::Display for GraphStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "nodes: {} ({} assumptions, {} facts)",
            self.nodes, self.assumptions, self.facts
        )?;
        writeln!(
            f,
            "edges: {} support, {} attack",
            self.supports, self.attacks
        )?;
        write!(f, "attack:support ratio: {}", self.ratio_label())?;
        if let Some(x) = self.attacks_per_support {
            write!(f, " ({x:.4} attacks per support)")?;
        }
        Ok(())
    }
}

fn section_key(section: Option<usize>) -> String {
    section.map_or_else(|| "facts".to_string(), |s| format!("{s:03}"))
}

pub fn graph_stats(graph: &ArgumentGraph) -> GraphStats {
    let facts = graph
        .nodes()
        .iter()
        .filter(|n| n.kind == NodeKind::Fact)
        .count();
    let mut by_section: BTreeMap<String, EdgeCounts> = BTreeMap::new();
    for e in graph.edges() {
        let counts = by_section
            .entry(section_key(graph.node(e.src).section))
            .or_default();
        match e.relation {
            Relation::Support => counts.support += 1,
            Relation::Attack => counts.attack += 1,
        }
    }
    let supports = graph.count(Relation::Support);
    let attacks = graph.count(Relation::Attack);
    GraphStats {
        nodes: graph.nodes().len(),
        assumptions: graph.nodes().len() - facts,
        facts,
        supports,
        attacks,
        ratio: Ratio::reduced(attacks, supports),
        attacks_per_support: (supports > 0).then(|| attacks as f64 / supports as f64),
        supports_per_attack: (attacks > 0).then(|| supports as f64 / attacks as f64),
        by_section,
    }
}
