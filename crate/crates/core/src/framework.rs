//! Bipolar assumption-based argumentation frameworks.
//!
//! Every rule has exactly one body element. A rule whose head is an
//! assumption is a support edge (`b <- a`), a rule whose head is a contrary
//! is an attack edge (`contrary(b) <- a`). Facts may only appear as rule
//! bodies and are never members of an assumption set.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ArgumentGraph, NodeKind, Relation};

/// Suffix appended to a node id to mint the id of its contrary.
pub const CONTRARY_SUFFIX: &str = "::contrary";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameworkError {
    #[error("unknown sentence id `{0}`")]
    UnknownId(String),
    #[error("duplicate sentence id `{0}`")]
    DuplicateId(String),
    #[error("sentence id `{0}` uses the reserved contrary suffix")]
    ReservedId(String),
    #[error("contrary `{contrary}` of `{assumption}` collides with another sentence")]
    ContraryCollision {
        assumption: String,
        contrary: String,
    },
    #[error("rule `{head} <- {body}`: {reason}")]
    InvalidRule {
        head: String,
        body: String,
        reason: &'static str,
    },
    #[error("self-loop edge on `{0}`")]
    SelfLoop(String),
    #[error("`{0}` is not an assumption")]
    NotAnAssumption(String),
    #[error("{size} assumptions exceed the brute-force bound of {bound}")]
    OracleBoundExceeded { size: usize, bound: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SentenceKind {
    Assumption,
    Contrary,
    Fact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub id: String,
    pub text: String,
    pub kind: SentenceKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rule {
    pub head: String,
    pub body: String,
}

impl Rule {
    pub fn new(head: impl Into<String>, body: impl Into<String>) -> Self {
        Rule {
            head: head.into(),
            body: body.into(),
        }
    }
}

/// A set of assumption ids. Also used as the extension type.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AssumptionSet(BTreeSet<String>);

pub type Extension = AssumptionSet;

impl AssumptionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.0.contains(id)
    }

    pub fn insert(&mut self, id: impl Into<String>) -> bool {
        self.0.insert(id.into())
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn is_subset(&self, other: &AssumptionSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Size descending, then lexicographic over the sorted member ids.
    pub fn extension_order(&self, other: &Self) -> std::cmp::Ordering {
        other
            .len()
            .cmp(&self.len())
            .then_with(|| self.0.iter().cmp(other.0.iter()))
    }
}

impl<S: Into<String>> FromIterator<S> for AssumptionSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        AssumptionSet(iter.into_iter().map(Into::into).collect())
    }
}

impl fmt::Display for AssumptionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, id) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{id}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Assumption(usize),
    Fact(usize),
    Contrary(usize),
}

/// Immutable framework. Assumptions and facts are kept sorted by id; the
/// position of an assumption in [`BipolarFramework::assumptions`] is its
/// index everywhere else in the crate.
#[derive(Debug, Clone)]
pub struct BipolarFramework {
    assumptions: Vec<Sentence>,
    facts: Vec<Sentence>,
    contrary_ids: Vec<String>,
    rules: Vec<Rule>,
    slots: HashMap<String, Slot>,
    supports: Vec<Vec<usize>>,
    attacks: Vec<Vec<usize>>,
    fact_attacks: Vec<Vec<usize>>,
    fact_supports: Vec<Vec<usize>>,
}

impl BipolarFramework {
    pub fn builder() -> FrameworkBuilder {
        FrameworkBuilder::default()
    }

    pub fn empty() -> Self {
        FrameworkBuilder::default()
            .build()
            .expect("empty framework is valid")
    }

    pub fn assumptions(&self) -> &[Sentence] {
        &self.assumptions
    }

    pub fn facts(&self) -> &[Sentence] {
        &self.facts
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.assumptions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assumptions.is_empty()
    }

    /// The contrary mapping as assumption id -> contrary id.
    pub fn contraries(&self) -> BTreeMap<&str, &str> {
        self.assumptions
            .iter()
            .zip(&self.contrary_ids)
            .map(|(a, c)| (a.id.as_str(), c.as_str()))
            .collect()
    }

    pub fn contrary_of(&self, assumption: &str) -> Result<&str, FrameworkError> {
        let i = self.assumption_index(assumption)?;
        Ok(&self.contrary_ids[i])
    }

    pub fn assumption_index(&self, id: &str) -> Result<usize, FrameworkError> {
        match self.slots.get(id) {
            Some(Slot::Assumption(i)) => Ok(*i),
            Some(_) => Err(FrameworkError::NotAnAssumption(id.to_string())),
            None => Err(FrameworkError::UnknownId(id.to_string())),
        }
    }

    pub fn assumption_id(&self, index: usize) -> &str {
        &self.assumptions[index].id
    }

    pub fn is_fact(&self, id: &str) -> bool {
        matches!(self.slots.get(id), Some(Slot::Fact(_)))
    }

    /// Heads of support rules bodied by assumption `index`.
    pub fn supported_by(&self, index: usize) -> &[usize] {
        &self.supports[index]
    }

    /// Assumptions whose contrary is the head of a rule bodied by `index`.
    pub fn attacked_by(&self, index: usize) -> &[usize] {
        &self.attacks[index]
    }

    /// Whether some fact derives the contrary of assumption `index`.
    pub fn is_fact_attacked(&self, index: usize) -> bool {
        self.fact_attacks.iter().any(|xs| xs.contains(&index))
    }

    /// Per-assumption flag: attacked by at least one fact.
    pub fn fact_attacked_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.len()];
        for targets in &self.fact_attacks {
            for &x in targets {
                mask[x] = true;
            }
        }
        mask
    }

    /// Assumptions supported by fact `fact` (corroborations; not part of closure).
    pub fn fact_supports(&self, fact: usize) -> &[usize] {
        &self.fact_supports[fact]
    }

    pub fn fact_attack_targets(&self, fact: usize) -> &[usize] {
        &self.fact_attacks[fact]
    }

    pub fn to_indices(&self, set: &AssumptionSet) -> Result<Vec<bool>, FrameworkError> {
        let mut mask = vec![false; self.len()];
        for id in set.iter() {
            mask[self.assumption_index(id)?] = true;
        }
        Ok(mask)
    }

    pub fn from_mask(&self, mask: &[bool]) -> AssumptionSet {
        mask.iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| self.assumptions[i].id.clone())
            .collect()
    }

    /// Closure of a membership mask under support rules.
    pub fn close_mask(&self, mask: &mut [bool]) {
        let mut stack: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
        while let Some(a) = stack.pop() {
            for &b in &self.supports[a] {
                if !mask[b] {
                    mask[b] = true;
                    stack.push(b);
                }
            }
        }
    }

    /// Closure of the singleton `{index}` as sorted indices.
    pub fn singleton_closure(&self, index: usize) -> Vec<usize> {
        let mut mask = vec![false; self.len()];
        mask[index] = true;
        self.close_mask(&mut mask);
        (0..mask.len()).filter(|&i| mask[i]).collect()
    }

    /// Smallest superset of `set` closed under support rules.
    pub fn closure(&self, set: &AssumptionSet) -> Result<AssumptionSet, FrameworkError> {
        let mut mask = self.to_indices(set)?;
        self.close_mask(&mut mask);
        Ok(self.from_mask(&mask))
    }

    /// Contrary ids derivable from the closure of `set`.
    pub fn derived_contraries(
        &self,
        set: &AssumptionSet,
    ) -> Result<BTreeSet<String>, FrameworkError> {
        let mut mask = self.to_indices(set)?;
        self.close_mask(&mut mask);
        Ok(mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .flat_map(|(a, _)| self.attacks[a].iter())
            .map(|&x| self.contrary_ids[x].clone())
            .collect())
    }
}

impl PartialEq for BipolarFramework {
    fn eq(&self, other: &Self) -> bool {
        self.assumptions == other.assumptions
            && self.facts == other.facts
            && self.contrary_ids == other.contrary_ids
            && self.rules == other.rules
    }
}

impl Eq for BipolarFramework {}

#[derive(Debug, Default, Clone)]
pub struct FrameworkBuilder {
    assumptions: Vec<Sentence>,
    facts: Vec<Sentence>,
    contraries: BTreeMap<String, String>,
    rules: BTreeSet<Rule>,
}

impl FrameworkBuilder {
    pub fn assumption(mut self, id: impl Into<String>, text: impl Into<String>) -> Self {
        self.assumptions.push(Sentence {
            id: id.into(),
            text: text.into(),
            kind: SentenceKind::Assumption,
        });
        self
    }

    pub fn fact(mut self, id: impl Into<String>, text: impl Into<String>) -> Self {
        self.facts.push(Sentence {
            id: id.into(),
            text: text.into(),
            kind: SentenceKind::Fact,
        });
        self
    }

    /// Overrides the auto-minted contrary id of an assumption.
    pub fn contrary(mut self, assumption: impl Into<String>, contrary: impl Into<String>) -> Self {
        self.contraries.insert(assumption.into(), contrary.into());
        self
    }

    pub fn rule(mut self, head: impl Into<String>, body: impl Into<String>) -> Self {
        self.rules.insert(Rule::new(head, body));
        self
    }

    /// `src` supports `dst`: rule `dst <- src`.
    pub fn support(self, src: &str, dst: &str) -> Self {
        self.rule(dst, src)
    }

    /// `src` attacks `dst`: rule `contrary(dst) <- src`, using the minted contrary.
    pub fn attack(self, src: &str, dst: &str) -> Self {
        let head = format!("{dst}{CONTRARY_SUFFIX}");
        self.rule(head, src)
    }

    pub fn build(self) -> Result<BipolarFramework, FrameworkError> {
        let mut assumptions = self.assumptions;
        let mut facts = self.facts;
        assumptions.sort_by(|a, b| a.id.cmp(&b.id));
        facts.sort_by(|a, b| a.id.cmp(&b.id));

        let mut slots = HashMap::new();
        for (i, s) in assumptions.iter().enumerate() {
            if s.id.ends_with(CONTRARY_SUFFIX) {
                return Err(FrameworkError::ReservedId(s.id.clone()));
            }
            if slots.insert(s.id.clone(), Slot::Assumption(i)).is_some() {
                return Err(FrameworkError::DuplicateId(s.id.clone()));
            }
        }
        for (i, s) in facts.iter().enumerate() {
            if s.id.ends_with(CONTRARY_SUFFIX) {
                return Err(FrameworkError::ReservedId(s.id.clone()));
            }
            if slots.insert(s.id.clone(), Slot::Fact(i)).is_some() {
                return Err(FrameworkError::DuplicateId(s.id.clone()));
            }
        }
        for a in self.contraries.keys() {
            if !matches!(slots.get(a), Some(Slot::Assumption(_))) {
                return Err(FrameworkError::NotAnAssumption(a.clone()));
            }
        }
        let mut contrary_ids = Vec::with_capacity(assumptions.len());
        for (i, s) in assumptions.iter().enumerate() {
            let c = self
                .contraries
                .get(&s.id)
                .cloned()
                .unwrap_or_else(|| format!("{}{CONTRARY_SUFFIX}", s.id));
            if slots.insert(c.clone(), Slot::Contrary(i)).is_some() {
                return Err(FrameworkError::ContraryCollision {
                    assumption: s.id.clone(),
                    contrary: c,
                });
            }
            contrary_ids.push(c);
        }

        let n = assumptions.len();
        let mut supports = vec![Vec::new(); n];
        let mut attacks = vec![Vec::new(); n];
        let mut fact_attacks = vec![Vec::new(); facts.len()];
        let mut fact_supports = vec![Vec::new(); facts.len()];
        let invalid = |r: &Rule, reason| FrameworkError::InvalidRule {
            head: r.head.clone(),
            body: r.body.clone(),
            reason,
        };
        for r in &self.rules {
            let body = *slots
                .get(&r.body)
                .ok_or_else(|| FrameworkError::UnknownId(r.body.clone()))?;
            let head = *slots
                .get(&r.head)
                .ok_or_else(|| FrameworkError::UnknownId(r.head.clone()))?;
            match (body, head) {
                (Slot::Contrary(_), _) => {
                    return Err(invalid(r, "body must be an assumption or a fact"))
                }
                (_, Slot::Fact(_)) => return Err(invalid(r, "facts cannot be rule heads")),
                (Slot::Assumption(a), Slot::Assumption(b)) => supports[a].push(b),
                (Slot::Assumption(a), Slot::Contrary(x)) => attacks[a].push(x),
                (Slot::Fact(f), Slot::Assumption(b)) => fact_supports[f].push(b),
                (Slot::Fact(f), Slot::Contrary(x)) => fact_attacks[f].push(x),
            }
        }
        for v in supports
            .iter_mut()
            .chain(attacks.iter_mut())
            .chain(fact_attacks.iter_mut())
            .chain(fact_supports.iter_mut())
        {
            v.sort_unstable();
            v.dedup();
        }

        Ok(BipolarFramework {
            assumptions,
            facts,
            contrary_ids,
            rules: self.rules.into_iter().collect(),
            slots,
            supports,
            attacks,
            fact_attacks,
            fact_supports,
        })
    }
}

/// An edge that [`from_graph`] refused to translate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DroppedEdge {
    pub src: String,
    pub dst: String,
    pub relation: Relation,
    pub reason: &'static str,
}

#[derive(Debug, Clone)]
pub struct Translation {
    pub framework: BipolarFramework,
    pub dropped: Vec<DroppedEdge>,
}

/// Translates a mined graph: support `a -> b` becomes `b <- a`, attack
/// `a -> b` becomes `contrary(b) <- a`. Edges into facts are dropped.
pub fn from_graph(graph: &ArgumentGraph) -> Result<Translation, FrameworkError> {
    let mut builder = FrameworkBuilder::default();
    for node in graph.nodes() {
        builder = match node.kind {
            NodeKind::Assumption => builder.assumption(&node.id, &node.text),
            NodeKind::Fact => builder.fact(&node.id, &node.text),
        };
    }
    let mut dropped = Vec::new();
    for edge in graph.edges() {
        let src = graph.node(edge.src);
        let dst = graph.node(edge.dst);
        if edge.src == edge.dst {
            return Err(FrameworkError::SelfLoop(src.id.clone()));
        }
        if dst.kind == NodeKind::Fact {
            log::warn!(
                "dropping {} edge {} -> {}: facts only have outgoing edges",
                edge.relation,
                src.id,
                dst.id
            );
            dropped.push(DroppedEdge {
                src: src.id.clone(),
                dst: dst.id.clone(),
                relation: edge.relation,
                reason: "edge into a fact node",
            });
            continue;
        }
        builder = match edge.relation {
            Relation::Support => builder.support(&src.id, &dst.id),
            Relation::Attack => builder.attack(&src.id, &dst.id),
        };
    }
    Ok(Translation {
        framework: builder.build()?,
        dropped,
    })
}

pub mod random {
    //! Seeded random frameworks for property tests and the acceptance suite.

    use rand::Rng;

    use super::{BipolarFramework, FrameworkBuilder};

    #[derive(Debug, Clone, Copy)]
    pub struct RandomSpec {
        pub assumptions: usize,
        pub facts: usize,
        pub support_density: f64,
        pub attack_density: f64,
        pub fact_density: f64,
    }

    pub fn random_framework<R: Rng>(rng: &mut R, spec: RandomSpec) -> BipolarFramework {
        let ids: Vec<String> = (0..spec.assumptions).map(|i| format!("a{i:02}")).collect();
        let mut b = FrameworkBuilder::default();
        for id in &ids {
            b = b.assumption(id, format!("literal {id}"));
        }
        for f in 0..spec.facts {
            b = b.fact(format!("f{f:02}"), format!("fact {f}"));
        }
        for src in &ids {
            for dst in &ids {
                if src == dst {
                    continue;
                }
                if rng.gen_bool(spec.support_density) {
                    b = b.support(src, dst);
                }
                if rng.gen_bool(spec.attack_density) {
                    b = b.attack(src, dst);
                }
            }
        }
        for f in 0..spec.facts {
            let fid = format!("f{f:02}");
            for dst in &ids {
                if rng.gen_bool(spec.fact_density) {
                    b = if rng.gen_bool(0.5) {
                        b.attack(&fid, dst)
                    } else {
                        b.support(&fid, dst)
                    };
                }
            }
        }
        b.build().expect("generated framework is valid")
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::graph::{ArgumentGraph, Node};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn closure_follows_support() {
        assert_eq!(g2().closure(&set(&["c"])).unwrap(), set(&["a", "c"]));
        assert_eq!(g2().closure(&set(&[])).unwrap(), set(&[]));
        assert_eq!(g1().closure(&set(&["a", "b"])).unwrap(), set(&["a", "b"]));
    }

    #[test]
    fn closure_rejects_unknown_ids() {
        assert_eq!(
            g1().closure(&set(&["zzz"])),
            Err(FrameworkError::UnknownId("zzz".into()))
        );
    }

    #[test]
    fn derived_contraries_examples() {
        let expected: BTreeSet<String> = ["a::contrary".to_string()].into();
        assert_eq!(g1().derived_contraries(&set(&["b"])).unwrap(), expected);
        assert!(g1().derived_contraries(&set(&[])).unwrap().is_empty());
        assert!(g2().derived_contraries(&set(&["c"])).unwrap().is_empty());
    }

    #[test]
    fn builder_validates() {
        let dup = BipolarFramework::builder()
            .assumption("a", "")
            .fact("a", "")
            .build();
        assert_eq!(dup.unwrap_err(), FrameworkError::DuplicateId("a".into()));

        let collision = BipolarFramework::builder()
            .assumption("a", "")
            .assumption("b", "")
            .contrary("a", "b")
            .build();
        assert!(matches!(
            collision,
            Err(FrameworkError::ContraryCollision { .. })
        ));

        let fact_head = BipolarFramework::builder()
            .assumption("a", "")
            .fact("f", "")
            .support("a", "f")
            .build();
        assert!(matches!(fact_head, Err(FrameworkError::InvalidRule { .. })));

        let unknown = BipolarFramework::builder()
            .assumption("a", "")
            .support("a", "q")
            .build();
        assert_eq!(unknown.unwrap_err(), FrameworkError::UnknownId("q".into()));
    }

    #[test]
    fn explicit_contraries_are_respected() {
        let f = BipolarFramework::builder()
            .assumption("a", "")
            .assumption("b", "")
            .contrary("a", "not_a")
            .rule("not_a", "b")
            .build()
            .unwrap();
        assert_eq!(f.contrary_of("a").unwrap(), "not_a");
        assert_eq!(f.attacked_by(f.assumption_index("b").unwrap()), &[0]);
    }

    fn graph(nodes: &[(&str, NodeKind)], edges: &[(&str, &str, Relation)]) -> ArgumentGraph {
        let mut g = ArgumentGraph::new();
        for (id, kind) in nodes {
            g.add_node(Node::new(*id, *id, Some(0), *kind)).unwrap();
        }
        for (s, d, r) in edges {
            g.add_edge(s, d, *r, 0.9).unwrap();
        }
        g
    }

    #[test]
    fn from_graph_translates_edges() {
        use NodeKind::*;
        let g = graph(
            &[("a", Assumption), ("b", Assumption)],
            &[("a", "b", Relation::Attack)],
        );
        let t = from_graph(&g).unwrap();
        assert_eq!(t.framework.rules(), &[Rule::new("b::contrary", "a")]);

        let g = graph(
            &[("a", Assumption), ("b", Assumption), ("c", Assumption)],
            &[("c", "a", Relation::Support), ("b", "a", Relation::Attack)],
        );
        assert_eq!(from_graph(&g).unwrap().framework, g2());
    }

    #[test]
    fn from_graph_drops_edges_into_facts() {
        use NodeKind::*;
        let g = graph(
            &[("a", Assumption), ("f", Fact)],
            &[("a", "f", Relation::Attack), ("f", "a", Relation::Attack)],
        );
        let t = from_graph(&g).unwrap();
        assert_eq!(t.dropped.len(), 1);
        assert_eq!(t.dropped[0].src, "a");
        assert_eq!(t.framework.rules().len(), 1);
        assert!(t.framework.is_fact_attacked(0));
        // contraries are minted per assumption node
        assert_eq!(t.framework.contraries().len(), 1);
    }

    fn arb_framework() -> impl Strategy<Value = BipolarFramework> {
        (any::<u64>(), 0usize..=12, 0.0f64..0.4, 0.0f64..0.3).prop_map(|(seed, n, s, a)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random::random_framework(
                &mut rng,
                random::RandomSpec {
                    assumptions: n,
                    facts: 0,
                    support_density: s,
                    attack_density: a,
                    fact_density: 0.0,
                },
            )
        })
    }

    fn subset(f: &BipolarFramework, bits: u32) -> AssumptionSet {
        (0..f.len())
            .filter(|i| bits & (1 << i) != 0)
            .map(|i| f.assumption_id(i).to_string())
            .collect()
    }

    proptest! {
        #[test]
        fn closure_is_extensive_idempotent_monotone(f in arb_framework(), s in any::<u32>(), t in any::<u32>()) {
            let s_set = subset(&f, s);
            let st_set = subset(&f, s | t);
            let cs = f.closure(&s_set).unwrap();
            prop_assert!(s_set.is_subset(&cs));
            prop_assert_eq!(f.closure(&cs).unwrap(), cs.clone());
            prop_assert!(cs.is_subset(&f.closure(&st_set).unwrap()));
        }

        #[test]
        fn closure_distributes_over_union(f in arb_framework(), s in any::<u32>(), t in any::<u32>()) {
            let cs = f.closure(&subset(&f, s)).unwrap();
            let ct = f.closure(&subset(&f, t)).unwrap();
            let union: AssumptionSet = cs.iter().chain(ct.iter()).collect();
            prop_assert_eq!(f.closure(&subset(&f, s | t)).unwrap(), union);
        }

        #[test]
        fn from_graph_rule_audit(seed in any::<u64>(), n in 1usize..10) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = crate::graph::random_graph(&mut rng, n, 2, 0.3);
            let t = from_graph(&g).unwrap();
            prop_assert_eq!(t.framework.rules().len() + t.dropped.len(), g.edges().len());
            let assumptions = g.nodes().iter().filter(|n| n.kind == NodeKind::Assumption).count();
            prop_assert_eq!(t.framework.contraries().len(), assumptions);
        }
    }
}
