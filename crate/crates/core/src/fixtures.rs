//! Bundled synthetic corpora and small graphs.
//!
//! The risk and debate documents carry planted relations that
//! [`MockClassifier`](crate::pipeline::MockClassifier) recognises by exact
//! text, calibrated to attack:support ratios of 1:12 and 1:4. The risk
//! corpus also has a facts document whose contradictions triple the attack
//! count.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{ArgumentGraph, Node, NodeKind, Relation};
use crate::pipeline::clients::{Label, PlantedRelation};
use crate::pipeline::literals::literal_id;

pub struct Corpus {
    pub name: &'static str,
    pub document: String,
    pub facts: Option<String>,
    pub relations: Vec<PlantedRelation>,
}

struct Section {
    heading: &'static str,
    /// Literal sentences, in order of appearance.
    claims: [&'static str; 5],
    /// Neutral sentences, each inserted after the claim at its position.
    filler: &'static [(usize, &'static str)],
}

const RISK_TITLE: &str = "# SWIFT risk assessment: regional utility resilience";

const RISK: [Section; 6] = [
    Section {
        heading: "Power supply",
        claims: [
            "The utility should keep two independent feeds into the main substation.",
            "A second feed should be installed because the current line follows a single corridor.",
            "Backup generators should be tested under full load every month.",
            "Fuel contracts should guarantee delivery within twelve hours because storms close roads.",
            "The control room should hold a printed switching plan because screens fail during outages.",
        ],
        filler: &[
            (0, "The substation serves about forty thousand homes."),
            (2, "Last winter two outages lasted more than six hours."),
        ],
    },
    Section {
        heading: "Water treatment",
        claims: [
            "The treatment plant should stay operable through a three day power loss.",
            "Chlorine stocks should cover two weeks because suppliers ration during shortages.",
            "Pump stations should have portable generator hookups.",
            "Operators should rehearse manual dosing because automation depends on the network.",
            "Water quality alarms should reach two separate duty officers.",
        ],
        filler: &[(0, "The plant treats river water for the whole district.")],
    },
    Section {
        heading: "Supply chain",
        claims: [
            "Critical spares should be stocked locally because overseas lead times exceed three months.",
            "Procurement should qualify a second supplier for every pump model.",
            "Transformer spares should be shared with the neighbouring utility.",
            "Stock levels should be reviewed each quarter because demand patterns shift.",
            "Single-source parts should be flagged in the asset register.",
        ],
        filler: &[(1, "Most spare parts arrive by sea.")],
    },
    Section {
        heading: "Cyber security",
        claims: [
            "Operational networks should be isolated from the office network.",
            "Remote access should require hardware tokens because passwords are routinely phished.",
            "Patches should be staged on a test rig before deployment.",
            "Vendors should connect only through a monitored gateway.",
            "Logs should be kept for a year because intrusions are often found late.",
        ],
        filler: &[(2, "The control system was installed twelve years ago.")],
    },
    Section {
        heading: "Staffing",
        claims: [
            "The utility should maintain a roster of staff trained for emergency operations.",
            "Retired operators should be kept on call because few new hires know the legacy plant.",
            "Shift handovers should follow a written checklist.",
            "Training budgets should be protected because skills decay without practice.",
            "Contractors should be briefed on emergency procedures each year.",
        ],
        filler: &[(0, "Half of the senior operators will retire within five years.")],
    },
    Section {
        heading: "Flooding",
        claims: [
            "The main substation should be protected against a one in two hundred year flood.",
            "Flood barriers should be deployable within four hours because warnings come late.",
            "Critical switchgear should be raised above the recorded flood level.",
            "Drainage around the site should be inspected after every storm.",
            "The flood plan should be coordinated with the county emergency service.",
        ],
        filler: &[(4, "The river reached record height in 2014.")],
    },
];

/// `(section, claim)` coordinates.
type At = (usize, usize);

/// Supports inside every risk section, as `(src claim, dst claim)`.
const RISK_SECTION_SUPPORTS: [(usize, usize); 7] =
    [(1, 0), (2, 0), (3, 0), (4, 0), (2, 1), (3, 1), (4, 3)];
const RISK_CROSS_SUPPORTS: [(At, At); 6] = [
    ((0, 0), (1, 0)),
    ((1, 0), (2, 0)),
    ((2, 0), (3, 0)),
    ((3, 0), (4, 0)),
    ((4, 0), (5, 0)),
    ((0, 4), (1, 2)),
];
/// Two mutual attacks.
const RISK_ATTACKS: [(At, At); 4] = [
    ((2, 2), (2, 4)),
    ((2, 4), (2, 2)),
    ((5, 2), (5, 4)),
    ((5, 4), (5, 2)),
];

const RISK_FACTS: [&str; 7] = [
    "The substation flooded in 2014 because the barrier arrived after the water.",
    "Generator tests were skipped for a year because fuel budgets were cut.",
    "The neighbouring utility refused to share spares because its own stock is short.",
    "The plant stopped for two days in 2019 because a single pump failed.",
    "Monthly generator tests damaged two engines because they ran without cooling.",
    "Phishing caused three breaches last year because staff reused passwords.",
    "The district council meets on the first Monday because its charter says so.",
];
/// `(fact index, attacked claim)`.
const RISK_FACT_ATTACKS: [(usize, At); 8] = [
    (0, (5, 0)),
    (0, (5, 1)),
    (0, (5, 2)),
    (1, (0, 2)),
    (1, (0, 3)),
    (2, (2, 2)),
    (3, (1, 0)),
    (4, (0, 2)),
];
const RISK_FACT_SUPPORTS: [(usize, At); 1] = [(5, (3, 1))];
/// A literal → fact relation the classifier reports but ingestion discards.
const RISK_REVERSE: [(At, usize); 1] = [((3, 4), 5)];

const DEBATE_TITLE: &str = "# Debate: a congestion charge for the city centre";

const DEBATE: [Section; 4] = [
    Section {
        heading: "Proposition opening",
        claims: [
            "The city should introduce a congestion charge for the centre.",
            "Traffic should fall by a fifth because drivers respond to prices.",
            "Revenue should fund new bus routes.",
            "Air quality should improve because idling traffic is the main source of pollution.",
            "Bus journeys should speed up because lanes clear.",
        ],
        filler: &[(0, "Peak traffic has grown every year for a decade.")],
    },
    Section {
        heading: "Opposition opening",
        claims: [
            "The charge should be rejected because it hits low income commuters hardest.",
            "Small shops should expect fewer customers because visitors avoid charged zones.",
            "Public transport should be fixed before drivers are charged.",
            "The scheme should not proceed because camera enforcement is expensive.",
            "Outer suburbs should be consulted because they lack rail links.",
        ],
        filler: &[(2, "Many commuters drive in from villages without stations.")],
    },
    Section {
        heading: "Proposition rebuttal",
        claims: [
            "Low income commuters should get discounts because most already travel by bus.",
            "Shops in charged zones elsewhere should be studied because footfall often rose.",
            "Enforcement costs should be covered within two years because charges are collected daily.",
            "Discount schemes should be simple to apply for.",
            "The first year should be treated as a trial.",
        ],
        filler: &[(1, "Several cities have published ten years of results.")],
    },
    Section {
        heading: "Opposition rebuttal",
        claims: [
            "Discounts should not be relied on because uptake is usually low.",
            "A trial should be avoided because temporary schemes rarely end.",
            "Funding should come from parking levies instead.",
            "The council should publish traffic data before any vote.",
            "Delivery firms should be exempt because goods must reach the centre.",
        ],
        filler: &[(3, "The vote is scheduled for the spring session.")],
    },
];

const DEBATE_SECTION_SUPPORTS: [(usize, usize); 5] = [(1, 0), (2, 0), (3, 0), (4, 0), (4, 2)];
const DEBATE_CROSS_SUPPORTS: [(At, At); 4] = [
    ((2, 0), (0, 0)),
    ((2, 1), (0, 0)),
    ((3, 0), (1, 0)),
    ((3, 1), (1, 0)),
];
const DEBATE_ATTACKS: [(At, At); 6] = [
    ((1, 0), (0, 0)),
    ((1, 2), (0, 0)),
    ((2, 0), (1, 0)),
    ((2, 1), (1, 1)),
    ((2, 2), (1, 3)),
    ((3, 0), (2, 0)),
];

fn render(title: &str, sections: &[Section]) -> String {
    let mut out = format!("{title}\n");
    for s in sections {
        let mut sentences = Vec::new();
        for (i, claim) in s.claims.iter().enumerate() {
            sentences.push(*claim);
            sentences.extend(s.filler.iter().filter(|(at, _)| *at == i).map(|(_, f)| *f));
        }
        out.push_str(&format!("\n## {}\n\n{}\n", s.heading, sentences.join(" ")));
    }
    out
}

fn relation(src: &str, dst: &str, relation: Relation) -> PlantedRelation {
    PlantedRelation {
        src: src.to_string(),
        dst: dst.to_string(),
        relation,
    }
}

fn planted(
    sections: &[Section],
    within: &[(usize, usize)],
    cross: &[(At, At)],
    attacks: &[(At, At)],
) -> Vec<PlantedRelation> {
    let text = |(s, c): At| sections[s].claims[c];
    let mut out = Vec::new();
    for k in 0..sections.len() {
        for &(a, b) in within {
            out.push(relation(text((k, a)), text((k, b)), Relation::Support));
        }
    }
    for &(a, b) in cross {
        out.push(relation(text(a), text(b), Relation::Support));
    }
    for &(a, b) in attacks {
        out.push(relation(text(a), text(b), Relation::Attack));
    }
    out
}

/// Risk assessment corpus: 6 sections of 5 literals, 48 supports and 4
/// attacks (1:12), plus a facts document.
pub fn risk() -> Corpus {
    let mut relations = planted(
        &RISK,
        &RISK_SECTION_SUPPORTS,
        &RISK_CROSS_SUPPORTS,
        &RISK_ATTACKS,
    );
    let claim = |(s, c): At| RISK[s].claims[c];
    for &(f, at) in &RISK_FACT_ATTACKS {
        relations.push(relation(RISK_FACTS[f], claim(at), Relation::Attack));
    }
    for &(f, at) in &RISK_FACT_SUPPORTS {
        relations.push(relation(RISK_FACTS[f], claim(at), Relation::Support));
    }
    for &(at, f) in &RISK_REVERSE {
        relations.push(relation(claim(at), RISK_FACTS[f], Relation::Support));
    }
    let facts = RISK_FACTS
        .iter()
        .map(|f| format!("- {f}\n"))
        .collect::<String>();
    Corpus {
        name: "risk",
        document: render(RISK_TITLE, &RISK),
        facts: Some(format!("# Facts\n\n{facts}")),
        relations,
    }
}

/// Debate corpus: 4 sections of 5 literals, 24 supports and 6 attacks (1:4).
pub fn debate() -> Corpus {
    Corpus {
        name: "debate",
        document: render(DEBATE_TITLE, &DEBATE),
        facts: None,
        relations: planted(
            &DEBATE,
            &DEBATE_SECTION_SUPPORTS,
            &DEBATE_CROSS_SUPPORTS,
            &DEBATE_ATTACKS,
        ),
    }
}

fn fact_id(index: usize) -> String {
    format!("F{:03}", index + 1)
}

/// `(literal id, fact id)` of every planted fact attack in the risk corpus,
/// sorted, as mined with the mock clients.
pub fn risk_fact_attacks() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = RISK_FACT_ATTACKS
        .iter()
        .map(|&(f, (s, c))| (literal_id(s, c), fact_id(f)))
        .collect();
    out.sort();
    out
}

/// `(fact id, literal id)` of the planted corroborations.
pub fn risk_fact_supports() -> Vec<(String, String)> {
    RISK_FACT_SUPPORTS
        .iter()
        .map(|&(f, (s, c))| (fact_id(f), literal_id(s, c)))
        .collect()
}

pub fn risk_reverse_relations() -> usize {
    RISK_REVERSE.len()
}

/// Text of the risk fact that contradicts nothing.
pub fn risk_irrelevant_fact() -> &'static str {
    RISK_FACTS[6]
}

/// A fact the classifier maps to a single attack on a risk literal.
pub fn risk_single_contradiction() -> (&'static str, String) {
    (RISK_FACTS[3], literal_id(1, 0))
}

fn graph(nodes: &[&str], edges: &[(&str, &str, Relation)]) -> ArgumentGraph {
    let mut g = ArgumentGraph::new();
    for id in nodes {
        g.add_node(Node::new(
            *id,
            format!("literal {id}"),
            Some(0),
            NodeKind::Assumption,
        ))
        .expect("fixture ids are unique");
    }
    for (s, d, r) in edges {
        g.add_edge(s, d, *r, 1.0).expect("fixture edges are valid");
    }
    g
}

/// `b` attacks `a`.
pub fn g1() -> ArgumentGraph {
    graph(&["a", "b"], &[("b", "a", Relation::Attack)])
}

/// `c` supports `a`, `b` attacks `a`.
pub fn g2() -> ArgumentGraph {
    graph(
        &["a", "b", "c"],
        &[("c", "a", Relation::Support), ("b", "a", Relation::Attack)],
    )
}

/// `c` attacks `b`, `b` attacks `a`.
pub fn g3() -> ArgumentGraph {
    graph(
        &["a", "b", "c"],
        &[("c", "b", Relation::Attack), ("b", "a", Relation::Attack)],
    )
}

/// Target `t` with one undefended attack chain of each length 1 to 4:
/// `x{k}` attacks the far end of a `k - 1` edge support path into `t`.
pub fn depth_graph() -> ArgumentGraph {
    let mut nodes = vec!["t".to_string()];
    let mut edges = Vec::new();
    for k in 1..=4usize {
        let attacker = format!("x{k}");
        nodes.push(attacker.clone());
        let mut prev = "t".to_string();
        for j in 1..k {
            let id = format!("u{k}{j}");
            nodes.push(id.clone());
            edges.push((id.clone(), prev, Relation::Support));
            prev = id;
        }
        edges.push((attacker, prev, Relation::Attack));
    }
    let nodes: Vec<&str> = nodes.iter().map(String::as_str).collect();
    let edges: Vec<(&str, &str, Relation)> = edges
        .iter()
        .map(|(s, d, r)| (s.as_str(), d.as_str(), *r))
        .collect();
    graph(&nodes, &edges)
}

/// Labelled text pairs for classifier tests.
pub struct SyntheticPairs {
    pub pairs: Vec<(String, String)>,
    pub labels: Vec<Label>,
    pub planted: Vec<PlantedRelation>,
}

/// `n` pairs (a multiple of 5) planted exactly 40% support, 40% none and
/// 20% attack, shuffled by `seed`.
pub fn synthetic_relation_corpus(n: usize, seed: u64) -> SyntheticPairs {
    assert!(n.is_multiple_of(5), "n must be a multiple of 5");
    let mut labels: Vec<Label> = std::iter::repeat_n(Label::Support, 2 * n / 5)
        .chain(std::iter::repeat_n(Label::None, 2 * n / 5))
        .chain(std::iter::repeat_n(Label::Attack, n / 5))
        .collect();
    labels.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let pairs: Vec<(String, String)> = (0..n)
        .map(|i| (format!("premise number {i}"), format!("claim number {i}")))
        .collect();
    let planted = pairs
        .iter()
        .zip(&labels)
        .filter_map(|((a, b), l)| l.relation().map(|r| relation(a, b, r)))
        .collect();
    SyntheticPairs {
        pairs,
        labels,
        planted,
    }
}
