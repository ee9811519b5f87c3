use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::literals::LiteralSpan;

/// Which sections' literals are paired with each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowMode {
    WithinSection,
    /// Sections `k - n ..= k + n` around each section `k`.
    Window(usize),
    AllSections,
}

impl fmt::Display for WindowMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowMode::WithinSection => f.write_str("within"),
            WindowMode::Window(n) => write!(f, "window:{n}"),
            WindowMode::AllSections => f.write_str("all"),
        }
    }
}

impl FromStr for WindowMode {
    type Err = String;

    /// `within`, `all`, or `window:N`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "within" | "within-section" => Ok(WindowMode::WithinSection),
            "all" | "all-sections" => Ok(WindowMode::AllSections),
            _ => s
                .strip_prefix("window:")
                .and_then(|n| n.parse().ok())
                .map(WindowMode::Window)
                .ok_or_else(|| format!("expected `within`, `all` or `window:N`, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrderedPair {
    pub src: String,
    pub dst: String,
}

impl OrderedPair {
    pub fn new(src: impl Into<String>, dst: impl Into<String>) -> Self {
        OrderedPair {
            src: src.into(),
            dst: dst.into(),
        }
    }
}

/// All ordered pairs of distinct literals that share a window. For each
/// section `k` every pair among the literals of sections `k-n ..= k+n`
/// (clamped) is taken; the set removes the overlaps between windows.
pub fn generate_pairs(
    literals: &[LiteralSpan],
    section_count: usize,
    mode: WindowMode,
) -> BTreeSet<OrderedPair> {
    let sections = literals
        .iter()
        .map(|l| l.section + 1)
        .max()
        .unwrap_or(0)
        .max(section_count);
    let mut by_section: Vec<Vec<&str>> = vec![Vec::new(); sections];
    for l in literals {
        by_section[l.section].push(&l.id);
    }
    let radius = match mode {
        WindowMode::WithinSection => 0,
        WindowMode::Window(n) => n.min(sections),
        WindowMode::AllSections => sections,
    };

    let mut pairs = BTreeSet::new();
    for k in 0..sections {
        let lo = k.saturating_sub(radius);
        let hi = (k + radius).min(sections.saturating_sub(1));
        let window: Vec<&str> = by_section[lo..=hi].iter().flatten().copied().collect();
        for &a in &window {
            for &b in &window {
                if a != b {
                    pairs.insert(OrderedPair::new(a, b));
                }
            }
        }
        if radius >= sections {
            break;
        }
    }
    pairs
}
