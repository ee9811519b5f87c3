//! Writes the bundled corpora and reference graphs to disk.

use std::path::Path;
use std::str::FromStr;

use baba::fixtures::{self, Corpus};
use baba::ArgumentGraph;

use crate::error::CliError;
use crate::files::atomic_write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureSet {
    Risk,
    Debate,
    G1,
    G2,
    G3,
    Depth,
    All,
}

impl FromStr for FixtureSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "risk" => FixtureSet::Risk,
            "debate" => FixtureSet::Debate,
            "g1" => FixtureSet::G1,
            "g2" => FixtureSet::G2,
            "g3" => FixtureSet::G3,
            "depth" => FixtureSet::Depth,
            "all" => FixtureSet::All,
            _ => {
                return Err(format!(
                    "unknown fixture `{s}` (risk, debate, g1, g2, g3, depth, all)"
                ))
            }
        })
    }
}

fn write_corpus(dir: &Path, c: &Corpus) -> Result<Vec<String>, CliError> {
    let mut written = Vec::new();
    let mut put = |name: String, contents: &str| -> Result<(), CliError> {
        atomic_write(&dir.join(&name), contents)?;
        written.push(name);
        Ok(())
    };
    put(format!("{}.md", c.name), &c.document)?;
    let mut relations = serde_json::to_string_pretty(&c.relations).expect("relations serialize");
    relations.push('\n');
    put(format!("{}_relations.json", c.name), &relations)?;
    if let Some(facts) = &c.facts {
        put(format!("{}_facts.md", c.name), facts)?;
    }
    Ok(written)
}

fn write_graph(dir: &Path, name: &str, g: &ArgumentGraph) -> Result<Vec<String>, CliError> {
    let name = format!("{name}.json");
    atomic_write(&dir.join(&name), &g.to_json())?;
    Ok(vec![name])
}

/// Writes `set` into `dir` (created if missing) and returns the file names.
pub fn write_fixtures(dir: &Path, set: FixtureSet) -> Result<Vec<String>, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::usage(format!("cannot create {}: {e}", dir.display())))?;
    let one = |s: FixtureSet| match s {
        FixtureSet::Risk => write_corpus(dir, &fixtures::risk()),
        FixtureSet::Debate => write_corpus(dir, &fixtures::debate()),
        FixtureSet::G1 => write_graph(dir, "g1", &fixtures::g1()),
        FixtureSet::G2 => write_graph(dir, "g2", &fixtures::g2()),
        FixtureSet::G3 => write_graph(dir, "g3", &fixtures::g3()),
        FixtureSet::Depth => write_graph(dir, "depth", &fixtures::depth_graph()),
        FixtureSet::All => unreachable!(),
    };
    match set {
        FixtureSet::All => {
            let mut all = Vec::new();
            for s in [
                FixtureSet::Risk,
                FixtureSet::Debate,
                FixtureSet::G1,
                FixtureSet::G2,
                FixtureSet::G3,
                FixtureSet::Depth,
            ] {
                all.extend(one(s)?);
            }
            Ok(all)
        }
        s => one(s),
    }
}
