//! Reference semantics, evaluated directly from the definitions.
//!
//! This is the correctness oracle for the SAT solver, so nothing here goes
//! through the attack matrix or the clause encoding.
//!
//! Facts behave as always-derived attackers: a fact-attacked assumption can
//! never sit in a conflict-free set, is never defended, and counts as
//! attacked when checking counter-attacks and stable totality. Defence is
//! lifted through closure: an attacker `t` is countered when some member
//! of `closure({t})` is attacked.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::framework::{AssumptionSet, BipolarFramework, Extension, FrameworkError};

/// Default upper bound on assumptions for exhaustive enumeration.
pub const ORACLE_BOUND: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    Admissible,
    Preferred,
    Complete,
    Stable,
}

impl Semantics {
    pub const ALL: [Semantics; 4] = [
        Semantics::Admissible,
        Semantics::Preferred,
        Semantics::Complete,
        Semantics::Stable,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Semantics::Admissible => "admissible",
            Semantics::Preferred => "preferred",
            Semantics::Complete => "complete",
            Semantics::Stable => "stable",
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Semantics::ALL
            .into_iter()
            .find(|sem| sem.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown semantics `{s}`"))
    }
}

/// Per-set evaluation state: closure of the set and what it attacks.
struct View<'f> {
    f: &'f BipolarFramework,
    fact_attacked: Vec<bool>,
    closed: Vec<bool>,
    attacked: Vec<bool>,
}

impl<'f> View<'f> {
    fn new(f: &'f BipolarFramework, mask: &[bool]) -> Self {
        let mut closed = mask.to_vec();
        f.close_mask(&mut closed);
        let mut attacked = vec![false; f.len()];
        for a in (0..f.len()).filter(|&a| closed[a]) {
            for &x in f.attacked_by(a) {
                attacked[x] = true;
            }
        }
        View {
            f,
            fact_attacked: f.fact_attacked_mask(),
            closed,
            attacked,
        }
    }

    fn defeated(&self, w: usize) -> bool {
        self.attacked[w] || self.fact_attacked[w]
    }

    fn conflict_free(&self) -> bool {
        (0..self.f.len()).all(|y| !self.closed[y] || !self.defeated(y))
    }

    /// Every singleton attacker of `x` has some closure member defeated.
    fn defends(&self, x: usize) -> bool {
        if self.fact_attacked[x] {
            return false;
        }
        (0..self.f.len()).all(|t| {
            let cl = self.f.singleton_closure(t);
            let t_attacks_x = cl.iter().any(|&a| self.f.attacked_by(a).contains(&x));
            !t_attacks_x || cl.iter().any(|&w| self.defeated(w))
        })
    }

    fn attacks_closure_of(&self, x: usize) -> bool {
        self.f
            .singleton_closure(x)
            .into_iter()
            .any(|w| self.defeated(w))
    }
}

fn is_closed(mask: &[bool], view: &View<'_>) -> bool {
    mask == view.closed.as_slice()
}

/// Whether the closure of `set` derives the contrary of `x`.
pub fn attacks(f: &BipolarFramework, set: &AssumptionSet, x: &str) -> Result<bool, FrameworkError> {
    let x = f.assumption_index(x)?;
    let mask = f.to_indices(set)?;
    Ok(View::new(f, &mask).attacked[x])
}

pub fn is_conflict_free(f: &BipolarFramework, set: &AssumptionSet) -> Result<bool, FrameworkError> {
    let mask = f.to_indices(set)?;
    Ok(View::new(f, &mask).conflict_free())
}

pub fn defends(f: &BipolarFramework, set: &AssumptionSet, x: &str) -> Result<bool, FrameworkError> {
    let x = f.assumption_index(x)?;
    let mask = f.to_indices(set)?;
    Ok(View::new(f, &mask).defends(x))
}

fn admissible_mask(f: &BipolarFramework, mask: &[bool]) -> bool {
    let view = View::new(f, mask);
    is_closed(mask, &view)
        && view.conflict_free()
        && (0..f.len()).filter(|&x| mask[x]).all(|x| view.defends(x))
}

fn satisfies_mask(f: &BipolarFramework, mask: &[bool], sem: Semantics) -> bool {
    let view = View::new(f, mask);
    match sem {
        Semantics::Admissible => admissible_mask(f, mask),
        Semantics::Complete => {
            admissible_mask(f, mask) && (0..f.len()).all(|x| mask[x] || !view.defends(x))
        }
        Semantics::Stable => {
            is_closed(mask, &view)
                && view.conflict_free()
                && (0..f.len()).all(|x| mask[x] || view.attacks_closure_of(x))
        }
        Semantics::Preferred => unreachable!("preferred is checked against supersets"),
    }
}

fn no_admissible_strict_superset(f: &BipolarFramework, mask: &[bool]) -> bool {
    let outside: Vec<usize> = (0..f.len()).filter(|&x| !mask[x]).collect();
    let mut candidate = mask.to_vec();
    for bits in 1u64..(1u64 << outside.len()) {
        for (j, &x) in outside.iter().enumerate() {
            candidate[x] = bits & (1 << j) != 0;
        }
        if admissible_mask(f, &candidate) {
            return false;
        }
    }
    true
}

pub fn satisfies(
    f: &BipolarFramework,
    set: &AssumptionSet,
    sem: Semantics,
) -> Result<bool, FrameworkError> {
    let mask = f.to_indices(set)?;
    if sem != Semantics::Preferred {
        return Ok(satisfies_mask(f, &mask, sem));
    }
    if !admissible_mask(f, &mask) {
        return Ok(false);
    }
    let outside = f.len() - set.len();
    if outside > ORACLE_BOUND {
        return Err(FrameworkError::OracleBoundExceeded {
            size: outside,
            bound: ORACLE_BOUND,
        });
    }
    Ok(no_admissible_strict_superset(f, &mask))
}

pub fn enumerate_bruteforce(
    f: &BipolarFramework,
    sem: Semantics,
) -> Result<Vec<Extension>, FrameworkError> {
    enumerate_bruteforce_bounded(f, sem, ORACLE_BOUND)
}

/// Exhaustive 2^n scan. Output is sorted by size descending, then
/// lexicographically by sorted member ids.
pub fn enumerate_bruteforce_bounded(
    f: &BipolarFramework,
    sem: Semantics,
    bound: usize,
) -> Result<Vec<Extension>, FrameworkError> {
    let n = f.len();
    if n > bound || n >= 63 {
        return Err(FrameworkError::OracleBoundExceeded { size: n, bound });
    }
    let scan = if sem == Semantics::Preferred {
        Semantics::Admissible
    } else {
        sem
    };
    let mut found: Vec<Vec<bool>> = Vec::new();
    let mut mask = vec![false; n];
    for bits in 0u64..(1u64 << n) {
        for (x, m) in mask.iter_mut().enumerate() {
            *m = bits & (1 << x) != 0;
        }
        if satisfies_mask(f, &mask, scan) {
            found.push(mask.clone());
        }
    }
    if sem == Semantics::Preferred {
        let admissible = found;
        found = admissible
            .iter()
            .filter(|s| {
                !admissible
                    .iter()
                    .any(|t| t != *s && s.iter().zip(t.iter()).all(|(&in_s, &in_t)| !in_s || in_t))
            })
            .cloned()
            .collect();
    }
    let mut out: Vec<Extension> = found.iter().map(|m| f.from_mask(m)).collect();
    out.sort_by(|a, b| a.extension_order(b));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::fixtures::*;
    use crate::framework::random::{random_framework, RandomSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn attack_examples() {
        assert!(attacks(&g1(), &set(&["b"]), "a").unwrap());
        assert!(!attacks(&g1(), &set(&["a"]), "b").unwrap());
        assert!(!attacks(&g1(), &set(&[]), "a").unwrap());
        assert!(attacks(&g1(), &set(&[]), "x").is_err());
    }

    #[test]
    fn conflict_freeness_examples() {
        assert!(!is_conflict_free(&g1(), &set(&["a", "b"])).unwrap());
        assert!(is_conflict_free(&g1(), &set(&["b"])).unwrap());
        assert!(is_conflict_free(&g1(), &set(&[])).unwrap());
    }

    #[test]
    fn defence_examples() {
        assert!(defends(&g1(), &set(&[]), "b").unwrap());
        assert!(!defends(&g1(), &set(&[]), "a").unwrap());
        assert!(defends(&g3(), &set(&["c"]), "a").unwrap());
    }

    #[test]
    fn satisfies_examples() {
        assert!(satisfies(&g1(), &set(&["b"]), Semantics::Stable).unwrap());
        assert!(!satisfies(&g1(), &set(&["a"]), Semantics::Admissible).unwrap());
        for f in [g1(), g2(), g3(), BipolarFramework::empty()] {
            assert!(satisfies(&f, &set(&[]), Semantics::Admissible).unwrap());
        }
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(
            enumerate_bruteforce(&g1(), Semantics::Preferred).unwrap(),
            vec![set(&["b"])]
        );
        assert_eq!(
            enumerate_bruteforce(&g1(), Semantics::Admissible).unwrap(),
            vec![set(&["b"]), set(&[])]
        );
        for sem in Semantics::ALL {
            assert_eq!(
                enumerate_bruteforce(&BipolarFramework::empty(), sem).unwrap(),
                vec![set(&[])]
            );
        }
        assert_eq!(
            enumerate_bruteforce(&g2(), Semantics::Stable).unwrap(),
            vec![set(&["b"])]
        );
        assert_eq!(
            enumerate_bruteforce(&g3(), Semantics::Preferred).unwrap(),
            vec![set(&["a", "c"])]
        );
    }

    #[test]
    fn bruteforce_refuses_large_frameworks() {
        let mut b = BipolarFramework::builder();
        for i in 0..17 {
            b = b.assumption(format!("x{i}"), "");
        }
        let err = enumerate_bruteforce(&b.build().unwrap(), Semantics::Admissible).unwrap_err();
        assert_eq!(
            err,
            FrameworkError::OracleBoundExceeded {
                size: 17,
                bound: 16
            }
        );
    }

    #[test]
    fn fact_attacked_literals_are_excluded() {
        let f = BipolarFramework::builder()
            .assumption("a", "")
            .assumption("b", "")
            .fact("f", "")
            .attack("f", "a")
            .support("b", "a")
            .build()
            .unwrap();
        // b drags a into any closed set, and a is fact-attacked
        assert!(!is_conflict_free(&f, &set(&["b"])).unwrap());
        assert!(!defends(&f, &set(&["b"]), "a").unwrap());
        assert!(!attacks(&f, &set(&[]), "a").unwrap());
        assert_eq!(
            enumerate_bruteforce(&f, Semantics::Stable).unwrap(),
            vec![set(&[])]
        );
    }

    #[test]
    fn semantics_lattice_holds_on_random_frameworks() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for i in 0..60 {
            let f = random_framework(
                &mut rng,
                RandomSpec {
                    assumptions: i % 8,
                    facts: i % 2,
                    support_density: 0.2,
                    attack_density: 0.2,
                    fact_density: 0.15,
                },
            );
            let adm = enumerate_bruteforce(&f, Semantics::Admissible).unwrap();
            let pref = enumerate_bruteforce(&f, Semantics::Preferred).unwrap();
            let comp = enumerate_bruteforce(&f, Semantics::Complete).unwrap();
            let stab = enumerate_bruteforce(&f, Semantics::Stable).unwrap();
            assert!(adm.contains(&AssumptionSet::new()));
            assert!(stab.iter().all(|s| pref.contains(s)));
            assert!(pref.iter().all(|s| adm.contains(s)));
            assert!(comp.iter().all(|s| adm.contains(s)));
        }
    }

    #[test]
    fn semantics_parse() {
        assert_eq!("Stable".parse::<Semantics>().unwrap(), Semantics::Stable);
        assert!("grounded".parse::<Semantics>().is_err());
    }
}
