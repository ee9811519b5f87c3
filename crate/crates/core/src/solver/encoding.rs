//! CNF encoding of the extension semantics over the singleton attack matrix.
//!
//! Variable `i + 1` is membership of the `i`-th assumption in sorted-id
//! order. Auxiliary variables (complete semantics only) follow.
//!
//! With `M(u, w)` the attack matrix and `C(t)` the set of `u` such that
//! `M(u, w)` holds for some `w` in `closure({t})`:
//!
//! * closed: `a -> b` for each support rule `b <- a`
//! * conflict-free: `!(t & x)` for each `M(t, x)`; `!x` when a fact attacks `x`
//! * defence: `x -> OR C(t)` for each `M(t, x)`
//! * stable: `!x -> OR C(x)`
//! * complete: `(AND_t OR C(t)) -> x` via one auxiliary per attacker
//!
//! Disjunctions that a fact already satisfies (a fact attacks some member
//! of the relevant closure) are dropped.

use std::fmt::Write as _;

use crate::framework::{BipolarFramework, FrameworkError};
use crate::semantics::Semantics;

use super::backend::Lit;
use super::SolverError;

/// `n x n` relation: `(t, x)` iff `{t}` attacks `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackMatrix {
    n: usize,
    cells: Vec<bool>,
}

impl AttackMatrix {
    pub fn build(f: &BipolarFramework) -> Self {
        let n = f.len();
        let mut cells = vec![false; n * n];
        for t in 0..n {
            for a in f.singleton_closure(t) {
                for &x in f.attacked_by(a) {
                    cells[t * n + x] = true;
                }
            }
        }
        AttackMatrix { n, cells }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, t: usize, x: usize) -> bool {
        self.cells[t * self.n + x]
    }

    pub fn attackers_of(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&t| self.get(t, x))
    }

    /// All true entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n * self.n)
            .filter(|&i| self.cells[i])
            .map(|i| (i / self.n, i % self.n))
    }
}

#[derive(Debug, Clone)]
pub struct SatEncoding {
    pub semantics: Semantics,
    /// Membership variable `i + 1` stands for `members[i]`.
    pub members: Vec<String>,
    pub num_vars: u32,
    pub clauses: Vec<Vec<Lit>>,
}

impl SatEncoding {
    pub fn var_of(&self, id: &str) -> Result<u32, FrameworkError> {
        self.members
            .binary_search_by(|m| m.as_str().cmp(id))
            .map(|i| i as u32 + 1)
            .map_err(|_| FrameworkError::UnknownId(id.to_string()))
    }

    pub fn membership(&self, index: usize) -> Lit {
        Lit::pos(index as u32 + 1)
    }

    /// DIMACS CNF. Comment lines map membership variables to assumption ids.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        writeln!(out, "c semantics {}", self.semantics).unwrap();
        for (i, id) in self.members.iter().enumerate() {
            writeln!(out, "c var {} {}", i + 1, id).unwrap();
        }
        writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len()).unwrap();
        for clause in &self.clauses {
            for lit in clause {
                write!(out, "{} ", lit.to_dimacs()).unwrap();
            }
            out.push_str("0\n");
        }
        out
    }
}

struct Counters {
    /// `C(t)` for each assumption, or `None` when a fact already counters it.
    counters: Vec<Option<Vec<usize>>>,
}

impl Counters {
    fn new(f: &BipolarFramework, m: &AttackMatrix) -> Self {
        let fact_attacked = f.fact_attacked_mask();
        let counters = (0..f.len())
            .map(|t| {
                let cl = f.singleton_closure(t);
                if cl.iter().any(|&w| fact_attacked[w]) {
                    return None;
                }
                Some(
                    (0..f.len())
                        .filter(|&u| cl.iter().any(|&w| m.get(u, w)))
                        .collect(),
                )
            })
            .collect();
        Counters { counters }
    }
}

pub fn encode(f: &BipolarFramework, sem: Semantics) -> Result<SatEncoding, SolverError> {
    encode_with(f, &AttackMatrix::build(f), sem)
}

pub fn encode_with(
    f: &BipolarFramework,
    m: &AttackMatrix,
    sem: Semantics,
) -> Result<SatEncoding, SolverError> {
    if sem == Semantics::Preferred {
        return Err(SolverError::UnsupportedSemantics(sem));
    }
    let n = f.len();
    let var = |i: usize| Lit::pos(i as u32 + 1);
    let fact_attacked = f.fact_attacked_mask();
    let mut clauses: Vec<Vec<Lit>> = Vec::new();

    for a in 0..n {
        for &b in f.supported_by(a) {
            if a != b {
                clauses.push(vec![!var(a), var(b)]);
            }
        }
    }
    for (x, &hit) in fact_attacked.iter().enumerate() {
        if hit {
            clauses.push(vec![!var(x)]);
        }
    }
    for (t, x) in m.entries() {
        if t == x {
            clauses.push(vec![!var(t)]);
        } else {
            clauses.push(vec![!var(t), !var(x)]);
        }
    }

    let counters = Counters::new(f, m);
    let mut num_vars = n as u32;
    match sem {
        Semantics::Admissible | Semantics::Complete => {
            for x in (0..n).filter(|&x| !fact_attacked[x]) {
                for t in m.attackers_of(x) {
                    if let Some(c) = &counters.counters[t] {
                        let mut clause = vec![!var(x)];
                        clause.extend(c.iter().map(|&u| var(u)));
                        clauses.push(clause);
                    }
                }
            }
        }
        Semantics::Stable => {
            for x in 0..n {
                if let Some(c) = &counters.counters[x] {
                    let mut clause = vec![var(x)];
                    clause.extend(c.iter().map(|&u| var(u)));
                    clauses.push(clause);
                }
            }
        }
        Semantics::Preferred => unreachable!(),
    }

    if sem == Semantics::Complete {
        // countered[t] <-> OR C(t)
        let mut countered: Vec<Option<Lit>> = vec![None; n];
        for (t, c) in counters.counters.iter().enumerate() {
            let Some(c) = c else {
                continue;
            };
            if (0..n).all(|x| !m.get(t, x)) {
                continue;
            }
            num_vars += 1;
            let y = Lit::pos(num_vars);
            let mut forward = vec![!y];
            forward.extend(c.iter().map(|&u| var(u)));
            clauses.push(forward);
            for &u in c {
                clauses.push(vec![!var(u), y]);
            }
            countered[t] = Some(y);
        }
        for x in (0..n).filter(|&x| !fact_attacked[x]) {
            let mut clause = vec![var(x)];
            for t in m.attackers_of(x) {
                if counters.counters[t].is_some() {
                    clause.push(!countered[t].expect("attacker has an auxiliary"));
                }
            }
            clauses.push(clause);
        }
    }

    Ok(SatEncoding {
        semantics: sem,
        members: f.assumptions().iter().map(|s| s.id.clone()).collect(),
        num_vars,
        clauses,
    })
}
