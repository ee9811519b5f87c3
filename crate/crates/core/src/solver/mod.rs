//! SAT-backed search for the largest extensions.
//!
//! The search starts from the full assumption set and relaxes an
//! at-least-`s` cardinality bound downward. Every model found is blocked
//! and the search continues at the same bound until it runs dry, so
//! extensions come out in non-increasing size order.

pub mod backend;
pub mod cardinality;
pub mod encoding;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::framework::{BipolarFramework, Extension, FrameworkError};
use crate::semantics::Semantics;

pub use backend::{Lit, SatBackend, VarisatBackend};
pub use cardinality::AtLeastCounter;
pub use encoding::{encode, AttackMatrix, SatEncoding};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid solver config: {0}")]
    InvalidConfig(String),
    #[error("semantics `{0}` has no direct encoding")]
    UnsupportedSemantics(Semantics),
    #[error(transparent)]
    Framework(#[from] FrameworkError),
    #[error("SAT backend failure: {0}")]
    Backend(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverConfig {
    pub k: usize,
    pub semantics: Semantics,
    #[serde(with = "duration_secs")]
    pub timeout: Duration,
    /// Carried for randomized backends; the bundled backend is deterministic.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            k: 3,
            semantics: Semantics::Admissible,
            timeout: Duration::from_secs(30),
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if self.k == 0 {
            return Err(SolverError::InvalidConfig("k must be at least 1".into()));
        }
        Ok(())
    }
}

mod duration_secs {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let secs = f64::deserialize(d)?;
        Duration::try_from_secs_f64(secs).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveOutcome {
    pub extensions: Vec<Extension>,
    /// False when the timeout cut the search short.
    pub complete: bool,
}

/// Stateful incremental search over one framework. Not shareable between
/// threads, but can be moved to another thread.
pub struct ExtensionSolver<'f> {
    framework: &'f BipolarFramework,
    encoding: SatEncoding,
    backend: Box<dyn SatBackend + 'f>,
    counter: AtLeastCounter,
    next_var: u32,
    exhausted: bool,
}

impl<'f> ExtensionSolver<'f> {
    pub fn new(framework: &'f BipolarFramework, sem: Semantics) -> Result<Self, SolverError> {
        Self::with_backend(framework, sem, Box::new(VarisatBackend::new()))
    }

    pub fn with_backend(
        framework: &'f BipolarFramework,
        sem: Semantics,
        mut backend: Box<dyn SatBackend + 'f>,
    ) -> Result<Self, SolverError> {
        let encoding = encode(framework, sem)?;
        for clause in &encoding.clauses {
            backend.add_clause(clause);
        }
        let inputs: Vec<Lit> = (0..framework.len())
            .map(|i| encoding.membership(i))
            .collect();
        let mut next_var = encoding.num_vars + 1;
        let mut aux = Vec::new();
        let counter = AtLeastCounter::encode(&inputs, &mut next_var, &mut aux);
        for clause in &aux {
            backend.add_clause(clause);
        }
        Ok(ExtensionSolver {
            framework,
            encoding,
            backend,
            counter,
            next_var,
            exhausted: false,
        })
    }

    pub fn encoding(&self) -> &SatEncoding {
        &self.encoding
    }

    fn fresh_var(&mut self) -> Lit {
        let v = Lit::pos(self.next_var);
        self.next_var += 1;
        v
    }

    fn model(&self) -> Vec<bool> {
        (0..self.framework.len())
            .map(|i| self.backend.value(self.encoding.membership(i).var()))
            .collect()
    }

    fn add_clause(&mut self, clause: Vec<Lit>) {
        if clause.is_empty() {
            self.exhausted = true;
        } else {
            self.backend.add_clause(&clause);
        }
    }

    /// Next model with at least `size` members, or `None`.
    fn next_model(&mut self, size: usize) -> Result<Option<Vec<bool>>, SolverError> {
        if self.exhausted {
            return Ok(None);
        }
        let assumptions: Vec<Lit> = self.counter.at_least(size).into_iter().collect();
        if self.backend.solve(&assumptions)? {
            Ok(Some(self.model()))
        } else {
            Ok(None)
        }
    }

    fn block_exact(&mut self, mask: &[bool]) {
        let clause = mask
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let lit = self.encoding.membership(i);
                if m {
                    !lit
                } else {
                    lit
                }
            })
            .collect();
        self.add_clause(clause);
    }

    /// Forbids every subset of `mask`.
    fn block_subsets(&mut self, mask: &[bool]) {
        let clause = mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| !m)
            .map(|(i, _)| self.encoding.membership(i))
            .collect();
        self.add_clause(clause);
    }

    /// Grows `mask` to a subset-maximal model by repeatedly asking for a
    /// strict superset. Bounded by `n` rounds since each adds a member.
    fn grow(&mut self, mut mask: Vec<bool>) -> Result<Vec<bool>, SolverError> {
        for _ in 0..=self.framework.len() {
            let outside: Vec<Lit> = mask
                .iter()
                .enumerate()
                .filter(|(_, &m)| !m)
                .map(|(i, _)| self.encoding.membership(i))
                .collect();
            if outside.is_empty() {
                break;
            }
            let act = self.fresh_var();
            let mut clause = vec![!act];
            clause.extend(outside);
            self.backend.add_clause(&clause);
            let mut assumptions = vec![act];
            assumptions.extend(
                mask.iter()
                    .enumerate()
                    .filter(|(_, &m)| m)
                    .map(|(i, _)| self.encoding.membership(i)),
            );
            let sat = self.backend.solve(&assumptions)?;
            self.backend.add_clause(&[!act]);
            if !sat {
                break;
            }
            mask = self.model();
        }
        Ok(mask)
    }

    /// Up to `k` models in non-increasing size order, blocking each one.
    pub fn k_largest(&mut self, k: usize, deadline: Instant) -> Result<SolveOutcome, SolverError> {
        let mut found = Vec::new();
        let mut size = self.framework.len();
        let mut complete = true;
        while found.len() < k {
            if Instant::now() >= deadline {
                complete = false;
                break;
            }
            match self.next_model(size)? {
                Some(mask) => {
                    self.block_exact(&mask);
                    found.push(self.framework.from_mask(&mask));
                }
                None if size == 0 || self.exhausted => break,
                None => size -= 1,
            }
        }
        found.sort_by(|a, b| a.extension_order(b));
        Ok(SolveOutcome {
            extensions: found,
            complete,
        })
    }

    /// Up to `k` subset-maximal models. Requires an admissible encoding.
    pub fn maximal(&mut self, k: usize, deadline: Instant) -> Result<SolveOutcome, SolverError> {
        let mut found = Vec::new();
        let mut size = self.framework.len();
        let mut complete = true;
        while found.len() < k {
            if Instant::now() >= deadline {
                complete = false;
                break;
            }
            match self.next_model(size)? {
                Some(mask) => {
                    let maximal = self.grow(mask)?;
                    self.block_subsets(&maximal);
                    found.push(self.framework.from_mask(&maximal));
                }
                None if size == 0 || self.exhausted => break,
                None => size -= 1,
            }
        }
        found.sort_by(|a, b| a.extension_order(b));
        Ok(SolveOutcome {
            extensions: found,
            complete,
        })
    }
}

/// The `cfg.k` largest extensions under `cfg.semantics`.
pub fn solve_k_largest(
    f: &BipolarFramework,
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolverError> {
    cfg.validate()?;
    if cfg.semantics == Semantics::Preferred {
        return find_preferred(f, cfg);
    }
    let deadline = Instant::now() + cfg.timeout;
    ExtensionSolver::new(f, cfg.semantics)?.k_largest(cfg.k, deadline)
}

/// Up to `cfg.k` preferred extensions, largest first. `cfg.semantics` is ignored.
pub fn find_preferred(
    f: &BipolarFramework,
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolverError> {
    cfg.validate()?;
    let deadline = Instant::now() + cfg.timeout;
    ExtensionSolver::new(f, Semantics::Admissible)?.maximal(cfg.k, deadline)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::fixtures::*;
    use crate::framework::random::{random_framework, RandomSpec};
    use crate::semantics::{enumerate_bruteforce, satisfies};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(k: usize, semantics: Semantics) -> SolverConfig {
        SolverConfig {
            k,
            semantics,
            ..SolverConfig::default()
        }
    }

    #[test]
    fn g1_two_largest_admissible() {
        let out = solve_k_largest(&g1(), &cfg(2, Semantics::Admissible)).unwrap();
        assert_eq!(out.extensions, vec![set(&["b"]), set(&[])]);
        assert!(out.complete);
    }

    #[test]
    fn empty_framework_yields_empty_extension() {
        let out =
            solve_k_largest(&BipolarFramework::empty(), &cfg(3, Semantics::Admissible)).unwrap();
        assert_eq!(out.extensions, vec![set(&[])]);
    }

    #[test]
    fn g2_stable() {
        let out = solve_k_largest(&g2(), &cfg(8, Semantics::Stable)).unwrap();
        assert_eq!(out.extensions, vec![set(&["b"])]);
    }

    #[test]
    fn preferred_examples() {
        assert_eq!(
            find_preferred(&g1(), &cfg(3, Semantics::Preferred))
                .unwrap()
                .extensions,
            vec![set(&["b"])]
        );
        let free = BipolarFramework::builder()
            .assumption("a", "")
            .assumption("b", "")
            .build()
            .unwrap();
        assert_eq!(
            find_preferred(&free, &cfg(3, Semantics::Preferred))
                .unwrap()
                .extensions,
            vec![set(&["a", "b"])]
        );
        assert_eq!(
            find_preferred(&g3(), &cfg(3, Semantics::Preferred))
                .unwrap()
                .extensions,
            vec![set(&["a", "c"])]
        );
    }

    #[test]
    fn zero_k_is_rejected() {
        assert!(matches!(
            solve_k_largest(&g1(), &cfg(0, Semantics::Admissible)),
            Err(SolverError::InvalidConfig(_))
        ));
    }

    #[test]
    fn elapsed_deadline_flags_incomplete() {
        let f = g1();
        let mut solver = ExtensionSolver::new(&f, Semantics::Admissible).unwrap();
        let out = solver.k_largest(3, Instant::now()).unwrap();
        assert!(!out.complete);
        assert!(out.extensions.is_empty());
    }

    #[test]
    fn solver_can_move_between_threads() {
        let f = g3();
        let solver = ExtensionSolver::new(&f, Semantics::Admissible).unwrap();
        let out = std::thread::scope(|s| {
            s.spawn(move || {
                let mut solver = solver;
                solver.k_largest(10, Instant::now() + Duration::from_secs(5))
            })
            .join()
            .unwrap()
        })
        .unwrap();
        assert_eq!(out.extensions.len(), 3);
    }

    #[test]
    fn matches_oracle_on_random_frameworks() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for i in 0..80 {
            let f = random_framework(
                &mut rng,
                RandomSpec {
                    assumptions: i % 9,
                    facts: i % 3 / 2,
                    support_density: 0.15,
                    attack_density: 0.2,
                    fact_density: 0.2,
                },
            );
            for sem in Semantics::ALL {
                let expected = enumerate_bruteforce(&f, sem).unwrap();
                let got = solve_k_largest(&f, &cfg(1 << f.len(), sem)).unwrap();
                assert!(got.complete);
                assert_eq!(got.extensions, expected, "framework #{i} {sem}");
                for e in &got.extensions {
                    assert!(satisfies(&f, e, sem).unwrap());
                }
            }
        }
    }
}
