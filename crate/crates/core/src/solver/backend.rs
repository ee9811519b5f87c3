//! Incremental SAT backend contract.

use std::ops::Not;

use varisat::ExtendFormula;

use super::SolverError;

/// DIMACS-style literal: `+v` or `-v` for a 1-based variable `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(i32);

impl Lit {
    pub fn pos(var: u32) -> Self {
        assert!(var > 0, "variables are 1-based");
        Lit(var as i32)
    }

    pub fn neg(var: u32) -> Self {
        !Lit::pos(var)
    }

    pub fn var(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

/// What the extension search needs from a SAT solver: clause addition,
/// solving under assumption literals, and model readout. Implementations
/// keep learnt state between calls.
pub trait SatBackend: Send {
    fn add_clause(&mut self, clause: &[Lit]);

    fn solve(&mut self, assumptions: &[Lit]) -> Result<bool, SolverError>;

    /// Value of `var` in the last model. Variables the backend never saw
    /// read as false.
    fn value(&self, var: u32) -> bool;
}

/// [`SatBackend`] over the `varisat` CDCL solver.
#[derive(Default)]
pub struct VarisatBackend {
    solver: varisat::Solver<'static>,
    model: Vec<bool>,
}

impl VarisatBackend {
    pub fn new() -> Self {
        Self::default()
    }
}

// SAFETY: the only non-Send parts of `varisat::Solver` are the optional proof
// writer and proof processor trait objects. They are installed only through
// `write_proof` / `add_proof_processor`, which this wrapper never calls, and
// the solver field is private, so no such object can ever be present.
unsafe impl Send for VarisatBackend {}

fn to_varisat(lit: Lit) -> varisat::Lit {
    varisat::Lit::from_dimacs(lit.to_dimacs() as isize)
}

impl SatBackend for VarisatBackend {
    fn add_clause(&mut self, clause: &[Lit]) {
        let lits: Vec<varisat::Lit> = clause.iter().copied().map(to_varisat).collect();
        self.solver.add_clause(&lits);
    }

    fn solve(&mut self, assumptions: &[Lit]) -> Result<bool, SolverError> {
        let lits: Vec<varisat::Lit> = assumptions.iter().copied().map(to_varisat).collect();
        self.solver.assume(&lits);
        let sat = self
            .solver
            .solve()
            .map_err(|e| SolverError::Backend(e.to_string()))?;
        self.model.clear();
        if sat {
            for lit in self.solver.model().unwrap_or_default() {
                let v = lit.to_dimacs();
                let idx = v.unsigned_abs();
                if self.model.len() <= idx {
                    self.model.resize(idx + 1, false);
                }
                self.model[idx] = v > 0;
            }
        }
        Ok(sat)
    }

    fn value(&self, var: u32) -> bool {
        self.model.get(var as usize).copied().unwrap_or(false)
    }
}
