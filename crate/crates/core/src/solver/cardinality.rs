//! Sequential-counter cardinality encoding.
//!
//! Register `r(i, j)` may only be true when at least `j` of the first `i`
//! inputs are true:
//!
//! ```text
//! r(i, j) -> r(i-1, j) | x(i)
//! r(i, j) -> r(i-1, j) | r(i-1, j-1)
//! ```
//!
//! with `r(0, j)` false and `r(i, 0)` true. Assuming the output `r(n, s)`
//! forces at least `s` inputs true; leaving it unassumed constrains nothing,
//! so the bound can be relaxed downward across incremental calls.
//! O(n^2) auxiliary variables and clauses.

use super::backend::Lit;

#[derive(Debug, Clone)]
pub struct AtLeastCounter {
    outputs: Vec<Lit>,
}

impl AtLeastCounter {
    /// Allocates registers from `next_var` onward and appends the clauses.
    pub fn encode(inputs: &[Lit], next_var: &mut u32, clauses: &mut Vec<Vec<Lit>>) -> Self {
        let n = inputs.len();
        // prev[j - 1] = r(i-1, j)
        let mut prev: Vec<Lit> = Vec::new();
        for (i, &x) in inputs.iter().enumerate() {
            let width = i + 1;
            let mut cur = Vec::with_capacity(width);
            for j in 1..=width {
                let r = Lit::pos(*next_var);
                *next_var += 1;
                let carry = prev.get(j - 1).copied();
                let mut first = vec![!r, x];
                first.extend(carry);
                clauses.push(first);
                if j > 1 {
                    let mut second = vec![!r, prev[j - 2]];
                    second.extend(carry);
                    clauses.push(second);
                }
                cur.push(r);
            }
            prev = cur;
        }
        debug_assert_eq!(prev.len(), n);
        AtLeastCounter { outputs: prev }
    }

    /// Literal forcing at least `s` inputs true; `None` for `s == 0`.
    pub fn at_least(&self, s: usize) -> Option<Lit> {
        if s == 0 {
            None
        } else {
            Some(self.outputs[s - 1])
        }
    }
}
