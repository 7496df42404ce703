//! Exact model counting, Max-SAT and weighted CSP solving for beta-acyclic
//! instances.
//!
//! The solver eliminates one nest point at a time along a beta-elimination
//! order, rewriting only the constraints that contain the eliminated variable.
//! All weights are exact non-negative rationals kept in lowest terms.
//!
//! ```
//! use nestcount::{count_models, formula::parse_dimacs};
//!
//! let f = parse_dimacs("p cnf 3 2\n1 2 0\n-2 3 0\n").unwrap();
//! assert_eq!(count_models(&f).unwrap(), 4u32.into());
//! ```

pub mod elim;
pub mod error;
pub mod formula;
pub mod gen;
pub mod hypergraph;
pub mod oracle;
pub mod rational;
pub mod wcsp;
pub mod wcspd;

use std::fmt;

use num_bigint::BigUint;

pub use elim::{solve, ElimState};
pub use error::{Error, Result};
pub use formula::CnfFormula;
pub use hypergraph::{EliminationOrder, Hypergraph};
pub use rational::Rational;
pub use wcsp::{EvalMode, WcspInstance, WeightedConstraint};

/// A 1-based variable index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// # Panics
    ///
    /// If `idx == 0`.
    pub fn new(idx: u32) -> Var {
        assert!(idx >= 1, "variables are 1-based");
        Var(idx)
    }

    pub fn try_new(idx: u32) -> Option<Var> {
        (idx >= 1).then_some(Var(idx))
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Exact number of models of `formula` over its declared variables.
pub fn count_models(formula: &CnfFormula) -> Result<BigUint> {
    if formula.empty_clause_count() > 0 {
        return Ok(BigUint::ZERO);
    }
    let instance = wcsp::cnf_to_count_instance(formula)?;
    let w = solve(&instance, EvalMode::Sum)?;
    let count = w
        .to_integer()
        .ok_or_else(|| Error::Invariant(format!("model count {w} is not an integer")))?;
    Ok(count << formula.isolated_variables())
}

/// Maximum number of simultaneously satisfiable clauses, tautologies included.
pub fn max_sat(formula: &CnfFormula) -> Result<u64> {
    let instance = wcsp::cnf_to_max_instance(formula);
    let m = solve(&instance, EvalMode::Max)?;
    let satisfied = m
        .exact_log2()
        .ok_or_else(|| Error::Invariant(format!("max-product {m} is not a power of two")))?;
    Ok(satisfied + formula.tautology_count() as u64)
}
