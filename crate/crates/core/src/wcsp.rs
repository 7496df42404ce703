//! Weighted constraints with default values and instances built from them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::CnfFormula;
use crate::hypergraph::Hypergraph;
use crate::rational::Rational;
use crate::Var;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ConstraintId(pub usize);

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// Whether an instance is evaluated by summing (partition function) or by
/// maximizing over assignments.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum EvalMode {
    Sum,
    Max,
}

impl EvalMode {
    pub(crate) fn combine(self, acc: &mut Rational, x: Rational) {
        match self {
            EvalMode::Sum => *acc += &x,
            EvalMode::Max => {
                if x > *acc {
                    *acc = x;
                }
            }
        }
    }
}

/// A table constraint: explicit values on its support, `default` elsewhere.
///
/// Tuples are indexed by the scope in ascending variable order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightedConstraint {
    id: ConstraintId,
    scope: Vec<Var>,
    default: Rational,
    support: BTreeMap<Vec<u32>, Rational>,
    original_scope: Vec<Var>,
}

impl WeightedConstraint {
    /// A constraint with empty support. Fails on repeated variables.
    pub fn new(scope: impl IntoIterator<Item = Var>, default: Rational) -> Result<Self> {
        let mut scope: Vec<Var> = scope.into_iter().collect();
        let n = scope.len();
        scope.sort_unstable();
        scope.dedup();
        if scope.len() != n {
            return Err(Error::Precondition(
                "constraint scope repeats a variable".into(),
            ));
        }
        Ok(WeightedConstraint {
            id: ConstraintId(0),
            original_scope: scope.clone(),
            scope,
            default,
            support: BTreeMap::new(),
        })
    }

    /// Builds a constraint whose table columns follow `scope` as given
    /// (not necessarily sorted). Duplicate tuples are rejected.
    pub fn from_table(
        scope: &[Var],
        default: Rational,
        entries: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Result<Self> {
        let mut c = WeightedConstraint::new(scope.iter().copied(), default)?;
        let perm: Vec<usize> = c
            .scope
            .iter()
            .map(|v| scope.iter().position(|w| w == v).expect("same variables"))
            .collect();
        for (tuple, value) in entries {
            if tuple.len() != scope.len() {
                return Err(Error::Precondition(format!(
                    "tuple of arity {} for scope of arity {}",
                    tuple.len(),
                    scope.len()
                )));
            }
            let sorted: Vec<u32> = perm.iter().map(|&i| tuple[i]).collect();
            if c.support.insert(sorted, value).is_some() {
                return Err(Error::Precondition(format!(
                    "duplicate support tuple {tuple:?}"
                )));
            }
        }
        Ok(c)
    }

    /// Sets the value of `tuple` (in sorted-scope order).
    pub fn insert(&mut self, tuple: Vec<u32>, value: Rational) -> Result<Option<Rational>> {
        if tuple.len() != self.scope.len() {
            return Err(Error::Precondition(format!(
                "tuple of arity {} for scope of arity {}",
                tuple.len(),
                self.scope.len()
            )));
        }
        Ok(self.support.insert(tuple, value))
    }

    pub fn id(&self) -> ConstraintId {
        self.id
    }

    pub fn scope(&self) -> &[Var] {
        &self.scope
    }

    /// Scope at the time the constraint entered its instance. Unchanged by
    /// elimination.
    pub fn original_scope(&self) -> &[Var] {
        &self.original_scope
    }

    pub fn default_value(&self) -> &Rational {
        &self.default
    }

    pub fn support(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.support
    }

    pub fn value(&self, tuple: &[u32]) -> &Rational {
        self.support.get(tuple).unwrap_or(&self.default)
    }

    /// Value under a dense assignment indexed by variable number.
    pub fn value_under(&self, assignment: &[u32]) -> &Rational {
        let tuple: Vec<u32> = self
            .scope
            .iter()
            .map(|v| assignment[v.index() as usize])
            .collect();
        self.value(&tuple)
    }

    /// `|c| = |supp(c)| · |var(c)|`.
    pub fn size(&self) -> usize {
        self.support.len() * self.scope.len()
    }

    pub(crate) fn set_scope_and_support(
        &mut self,
        scope: Vec<Var>,
        support: BTreeMap<Vec<u32>, Rational>,
    ) {
        self.scope = scope;
        self.support = support;
    }

    pub(crate) fn weights(&self) -> impl Iterator<Item = &Rational> + '_ {
        std::iter::once(&self.default).chain(self.support.values())
    }
}

/// A finite collection of weighted constraints over the domain
/// `{0, …, domain_size − 1}`. Constraints with empty scope are multiplied
/// into `scalar` on insertion.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WcspInstance {
    domain_size: u32,
    num_vars: u32,
    constraints: Vec<WeightedConstraint>,
    scalar: Rational,
}

impl WcspInstance {
    pub fn new(domain_size: u32, num_vars: u32) -> Result<Self> {
        if domain_size == 0 {
            return Err(Error::Precondition("domain must be non-empty".into()));
        }
        Ok(WcspInstance {
            domain_size,
            num_vars,
            constraints: Vec::new(),
            scalar: Rational::one(),
        })
    }

    /// Adds a constraint, returning its id, or `None` if it had an empty
    /// scope and was folded into the scalar.
    pub fn push(&mut self, mut c: WeightedConstraint) -> Result<Option<ConstraintId>> {
        if let Some(v) = c.scope.iter().find(|v| v.index() > self.num_vars) {
            return Err(Error::Precondition(format!(
                "variable {v} exceeds declared count {}",
                self.num_vars
            )));
        }
        for tuple in c.support.keys() {
            if let Some(d) = tuple.iter().find(|&&d| d >= self.domain_size) {
                return Err(Error::Precondition(format!(
                    "domain value {d} out of range 0..{}",
                    self.domain_size
                )));
            }
        }
        if c.scope.is_empty() {
            self.scalar *= c.value(&[]);
            return Ok(None);
        }
        let id = ConstraintId(self.constraints.len());
        c.id = id;
        c.original_scope = c.scope.clone();
        self.constraints.push(c);
        Ok(Some(id))
    }

    pub fn domain_size(&self) -> u32 {
        self.domain_size
    }

    /// Declared variable count; variables outside every scope do not enter
    /// the partition function.
    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn constraints(&self) -> &[WeightedConstraint] {
        &self.constraints
    }

    pub fn constraint(&self, id: ConstraintId) -> &WeightedConstraint {
        &self.constraints[id.0]
    }

    pub(crate) fn constraint_mut(&mut self, id: ConstraintId) -> &mut WeightedConstraint {
        &mut self.constraints[id.0]
    }

    pub fn scalar(&self) -> &Rational {
        &self.scalar
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.constraints
            .iter()
            .flat_map(|c| c.scope.iter().copied())
            .collect()
    }

    /// `s(I)`.
    pub fn structural_size(&self) -> usize {
        self.constraints.iter().map(|c| c.scope.len()).sum()
    }

    /// `‖I‖`.
    pub fn size(&self) -> usize {
        self.constraints.iter().map(WeightedConstraint::size).sum()
    }

    pub fn hypergraph(&self) -> Hypergraph {
        Hypergraph::from_edges(
            self.constraints
                .iter()
                .filter(|c| !c.scope.is_empty())
                .map(|c| c.scope.clone()),
        )
        .expect("non-empty scopes")
    }

    /// `scalar · w(I)` or `scalar · m(I)`.
    pub fn eval_total(&self, mode: EvalMode) -> Result<Rational> {
        crate::elim::solve(self, mode)
    }
}

pub fn eval_total(instance: &WcspInstance, mode: EvalMode) -> Result<Rational> {
    instance.eval_total(mode)
}

/// One constraint per stored clause: default 1, value 0 on the falsifier.
///
/// Formulas with empty clauses are rejected; they have no models.
pub fn cnf_to_count_instance(f: &CnfFormula) -> Result<WcspInstance> {
    if f.empty_clause_count() > 0 {
        return Err(Error::Precondition(
            "formula contains an empty clause; its model count is 0".into(),
        ));
    }
    Ok(clause_encoding(f, Rational::one(), Rational::zero()))
}

/// One constraint per stored clause: default 2, value 1 on the falsifier, so
/// every assignment weighs `2^(satisfied clauses)`.
pub fn cnf_to_max_instance(f: &CnfFormula) -> WcspInstance {
    clause_encoding(f, Rational::from(2u64), Rational::one())
}

fn clause_encoding(f: &CnfFormula, default: Rational, falsified: Rational) -> WcspInstance {
    let mut instance = WcspInstance::new(2, f.declared_var_count()).expect("binary domain");
    for clause in f.clauses() {
        let mut c = WeightedConstraint::new(clause.vars(), default.clone()).expect("distinct vars");
        c.insert(clause.falsifier(), falsified.clone())
            .expect("arity");
        instance.push(c).expect("valid clause constraint");
    }
    instance
}

/// Merges constraints with equal scopes by pointwise multiplication and
/// renumbers the result. Never increases `‖I‖`.
pub fn merge_equal_scopes(instance: &WcspInstance) -> WcspInstance {
    let mut merged: Vec<WeightedConstraint> = Vec::new();
    let mut by_scope: BTreeMap<&[Var], usize> = BTreeMap::new();
    for c in &instance.constraints {
        match by_scope.get(c.scope.as_slice()) {
            None => {
                by_scope.insert(&c.scope, merged.len());
                merged.push(c.clone());
            }
            Some(&i) => {
                let acc = &merged[i];
                let keys: BTreeSet<&Vec<u32>> =
                    acc.support.keys().chain(c.support.keys()).collect();
                let support = keys
                    .into_iter()
                    .map(|k| (k.clone(), acc.value(k) * c.value(k)))
                    .collect();
                let default = &acc.default * &c.default;
                merged[i].support = support;
                merged[i].default = default;
            }
        }
    }

    let mut out = WcspInstance {
        domain_size: instance.domain_size,
        num_vars: instance.num_vars,
        constraints: Vec::with_capacity(merged.len()),
        scalar: instance.scalar.clone(),
    };
    for c in merged {
        out.push(c)
            .expect("constraint was valid in the source instance");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_dimacs;

    fn v(i: u32) -> Var {
        Var::new(i)
    }

    fn r(n: u64, d: u64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn count_encoding_of_binary_clause() {
        let f = parse_dimacs("p cnf 2 1\n1 -2 0").unwrap();
        let i = cnf_to_count_instance(&f).unwrap();
        let c = &i.constraints()[0];
        assert_eq!(c.scope(), &[v(1), v(2)]);
        assert_eq!(c.default_value(), &Rational::one());
        assert_eq!(c.support().len(), 1);
        assert_eq!(c.value(&[0, 1]), &Rational::zero());
        assert_eq!(i.size(), 2);
        assert_eq!(i.structural_size(), 2);
    }

    #[test]
    fn count_encoding_of_unit_clause() {
        let f = parse_dimacs("p cnf 1 1\n1 0").unwrap();
        let i = cnf_to_count_instance(&f).unwrap();
        assert_eq!(
            i.constraints()[0].support().get(&vec![0]),
            Some(&Rational::zero())
        );
    }

    #[test]
    fn count_encoding_rejects_empty_clause() {
        let f = parse_dimacs("p cnf 1 2\n1 0\n0\n").unwrap();
        assert!(matches!(
            cnf_to_count_instance(&f),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn count_encoding_preserves_hypergraph() {
        let f = parse_dimacs("p cnf 4 4\n1 2 0\n-1 -2 0\n2 3 4 0\n4 0\n").unwrap();
        assert_eq!(
            cnf_to_count_instance(&f).unwrap().hypergraph(),
            f.hypergraph()
        );
    }

    #[test]
    fn max_encoding_of_unit_clause() {
        let f = parse_dimacs("p cnf 1 1\n1 0").unwrap();
        let i = cnf_to_max_instance(&f);
        let c = &i.constraints()[0];
        assert_eq!(c.default_value(), &Rational::from(2u64));
        assert_eq!(c.value(&[0]), &Rational::one());
        assert_eq!(c.value(&[1]), &Rational::from(2u64));
    }

    #[test]
    fn merge_pointwise_product() {
        let mut i = WcspInstance::new(2, 1).unwrap();
        i.push(WeightedConstraint::from_table(&[v(1)], r(1, 1), [(vec![0], r(0, 1))]).unwrap())
            .unwrap();
        i.push(WeightedConstraint::from_table(&[v(1)], r(1, 1), [(vec![1], r(0, 1))]).unwrap())
            .unwrap();
        let m = merge_equal_scopes(&i);
        assert_eq!(m.constraints().len(), 1);
        let c = &m.constraints()[0];
        assert_eq!(c.default_value(), &r(1, 1));
        assert_eq!(c.support().len(), 2);
        assert!(c.support().values().all(Rational::is_zero));

        let mut i = WcspInstance::new(2, 1).unwrap();
        i.push(WeightedConstraint::from_table(&[v(1)], r(2, 1), [(vec![0], r(1, 1))]).unwrap())
            .unwrap();
        i.push(WeightedConstraint::from_table(&[v(1)], r(3, 1), [(vec![0], r(5, 1))]).unwrap())
            .unwrap();
        let m = merge_equal_scopes(&i);
        let c = &m.constraints()[0];
        assert_eq!(c.default_value(), &r(6, 1));
        assert_eq!(c.support().len(), 1);
        assert_eq!(c.value(&[0]), &r(5, 1));
        assert!(m.size() <= i.size());
    }

    #[test]
    fn empty_scope_folds_into_scalar() {
        let mut i = WcspInstance::new(3, 0).unwrap();
        let c = WeightedConstraint::from_table(&[], r(2, 1), [(vec![], r(7, 3))]).unwrap();
        assert_eq!(i.push(c).unwrap(), None);
        assert_eq!(i.scalar(), &r(7, 3));
        assert!(i.constraints().is_empty());
    }

    #[test]
    fn push_validates_ranges() {
        let mut i = WcspInstance::new(2, 2).unwrap();
        let c = WeightedConstraint::from_table(&[v(1)], r(1, 1), [(vec![5], r(1, 1))]).unwrap();
        assert!(i.push(c).is_err());
        let c = WeightedConstraint::new([v(3)], r(1, 1)).unwrap();
        assert!(i.push(c).is_err());
        assert!(WeightedConstraint::new([v(1), v(1)], r(1, 1)).is_err());
    }

    #[test]
    fn from_table_permutes_columns() {
        let c = WeightedConstraint::from_table(&[v(2), v(1)], r(1, 1), [(vec![1, 0], r(3, 1))])
            .unwrap();
        assert_eq!(c.scope(), &[v(1), v(2)]);
        assert_eq!(c.value(&[0, 1]), &r(3, 1));
        assert!(WeightedConstraint::from_table(
            &[v(1)],
            r(1, 1),
            [(vec![0], r(1, 1)), (vec![0], r(2, 1))]
        )
        .is_err());
    }
}
