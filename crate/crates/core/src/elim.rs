//! Nest-point elimination.
//!
//! Eliminating a nest point `x` rewrites only the constraints `c_1 ≺ … ≺ c_p`
//! that contain `x`. Each `c_i` loses `x` from its scope and its support is
//! projected along `x`; the value of a projected tuple `a` becomes
//!
//! ```text
//! Agg_d P_i(a, d) / Agg_d P_{i-1}(a, d),   P_i(a, d) = Π_{j ≤ i} c_j(a ⊕ x=d)
//! ```
//!
//! (or 0 when the denominator vanishes), where `Agg` is a sum or a max. In sum
//! mode the partition function shrinks by exactly `|D|`; in max mode the
//! maximum is preserved.
//!
//! The constraints are ordered by `≺`, which compares original scopes by the
//! last-eliminated variable in their symmetric difference. This order refines
//! scope inclusion at every step and keeps every intermediate weight a ratio
//! of two sub-instance partition functions, so bit sizes stay polynomial.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::hypergraph::{beta_elimination_order, is_subset, EliminationOrder};
use crate::rational::Rational;
use crate::wcsp::{merge_equal_scopes, ConstraintId, EvalMode, WcspInstance, WeightedConstraint};
use crate::Var;

/// Position of every variable in an elimination order.
#[derive(Clone, Debug)]
pub struct PrecComparator {
    position: HashMap<Var, usize>,
}

impl PrecComparator {
    pub fn new(order: &EliminationOrder) -> Self {
        PrecComparator {
            position: order.iter().enumerate().map(|(i, v)| (v, i)).collect(),
        }
    }

    fn position(&self, v: Var) -> usize {
        *self
            .position
            .get(&v)
            .unwrap_or_else(|| panic!("variable {v} is not in the elimination order"))
    }

    /// Compares two sorted scopes: `Less` when the latest-eliminated variable
    /// of the symmetric difference belongs to `b`.
    ///
    /// # Panics
    ///
    /// If a variable of the symmetric difference is missing from the order.
    pub fn compare_scopes(&self, a: &[Var], b: &[Var]) -> Ordering {
        let (mut i, mut j) = (0, 0);
        let mut latest: Option<(usize, Ordering)> = None;
        let mut consider = |v: Var, side: Ordering| {
            let p = self.position(v);
            if latest.is_none_or(|(q, _)| p > q) {
                latest = Some((p, side));
            }
        };
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) if x == y => {
                    i += 1;
                    j += 1;
                }
                (Some(&x), Some(&y)) if x < y => {
                    consider(x, Ordering::Greater);
                    i += 1;
                }
                (Some(_), Some(&y)) => {
                    consider(y, Ordering::Less);
                    j += 1;
                }
                (Some(&x), None) => {
                    consider(x, Ordering::Greater);
                    i += 1;
                }
                (None, Some(&y)) => {
                    consider(y, Ordering::Less);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        latest.map_or(Ordering::Equal, |(_, side)| side)
    }

    /// `≺` on original scopes.
    pub fn compare(&self, c: &WeightedConstraint, d: &WeightedConstraint) -> Ordering {
        self.compare_scopes(c.original_scope(), d.original_scope())
    }
}

pub fn prec_compare(
    c: &WeightedConstraint,
    d: &WeightedConstraint,
    idx: &PrecComparator,
) -> Ordering {
    idx.compare(c, d)
}

/// A working copy of an instance partway through elimination.
///
/// Constraints are never removed: once a scope is empty its single value is
/// frozen and enters the final product.
#[derive(Clone, Debug)]
pub struct ElimState {
    instance: WcspInstance,
    order: EliminationOrder,
    comparator: PrecComparator,
    step: usize,
    alpha_exponent: Vec<u32>,
}

impl ElimState {
    /// Prepares elimination along the greedy beta-elimination order.
    pub fn new(instance: WcspInstance) -> Result<Self> {
        let order = beta_elimination_order(&instance.hypergraph())?;
        Ok(Self::from_parts(instance, order))
    }

    /// Prepares elimination along a caller-supplied order, which must be a
    /// beta-elimination order of the instance hypergraph.
    pub fn with_order(instance: WcspInstance, order: Vec<Var>) -> Result<Self> {
        let order = EliminationOrder::validated(&instance.hypergraph(), order)?;
        Ok(Self::from_parts(instance, order))
    }

    fn from_parts(instance: WcspInstance, order: EliminationOrder) -> Self {
        let comparator = PrecComparator::new(&order);
        let alpha_exponent = vec![0; instance.constraints().len()];
        ElimState {
            instance,
            order,
            comparator,
            step: 0,
            alpha_exponent,
        }
    }

    pub fn instance(&self) -> &WcspInstance {
        &self.instance
    }

    pub fn order(&self) -> &EliminationOrder {
        &self.order
    }

    pub fn comparator(&self) -> &PrecComparator {
        &self.comparator
    }

    /// Number of variables eliminated so far.
    pub fn step(&self) -> usize {
        self.step
    }

    pub fn next_var(&self) -> Option<Var> {
        self.order.as_slice().get(self.step).copied()
    }

    pub fn is_finished(&self) -> bool {
        self.step == self.order.len()
    }

    /// `t` such that the normalization factor of `c` is `|D|^t` (sum mode).
    pub fn alpha_exponent(&self, c: ConstraintId) -> u32 {
        self.alpha_exponent[c.0]
    }

    /// Eliminates `x`, which must be the next variable of the order and a
    /// nest point of the current instance.
    pub fn eliminate_nest_point(&mut self, x: Var, mode: EvalMode) -> Result<()> {
        if self.next_var() != Some(x) {
            return Err(Error::OrderViolation {
                expected: self.next_var(),
                got: x,
            });
        }

        let constraints = self.instance.constraints();
        let mut members: Vec<ConstraintId> = constraints
            .iter()
            .filter(|c| c.scope().binary_search(&x).is_ok())
            .map(WeightedConstraint::id)
            .collect();
        members.sort_by(|&a, &b| {
            self.comparator
                .compare(&constraints[a.0], &constraints[b.0])
                .then(a.cmp(&b))
        });
        let chained = members
            .windows(2)
            .all(|w| is_subset(constraints[w[0].0].scope(), constraints[w[1].0].scope()));
        if !chained {
            let mut by_len: Vec<&[Var]> =
                members.iter().map(|m| constraints[m.0].scope()).collect();
            by_len.sort_by_key(|s| s.len());
            return Err(if by_len.windows(2).all(|w| is_subset(w[0], w[1])) {
                Error::Invariant(format!("order ≺ does not refine scope inclusion at {x}"))
            } else {
                Error::NotANestPoint(x)
            });
        }

        let size_before = self.instance.size();
        let chain: Vec<&WeightedConstraint> = members.iter().map(|m| &constraints[m.0]).collect();
        let rewritten = rewrite_chain(&chain, x, self.instance.domain_size(), mode);

        for (&id, (scope, support)) in members.iter().zip(rewritten) {
            self.instance
                .constraint_mut(id)
                .set_scope_and_support(scope, support);
        }
        if mode == EvalMode::Sum {
            if let Some(first) = members.first() {
                self.alpha_exponent[first.0] += 1;
            }
        }
        self.step += 1;

        if self.instance.size() > size_before {
            return Err(Error::Invariant(format!(
                "instance size grew from {size_before} to {} eliminating {x}",
                self.instance.size()
            )));
        }
        if self
            .instance
            .constraints()
            .iter()
            .any(|c| c.scope().binary_search(&x).is_ok())
        {
            return Err(Error::Invariant(format!(
                "{x} still occurs after elimination"
            )));
        }
        Ok(())
    }

    /// Eliminates the next variable of the order, if any.
    pub fn eliminate_next(&mut self, mode: EvalMode) -> Result<Option<Var>> {
        match self.next_var() {
            Some(x) => {
                self.eliminate_nest_point(x, mode)?;
                Ok(Some(x))
            }
            None => Ok(None),
        }
    }

    pub fn run(&mut self, mode: EvalMode) -> Result<()> {
        while self.eliminate_next(mode)?.is_some() {}
        Ok(())
    }

    /// Scalar times the product of all constraints whose scope is empty.
    pub fn residual_product(&self) -> Rational {
        let mut acc = self.instance.scalar().clone();
        for c in self
            .instance
            .constraints()
            .iter()
            .filter(|c| c.scope().is_empty())
        {
            acc *= c.value(&[]);
        }
        acc
    }

    /// Final value once every variable has been eliminated.
    pub fn result(&self, mode: EvalMode) -> Result<Rational> {
        if !self.is_finished() {
            return Err(Error::Precondition(format!(
                "{} of {} variables eliminated",
                self.step,
                self.order.len()
            )));
        }
        let product = self.residual_product();
        Ok(match mode {
            EvalMode::Sum => {
                let scale = Rational::from(u64::from(self.instance.domain_size()))
                    .pow(self.order.len() as u32);
                &scale * &product
            }
            EvalMode::Max => product,
        })
    }

    /// Every weight currently stored, defaults included.
    pub fn weights(&self) -> impl Iterator<Item = &Rational> + '_ {
        self.instance.constraints().iter().flat_map(|c| c.weights())
    }
}

type Tuple = Vec<u32>;

/// Memoized `P_i(a, ·)` over the chain, one vector of `|D|` values per
/// projected tuple.
struct PrefixProducts<'a> {
    chain: &'a [&'a WeightedConstraint],
    x_pos: Vec<usize>,
    // columns of scope_{i-1} \ x inside scope_i \ x
    restrict: Vec<Vec<usize>>,
    domain: u32,
    memo: Vec<HashMap<Tuple, Rc<Vec<Rational>>>>,
    ones: Rc<Vec<Rational>>,
}

impl<'a> PrefixProducts<'a> {
    fn new(chain: &'a [&'a WeightedConstraint], x: Var, domain: u32) -> Self {
        let reduced: Vec<Vec<Var>> = chain
            .iter()
            .map(|c| c.scope().iter().copied().filter(|&v| v != x).collect())
            .collect();
        let x_pos = chain
            .iter()
            .map(|c| c.scope().binary_search(&x).expect("x in scope"))
            .collect();
        let restrict = (0..chain.len())
            .map(|i| {
                if i == 0 {
                    return Vec::new();
                }
                reduced[i - 1]
                    .iter()
                    .map(|v| reduced[i].binary_search(v).expect("chain is nested"))
                    .collect()
            })
            .collect();
        PrefixProducts {
            chain,
            x_pos,
            restrict,
            domain,
            memo: vec![HashMap::new(); chain.len()],
            ones: Rc::new(vec![Rational::one(); domain as usize]),
        }
    }

    /// Projects a tuple over `scope_level \ x` onto `scope_{level-1} \ x`.
    fn restrict_down(&self, level: usize, a: &[u32]) -> Tuple {
        self.restrict[level].iter().map(|&k| a[k]).collect()
    }

    /// `P_{level+1}(a, d)` for all `d`; `level` is a 0-based chain index, and
    /// `None` stands for the empty prefix.
    fn get(&mut self, level: Option<usize>, a: &[u32]) -> Rc<Vec<Rational>> {
        let Some(level) = level else {
            return self.ones.clone();
        };
        if let Some(hit) = self.memo[level].get(a) {
            return hit.clone();
        }
        let prev = if level == 0 {
            self.ones.clone()
        } else {
            let down = self.restrict_down(level, a);
            self.get(Some(level - 1), &down)
        };
        let c = self.chain[level];
        let mut full = Vec::with_capacity(a.len() + 1);
        full.extend_from_slice(&a[..self.x_pos[level]]);
        full.push(0);
        full.extend_from_slice(&a[self.x_pos[level]..]);
        let values: Vec<Rational> = (0..self.domain)
            .map(|d| {
                full[self.x_pos[level]] = d;
                &prev[d as usize] * c.value(&full)
            })
            .collect();
        let values = Rc::new(values);
        self.memo[level].insert(a.to_vec(), values.clone());
        values
    }
}

fn aggregate(values: &[Rational], mode: EvalMode) -> Rational {
    let mut acc = Rational::zero();
    for v in values {
        mode.combine(&mut acc, v.clone());
    }
    acc
}

/// New scope and support for every member of the chain, in chain order.
fn rewrite_chain(
    chain: &[&WeightedConstraint],
    x: Var,
    domain: u32,
    mode: EvalMode,
) -> Vec<(Vec<Var>, BTreeMap<Tuple, Rational>)> {
    let mut prefix = PrefixProducts::new(chain, x, domain);
    let mut out = Vec::with_capacity(chain.len());
    for (level, c) in chain.iter().enumerate() {
        let x_pos = prefix.x_pos[level];
        let projected: BTreeSet<Tuple> = c
            .support()
            .keys()
            .map(|k| {
                let mut t = k.clone();
                t.remove(x_pos);
                t
            })
            .collect();
        let mut support = BTreeMap::new();
        for a in projected {
            let numer = aggregate(&prefix.get(Some(level), &a), mode);
            let denom = if level == 0 {
                aggregate(&prefix.get(None, &[]), mode)
            } else {
                let down = prefix.restrict_down(level, &a);
                aggregate(&prefix.get(Some(level - 1), &down), mode)
            };
            let value = numer.checked_div(&denom).unwrap_or_else(Rational::zero);
            support.insert(a, value);
        }
        let scope = c.scope().iter().copied().filter(|&v| v != x).collect();
        out.push((scope, support));
    }
    out
}

/// `w(I)` (sum) or `m(I)` (max), scalar included.
///
/// Merges equal scopes, then eliminates along the greedy beta-elimination
/// order. Fails with [`Error::NotBetaAcyclic`] otherwise.
pub fn solve(instance: &WcspInstance, mode: EvalMode) -> Result<Rational> {
    let merged = merge_equal_scopes(instance);
    let mut state = ElimState::new(merged)?;
    state.run(mode)?;
    state.result(mode)
}

/// The dependency sets `I_k(c)` after `k` steps along `order`, for an
/// instance with pairwise distinct scopes.
pub fn compute_i_k(
    instance: &WcspInstance,
    order: &EliminationOrder,
    k: usize,
) -> BTreeMap<ConstraintId, BTreeSet<ConstraintId>> {
    let comparator = PrecComparator::new(order);
    let constraints = instance.constraints();
    let mut sets: Vec<BTreeSet<ConstraintId>> = constraints
        .iter()
        .map(|c| BTreeSet::from([c.id()]))
        .collect();
    for x in order.iter().take(k) {
        let mut members: Vec<&WeightedConstraint> = constraints
            .iter()
            .filter(|c| c.original_scope().binary_search(&x).is_ok())
            .collect();
        members.sort_by(|a, b| comparator.compare(a, b).then(a.id().cmp(&b.id())));
        for w in members.windows(2) {
            let lower = sets[w[0].id().0].clone();
            sets[w[1].id().0].extend(lower);
        }
    }
    constraints
        .iter()
        .map(|c| (c.id(), sets[c.id().0].clone()))
        .collect()
}
