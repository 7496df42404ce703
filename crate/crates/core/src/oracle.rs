//! Brute-force reference implementations.
//!
//! Everything here enumerates assignments or cycles directly and is only
//! meant for small inputs in tests. Input-size guards fail loudly instead of
//! running for hours.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use num_bigint::BigUint;

use crate::elim::{compute_i_k, ElimState};
use crate::error::{Error, Result};
use crate::formula::CnfFormula;
use crate::hypergraph::{Hypergraph, IncidenceGraph};
use crate::rational::Rational;
use crate::wcsp::{merge_equal_scopes, EvalMode, WcspInstance, WeightedConstraint};
use crate::Var;

/// Maximum number of enumerated variables.
pub const ENUMERATION_LIMIT: usize = 24;

/// Maximum node count accepted by [`brute_chordal_bipartite`].
pub const CYCLE_SEARCH_LIMIT: usize = 16;

fn guard(free: usize) -> Result<()> {
    if free > ENUMERATION_LIMIT {
        return Err(Error::GuardExceeded {
            free,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

/// Clauses as bit masks over the formula's used variables.
fn clause_masks(f: &CnfFormula) -> Result<Vec<(u32, u32)>> {
    let vars: Vec<Var> = f.vars().into_iter().collect();
    guard(vars.len())?;
    let bit = |v: Var| 1u32 << vars.binary_search(&v).expect("used var");
    Ok(f.clauses()
        .iter()
        .map(|c| {
            c.literals().iter().fold((0, 0), |(pos, neg), l| {
                if l.positive {
                    (pos | bit(l.var), neg)
                } else {
                    (pos, neg | bit(l.var))
                }
            })
        })
        .collect())
}

fn satisfied(masks: &[(u32, u32)], assignment: u32) -> usize {
    masks
        .iter()
        .filter(|&&(pos, neg)| assignment & pos != 0 || !assignment & neg != 0)
        .count()
}

/// Model count over all declared variables.
pub fn brute_count(f: &CnfFormula) -> Result<BigUint> {
    let masks = clause_masks(f)?;
    if f.empty_clause_count() > 0 {
        return Ok(BigUint::ZERO);
    }
    let used = f.vars().len();
    let models = (0u32..1 << used)
        .filter(|&a| satisfied(&masks, a) == masks.len())
        .count();
    Ok(BigUint::from(models) << f.isolated_variables())
}

/// Maximum number of satisfied clauses, tautologies included.
pub fn brute_max_sat(f: &CnfFormula) -> Result<u64> {
    let masks = clause_masks(f)?;
    let used = f.vars().len();
    let best = (0u32..1 << used)
        .map(|a| satisfied(&masks, a))
        .max()
        .unwrap_or(0);
    Ok((best + f.tautology_count()) as u64)
}

/// Sum (or max) over all extensions of `partial` to the variables of
/// `constraints` of the product of their values. The empty collection
/// evaluates to 1.
pub fn brute_w(
    constraints: &[&WeightedConstraint],
    domain_size: u32,
    partial: &BTreeMap<Var, u32>,
    mode: EvalMode,
) -> Result<Rational> {
    let vars: BTreeSet<Var> = constraints
        .iter()
        .flat_map(|c| c.scope().iter().copied())
        .collect();
    let free: Vec<Var> = vars
        .iter()
        .copied()
        .filter(|v| !partial.contains_key(v))
        .collect();
    guard(free.len())?;

    let max_var = vars
        .iter()
        .chain(partial.keys())
        .map(|v| v.index() as usize)
        .max()
        .unwrap_or(0);
    let mut assignment = vec![0u32; max_var + 1];
    for (v, &d) in partial {
        assignment[v.index() as usize] = d;
    }

    let mut acc = Rational::zero();
    let mut counter = vec![0u32; free.len()];
    loop {
        for (v, &d) in free.iter().zip(&counter) {
            assignment[v.index() as usize] = d;
        }
        let mut product = Rational::one();
        for c in constraints {
            product *= c.value_under(&assignment);
            if product.is_zero() {
                break;
            }
        }
        mode.combine(&mut acc, product);

        // odometer increment
        let mut i = 0;
        loop {
            if i == counter.len() {
                return Ok(acc);
            }
            counter[i] += 1;
            if counter[i] < domain_size {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
    }
}

/// `scalar · w(I)` or `scalar · m(I)` by enumeration.
pub fn brute_instance(instance: &WcspInstance, mode: EvalMode) -> Result<Rational> {
    let all: Vec<&WeightedConstraint> = instance.constraints().iter().collect();
    let w = brute_w(&all, instance.domain_size(), &BTreeMap::new(), mode)?;
    Ok(instance.scalar() * &w)
}

/// Every assignment of `scope` over the domain, in lexicographic order.
pub fn all_tuples(arity: usize, domain_size: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(arity)];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..domain_size).map(move |d| {
                    let mut t = t.clone();
                    t.push(d);
                    t
                })
            })
            .collect();
    }
    out
}

fn is_bipartite(g: &IncidenceGraph) -> bool {
    let mut color: Vec<Option<bool>> = vec![None; g.num_nodes()];
    for start in 0..g.num_nodes() {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].expect("colored");
            for &w in g.neighbors(u) {
                match color[w] {
                    None => {
                        color[w] = Some(!cu);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == cu => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

/// Extends the induced path `path` (whose first node is its smallest) and
/// reports whether some chordless cycle of length at least 6 closes it.
fn long_chordless_cycle_from(
    g: &IncidenceGraph,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
) -> bool {
    let start = path[0];
    let last = *path.last().expect("non-empty");
    for &w in g.neighbors(last) {
        if w <= start || on_path[w] {
            continue;
        }
        // w may touch only `last` and, to close a cycle, `start`
        let inner = if path.len() > 2 {
            &path[1..path.len() - 1]
        } else {
            &[][..]
        };
        let touches_inner = inner.iter().any(|&p| g.adjacent(w, p));
        if touches_inner {
            continue;
        }
        if path.len() >= 2 && g.adjacent(w, start) {
            if path.len() + 1 >= 6 {
                return true;
            }
            continue;
        }
        path.push(w);
        on_path[w] = true;
        let found = long_chordless_cycle_from(g, path, on_path);
        on_path[w] = false;
        path.pop();
        if found {
            return true;
        }
    }
    false
}

/// Bipartite and no chordless cycle of length ≥ 6, for graphs of at most
/// `limit` nodes.
pub fn brute_chordal_bipartite_with_limit(g: &IncidenceGraph, limit: usize) -> Result<bool> {
    if g.num_nodes() > limit {
        return Err(Error::GuardExceeded {
            free: g.num_nodes(),
            limit,
        });
    }
    if !is_bipartite(g) {
        return Ok(false);
    }
    let mut on_path = vec![false; g.num_nodes()];
    for s in 0..g.num_nodes() {
        let mut path = vec![s];
        on_path[s] = true;
        let found = long_chordless_cycle_from(g, &mut path, &mut on_path);
        on_path[s] = false;
        if found {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn brute_chordal_bipartite(g: &IncidenceGraph) -> Result<bool> {
    brute_chordal_bipartite_with_limit(g, CYCLE_SEARCH_LIMIT)
}

/// Whether some ordering of all vertices is a beta-elimination order, by
/// exhaustive search (memoized on the residual vertex set).
pub fn exhaustive_beta_acyclic(h: &Hypergraph) -> Result<bool> {
    if h.vertices().len() > ENUMERATION_LIMIT {
        return Err(Error::GuardExceeded {
            free: h.vertices().len(),
            limit: ENUMERATION_LIMIT,
        });
    }
    fn search(h: &Hypergraph, dead: &mut HashSet<BTreeSet<Var>>) -> bool {
        if h.is_empty() {
            return true;
        }
        if dead.contains(h.vertices()) {
            return false;
        }
        for &x in h.vertices() {
            if h.is_nest_point(x).expect("vertex of h") {
                let rest = h.remove_vertex(x).expect("vertex of h");
                if search(&rest, dead) {
                    return true;
                }
            }
        }
        dead.insert(h.vertices().clone());
        false
    }
    Ok(search(h, &mut HashSet::new()))
}

/// Counts of what [`check_explicit_form`] verified.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExplicitFormReport {
    pub steps: usize,
    pub identities: usize,
    pub zero_values: usize,
}

/// Runs the whole elimination on the merged instance and checks, after every
/// step `k`, for every constraint `c` and every assignment `a` of its
/// residual scope, that either `c⁽ᵏ⁾(a) = 0` or
///
/// ```text
/// |D|^t · c⁽ᵏ⁾(a) · w(I_k(c) \ {c}, a) = w(I_k(c), a)      (sum, t ≤ k)
///         c⁽ᵏ⁾(a) · m(I_k(c) \ {c}, a) = m(I_k(c), a)      (max)
/// ```
///
/// where the right-hand sides enumerate the original constraints.
pub fn check_explicit_form(instance: &WcspInstance, mode: EvalMode) -> Result<ExplicitFormReport> {
    let base = merge_equal_scopes(instance);
    let mut state = ElimState::new(base.clone())?;
    let domain = base.domain_size();
    let mut report = ExplicitFormReport::default();

    loop {
        let k = state.step();
        let deps = compute_i_k(&base, state.order(), k);
        for c in state.instance().constraints() {
            let t = state.alpha_exponent(c.id());
            if t as usize > k {
                return Err(Error::Invariant(format!(
                    "step {k}: exponent {t} of {} exceeds k",
                    c.id()
                )));
            }
            let dep: Vec<&WeightedConstraint> =
                deps[&c.id()].iter().map(|&d| base.constraint(d)).collect();
            let others: Vec<&WeightedConstraint> =
                dep.iter().copied().filter(|d| d.id() != c.id()).collect();
            let scale = match mode {
                EvalMode::Sum => Rational::from(u64::from(domain)).pow(t),
                EvalMode::Max => Rational::one(),
            };
            for tuple in all_tuples(c.scope().len(), domain) {
                let value = c.value(&tuple);
                if value.is_zero() {
                    report.zero_values += 1;
                    continue;
                }
                let a: BTreeMap<Var, u32> = c
                    .scope()
                    .iter()
                    .copied()
                    .zip(tuple.iter().copied())
                    .collect();
                let lhs = &(&scale * value) * &brute_w(&others, domain, &a, mode)?;
                let rhs = brute_w(&dep, domain, &a, mode)?;
                if lhs != rhs {
                    return Err(Error::Invariant(format!(
                        "step {k}, {} at {tuple:?}: {lhs} != {rhs}",
                        c.id()
                    )));
                }
                report.identities += 1;
            }
        }
        if state.eliminate_next(mode)?.is_none() {
            break;
        }
        report.steps += 1;
    }
    Ok(report)
}
