//! Seeded instance generators.
//!
//! Interval generators place every scope on a contiguous run of a random
//! variable permutation. Any family of intervals is beta-acyclic (the
//! leftmost remaining variable is always a nest point); the laminar variant
//! additionally keeps every pair of scopes disjoint or nested.
//!
//! The hard-instance generator builds monotone formulas whose incidence graph
//! is the chordal bipartite expansion of a (subdivided) random base graph.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formula::{CnfFormula, Literal};
use crate::hypergraph::{beta_elimination_order, Hypergraph};
use crate::rational::Rational;
use crate::wcsp::{WcspInstance, WeightedConstraint};
use crate::Var;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalSpec {
    pub seed: u64,
    pub num_vars: u32,
    pub num_scopes: usize,
    pub min_arity: usize,
    pub max_arity: usize,
    pub laminar: bool,
}

impl IntervalSpec {
    pub fn new(seed: u64, num_vars: u32, num_scopes: usize) -> Self {
        IntervalSpec {
            seed,
            num_vars,
            num_scopes,
            min_arity: 1,
            max_arity: (num_vars as usize).clamp(1, 3),
            laminar: true,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.num_vars == 0 || self.num_scopes == 0 {
            return Err(Error::InvalidSpec(
                "variable and scope counts must be positive".into(),
            ));
        }
        if self.min_arity == 0 || self.min_arity > self.max_arity {
            return Err(Error::InvalidSpec(format!(
                "arity bounds {}..={} are empty or start at 0",
                self.min_arity, self.max_arity
            )));
        }
        if self.max_arity > self.num_vars as usize {
            return Err(Error::InvalidSpec(format!(
                "max arity {} exceeds variable count {}",
                self.max_arity, self.num_vars
            )));
        }
        Ok(())
    }
}

/// Weight ranges for generated constraint tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSpec {
    pub domain_size: u32,
    pub max_numer: u64,
    pub max_denom: u64,
    /// Upper bound on explicit support entries per constraint.
    pub max_support: usize,
}

impl Default for WeightSpec {
    fn default() -> Self {
        WeightSpec {
            domain_size: 2,
            max_numer: 20,
            max_denom: 20,
            max_support: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BaseGraph {
    ErdosRenyi {
        vertices: usize,
        edge_prob: f64,
    },
    Regular {
        vertices: usize,
        degree: usize,
    },
    Explicit {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct HardPsSpec {
    pub seed: u64,
    pub base: BaseGraph,
    /// Subdivide every base edge before the expansion.
    pub subdivide: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GenSpec {
    IntervalCnf(IntervalSpec),
    IntervalWcsp(IntervalSpec, WeightSpec),
    HardPs(HardPsSpec),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generated {
    Cnf(CnfFormula),
    Wcsp(WcspInstance),
}

pub fn generate(spec: &GenSpec) -> Result<Generated> {
    match spec {
        GenSpec::IntervalCnf(s) => gen_interval_cnf(s).map(Generated::Cnf),
        GenSpec::IntervalWcsp(s, w) => gen_interval_wcsp(s, w).map(Generated::Wcsp),
        GenSpec::HardPs(s) => gen_hardps(s).map(Generated::Cnf),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random interval scopes over a random variable permutation.
fn interval_scopes(spec: &IntervalSpec, rng: &mut ChaCha8Rng) -> Vec<Vec<Var>> {
    let n = spec.num_vars as usize;
    let mut perm: Vec<Var> = (1..=spec.num_vars).map(Var::new).collect();
    perm.shuffle(rng);

    let mut placed: Vec<(usize, usize)> = Vec::with_capacity(spec.num_scopes);
    let compatible = |placed: &[(usize, usize)], (l, r): (usize, usize)| {
        placed
            .iter()
            .all(|&(a, b)| r < a || b < l || (a <= l && r <= b) || (l <= a && b <= r))
    };
    for _ in 0..spec.num_scopes {
        let mut chosen = None;
        for _ in 0..200 {
            let len = rng.random_range(spec.min_arity..=spec.max_arity);
            let l = rng.random_range(0..=n - len);
            let cand = (l, l + len - 1);
            if !spec.laminar || compatible(&placed, cand) {
                chosen = Some(cand);
                break;
            }
        }
        // repeating an existing interval never breaks laminarity
        let cand = chosen.unwrap_or_else(|| placed[rng.random_range(0..placed.len())]);
        placed.push(cand);
    }
    placed
        .into_iter()
        .map(|(l, r)| {
            let mut s = perm[l..=r].to_vec();
            s.sort_unstable();
            s
        })
        .collect()
}

fn assert_acyclic(h: &Hypergraph) -> Result<()> {
    beta_elimination_order(h)
        .map(|_| ())
        .map_err(|e| Error::Invariant(format!("generator produced a cyclic hypergraph: {e}")))
}

pub fn gen_interval_cnf(spec: &IntervalSpec) -> Result<CnfFormula> {
    spec.validate()?;
    let mut rng = rng(spec.seed);
    let scopes = interval_scopes(spec, &mut rng);
    let mut f = CnfFormula::new(spec.num_vars);
    for scope in scopes {
        let lits: Vec<Literal> = scope
            .into_iter()
            .map(|v| Literal::new(v, rng.random_bool(0.5)))
            .collect();
        f.add_clause(&lits)?;
    }
    assert_acyclic(&f.hypergraph())?;
    Ok(f)
}

fn random_weight(w: &WeightSpec, rng: &mut ChaCha8Rng) -> Rational {
    let n = rng.random_range(0..=w.max_numer);
    let d = rng.random_range(1..=w.max_denom.max(1));
    Rational::new(n, d).expect("positive denominator")
}

pub fn gen_interval_wcsp(spec: &IntervalSpec, weights: &WeightSpec) -> Result<WcspInstance> {
    spec.validate()?;
    if weights.domain_size == 0 {
        return Err(Error::InvalidSpec("domain size must be positive".into()));
    }
    let mut rng = rng(spec.seed);
    let scopes = interval_scopes(spec, &mut rng);
    let mut instance = WcspInstance::new(weights.domain_size, spec.num_vars)?;
    for scope in scopes {
        let arity = scope.len();
        let mut c = WeightedConstraint::new(scope, random_weight(weights, &mut rng))?;
        let table = (weights.domain_size as u64).saturating_pow(arity as u32);
        let entries = rng.random_range(0..=weights.max_support.min(table as usize));
        let mut seen = BTreeSet::new();
        while seen.len() < entries {
            let tuple: Vec<u32> = (0..arity)
                .map(|_| rng.random_range(0..weights.domain_size))
                .collect();
            if seen.insert(tuple.clone()) {
                c.insert(tuple, random_weight(weights, &mut rng))?;
            }
        }
        instance.push(c)?;
    }
    assert_acyclic(&instance.hypergraph())?;
    Ok(instance)
}

/// An undirected simple graph on `0..vertices`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    /// Replaces every edge `uv` by a path `u w v` through a fresh vertex.
    pub fn subdivided(&self) -> SimpleGraph {
        let mut edges = Vec::with_capacity(2 * self.edges.len());
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            let w = self.vertices + i;
            edges.push((u, w));
            edges.push((w, v));
        }
        SimpleGraph {
            vertices: self.vertices + self.edges.len(),
            edges,
        }
    }
}

fn sample_base(base: &BaseGraph, rng: &mut ChaCha8Rng) -> Result<SimpleGraph> {
    match *base {
        BaseGraph::ErdosRenyi {
            vertices,
            edge_prob,
        } => {
            if vertices == 0 || !(0.0..=1.0).contains(&edge_prob) {
                return Err(Error::InvalidSpec(
                    "need at least one vertex and an edge probability in [0, 1]".into(),
                ));
            }
            let mut edges = Vec::new();
            for u in 0..vertices {
                for v in u + 1..vertices {
                    if rng.random_bool(edge_prob) {
                        edges.push((u, v));
                    }
                }
            }
            Ok(SimpleGraph { vertices, edges })
        }
        BaseGraph::Regular { vertices, degree } => {
            if vertices == 0 || degree >= vertices || (vertices * degree) % 2 != 0 {
                return Err(Error::InvalidSpec(format!(
                    "no simple {degree}-regular graph on {vertices} vertices"
                )));
            }
            // configuration model, retried until simple
            for _ in 0..10_000 {
                let mut stubs: Vec<usize> = (0..vertices)
                    .flat_map(|v| std::iter::repeat_n(v, degree))
                    .collect();
                stubs.shuffle(rng);
                let mut edges = BTreeSet::new();
                let simple = stubs.chunks(2).all(|p| {
                    let (u, v) = (p[0].min(p[1]), p[0].max(p[1]));
                    u != v && edges.insert((u, v))
                });
                if simple {
                    return Ok(SimpleGraph {
                        vertices,
                        edges: edges.into_iter().collect(),
                    });
                }
            }
            Err(Error::InvalidSpec(format!(
                "failed to sample a simple {degree}-regular graph on {vertices} vertices"
            )))
        }
        BaseGraph::Explicit {
            vertices,
            ref edges,
        } => {
            if let Some(&(u, v)) = edges
                .iter()
                .find(|&&(u, v)| u >= vertices || v >= vertices || u == v)
            {
                return Err(Error::InvalidSpec(format!("bad base edge ({u}, {v})")));
            }
            Ok(SimpleGraph {
                vertices,
                edges: edges.clone(),
            })
        }
    }
}

/// The monotone formula whose incidence graph is the chordal bipartite
/// expansion of `g`.
///
/// Every vertex `v` yields a variable `x_v` and a clause `y_v`; every edge
/// `e = uv` yields variables `q_{e,u}, q_{e,v}` and clauses `p_{e,u}, p_{e,v}`.
/// Adjacency: all `x_v y_u`, and per edge `p_{e,u} q_{e,u}`, `p_{e,v} q_{e,v}`,
/// `x_u p_{e,u}`, `y_v q_{e,u}`, `x_v p_{e,v}`, `y_u q_{e,v}`.
///
/// Variables are numbered `x_0 … x_{n-1}`, then `q_{e,u}, q_{e,v}` per edge;
/// clauses are `y_0 … y_{n-1}`, then `p_{e,u}, p_{e,v}` per edge.
pub fn expansion_formula(g: &SimpleGraph) -> CnfFormula {
    let n = g.vertices;
    let x = |v: usize| Var::new(v as u32 + 1);
    let q_u = |i: usize| Var::new((n + 2 * i) as u32 + 1);
    let q_v = |i: usize| Var::new((n + 2 * i + 1) as u32 + 1);

    let mut y: Vec<Vec<Var>> = (0..n).map(|_| (0..n).map(x).collect()).collect();
    let mut p: Vec<Vec<Var>> = Vec::with_capacity(2 * g.edges.len());
    for (i, &(u, v)) in g.edges.iter().enumerate() {
        y[v].push(q_u(i));
        y[u].push(q_v(i));
        p.push(vec![x(u), q_u(i)]);
        p.push(vec![x(v), q_v(i)]);
    }

    let mut f = CnfFormula::new((n + 2 * g.edges.len()) as u32);
    for clause in y.into_iter().chain(p) {
        let lits: Vec<Literal> = clause.into_iter().map(|v| Literal::new(v, true)).collect();
        f.add_clause(&lits).expect("variables in range");
    }
    f
}

pub fn gen_hardps(spec: &HardPsSpec) -> Result<CnfFormula> {
    let mut rng = rng(spec.seed);
    let base = sample_base(&spec.base, &mut rng)?;
    let g = if spec.subdivide {
        base.subdivided()
    } else {
        base
    };
    let f = expansion_formula(&g);
    assert_acyclic(&f.hypergraph())?;
    Ok(f)
}

/// A random hypergraph with up to `max_vertices` vertices and up to
/// `max_edges` edges; used to probe acyclicity checks.
pub fn random_hypergraph(seed: u64, max_vertices: u32, max_edges: usize) -> Hypergraph {
    let mut rng = rng(seed);
    let n = rng.random_range(1..=max_vertices.max(1));
    let m = rng.random_range(1..=max_edges.max(1));
    let max_len = rng.random_range(2..=n.max(2)).min(n) as usize;
    let edges: Vec<Vec<Var>> = (0..m)
        .map(|_| {
            let len = rng.random_range(1..=max_len);
            let mut vars: Vec<Var> = (1..=n).map(Var::new).collect();
            vars.shuffle(&mut rng);
            vars.truncate(len);
            vars
        })
        .collect();
    Hypergraph::from_edges(edges).expect("non-empty edges")
}

/// A formula with one clause per hypergraph edge and random polarities.
pub fn hypergraph_formula(h: &Hypergraph, seed: u64) -> CnfFormula {
    let mut rng = rng(seed);
    let n = h.vertices().iter().map(|v| v.index()).max().unwrap_or(0);
    let mut f = CnfFormula::new(n);
    for e in h.edges() {
        let lits: Vec<Literal> = e
            .iter()
            .map(|&v| Literal::new(v, rng.random_bool(0.5)))
            .collect();
        f.add_clause(&lits).expect("in range");
    }
    f
}
