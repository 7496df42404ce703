#![allow(dead_code)]

use nestcount::formula::CnfFormula;
use nestcount::gen::{gen_interval_wcsp, IntervalSpec, WeightSpec};
use nestcount::{Hypergraph, Rational, Var, WcspInstance, WeightedConstraint};
use proptest::prelude::*;

pub fn v(i: u32) -> Var {
    Var::new(i)
}

/// Hypergraphs with up to `max_v` vertices and `max_e` edges.
pub fn hypergraph(max_v: u32, max_e: usize) -> impl Strategy<Value = Hypergraph> {
    (1..=max_v).prop_flat_map(move |n| {
        prop::collection::vec(
            prop::collection::btree_set(1..=n, 1..=n as usize),
            1..=max_e,
        )
        .prop_map(|edges| {
            Hypergraph::from_edges(
                edges
                    .into_iter()
                    .map(|e| e.into_iter().map(Var::new).collect()),
            )
            .unwrap()
        })
    })
}

/// Small formulas, possibly with tautologies, repeated literals and empty
/// clauses.
pub fn formula(max_vars: u32, max_clauses: usize) -> impl Strategy<Value = CnfFormula> {
    (1..=max_vars).prop_flat_map(move |n| {
        let lit = (1..=n as i64, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
        prop::collection::vec(prop::collection::vec(lit, 0..=4), 0..=max_clauses)
            .prop_map(move |cs| CnfFormula::from_clauses(n, &cs).unwrap())
    })
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (0u64..=6, 1u64..=4).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

/// Arbitrary (not necessarily acyclic) instances over few variables.
pub fn instance(max_vars: u32, max_constraints: usize) -> impl Strategy<Value = WcspInstance> {
    (2u32..=3, 1..=max_vars).prop_flat_map(move |(d, n)| {
        let constraint = (
            prop::collection::btree_set(1..=n, 0..=(n as usize).min(3)),
            rational(),
            prop::collection::vec((prop::collection::vec(0..d, 3), rational()), 0..4),
        );
        prop::collection::vec(constraint, 0..=max_constraints).prop_map(move |cs| {
            let mut inst = WcspInstance::new(d, n).unwrap();
            for (scope, default, entries) in cs {
                let arity = scope.len();
                let mut c =
                    WeightedConstraint::new(scope.into_iter().map(Var::new), default).unwrap();
                for (mut t, val) in entries {
                    t.truncate(arity);
                    c.insert(t, val).unwrap();
                }
                inst.push(c).unwrap();
            }
            inst
        })
    })
}

/// Seeded beta-acyclic instances from the interval generator.
pub fn acyclic_instance(max_vars: u32, max_domain: u32) -> impl Strategy<Value = WcspInstance> {
    (
        any::<u64>(),
        1..=max_vars,
        1usize..=8,
        2..=max_domain,
        any::<bool>(),
    )
        .prop_map(|(seed, n, m, d, laminar)| {
            let spec = IntervalSpec {
                seed,
                num_vars: n,
                num_scopes: m,
                min_arity: 1,
                max_arity: (n as usize).min(3),
                laminar,
            };
            let w = WeightSpec {
                domain_size: d,
                max_numer: 6,
                max_denom: 4,
                max_support: 4,
            };
            gen_interval_wcsp(&spec, &w).unwrap()
        })
}
