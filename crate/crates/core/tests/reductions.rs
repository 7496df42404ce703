mod common;

use std::collections::BTreeMap;

use common::{formula, instance};
use nestcount::formula::parse_dimacs;
use nestcount::hypergraph::is_beta_acyclic;
use nestcount::oracle::{brute_count, brute_instance, brute_max_sat, brute_w};
use nestcount::wcsp::{cnf_to_count_instance, cnf_to_max_instance, merge_equal_scopes};
use nestcount::wcspd::{parse_wcspd, serialize_wcspd};
use nestcount::{count_models, max_sat, EvalMode, Rational, Var, WeightedConstraint};
use num_bigint::BigUint;
use proptest::prelude::*;

fn assignment(bits: u32, n: u32) -> BTreeMap<Var, u32> {
    (1..=n)
        .map(|i| (Var::new(i), (bits >> (i - 1)) & 1))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn count_encoding_is_the_satisfaction_indicator(f in formula(8, 8)) {
        prop_assume!(f.empty_clause_count() == 0);
        let inst = cnf_to_count_instance(&f).unwrap();
        let cs: Vec<&WeightedConstraint> = inst.constraints().iter().collect();
        let n = f.declared_var_count();
        for bits in 0..1u32 << n {
            let a = assignment(bits, n);
            let sat = f.clauses().iter().all(|c| c.is_satisfied_by(|x| a[&x] == 1));
            let expected = if sat { Rational::one() } else { Rational::zero() };
            prop_assert_eq!(brute_w(&cs, 2, &a, EvalMode::Sum).unwrap(), expected);
        }
        prop_assert_eq!(inst.hypergraph(), f.hypergraph());
    }

    #[test]
    fn max_encoding_counts_satisfied_clauses(f in formula(8, 8)) {
        let inst = cnf_to_max_instance(&f);
        let cs: Vec<&WeightedConstraint> = inst.constraints().iter().collect();
        let n = f.declared_var_count();
        for bits in 0..1u32 << n {
            let a = assignment(bits, n);
            let s = f.clauses().iter().filter(|c| c.is_satisfied_by(|x| a[&x] == 1)).count();
            let expected = Rational::from(BigUint::from(1u32) << s);
            prop_assert_eq!(brute_w(&cs, 2, &a, EvalMode::Max).unwrap(), expected);
        }
    }

    #[test]
    fn oracle_reduction_identities(f in formula(10, 10)) {
        if f.empty_clause_count() == 0 {
            let w = brute_instance(&cnf_to_count_instance(&f).unwrap(), EvalMode::Sum).unwrap();
            let lifted = w.to_integer().unwrap() << f.isolated_variables();
            prop_assert_eq!(lifted, brute_count(&f).unwrap());
        }
        let m = brute_instance(&cnf_to_max_instance(&f), EvalMode::Max).unwrap();
        let s = m.exact_log2().expect("power of two");
        prop_assert_eq!(s + f.tautology_count() as u64, brute_max_sat(&f).unwrap());
    }

    #[test]
    fn solver_matches_oracles_on_acyclic_formulas(f in formula(9, 7)) {
        prop_assume!(is_beta_acyclic(&f.hypergraph()));
        prop_assert_eq!(count_models(&f).unwrap(), brute_count(&f).unwrap());
        prop_assert_eq!(max_sat(&f).unwrap(), brute_max_sat(&f).unwrap());
    }

    #[test]
    fn merge_preserves_w_and_m(inst in instance(4, 6)) {
        let merged = merge_equal_scopes(&inst);
        prop_assert!(merged.size() <= inst.size());
        let scopes: std::collections::BTreeSet<_> = merged.constraints().iter().map(|c| c.scope().to_vec()).collect();
        prop_assert_eq!(scopes.len(), merged.constraints().len());
        for mode in [EvalMode::Sum, EvalMode::Max] {
            prop_assert_eq!(brute_instance(&merged, mode).unwrap(), brute_instance(&inst, mode).unwrap());
        }
    }

    #[test]
    fn zero_on_a_subinstance_is_zero_on_the_whole(
        inst in instance(4, 6),
        mask in any::<u64>(),
        partial in prop::collection::vec(prop::option::of(0u32..2), 4),
    ) {
        let all: Vec<&WeightedConstraint> = inst.constraints().iter().collect();
        let sub: Vec<&WeightedConstraint> = all.iter().enumerate()
            .filter(|(i, _)| mask >> (i % 64) & 1 == 1)
            .map(|(_, c)| *c)
            .collect();
        let a: BTreeMap<Var, u32> = partial.iter().enumerate()
            .filter_map(|(i, d)| d.map(|d| (Var::new(i as u32 + 1), d)))
            .filter(|(v, _)| v.index() <= inst.num_vars())
            .collect();
        let d = inst.domain_size();
        if brute_w(&sub, d, &a, EvalMode::Sum).unwrap().is_zero() {
            prop_assert!(brute_w(&all, d, &a, EvalMode::Sum).unwrap().is_zero());
        }
    }

    #[test]
    fn dimacs_round_trip_is_a_fixpoint(f in formula(8, 10)) {
        let text = f.to_dimacs();
        let once = parse_dimacs(&text).unwrap();
        prop_assert_eq!(&once, &f);
        prop_assert_eq!(once.to_dimacs(), text);
    }

    #[test]
    fn clause_bookkeeping_matches_header(f in formula(8, 10)) {
        let parsed = parse_dimacs(&f.to_dimacs()).unwrap();
        let lines = parsed.to_dimacs().lines().count() - 1;
        prop_assert_eq!(parsed.clauses().len() + parsed.tautology_count() + parsed.empty_clause_count(), lines);
        prop_assert!(parsed.warnings().is_empty());
        let h = parsed.hypergraph();
        prop_assert!(h.edges().all(|e| !e.is_empty()));
        prop_assert!(h.num_edges() <= parsed.clauses().len());
    }

    #[test]
    fn rationals_stay_normalized(inst in instance(4, 6)) {
        for c in inst.constraints() {
            prop_assert!(c.default_value().is_normalized());
            prop_assert!(c.support().values().all(Rational::is_normalized));
        }
        prop_assert!(brute_instance(&inst, EvalMode::Sum).unwrap().is_normalized());
    }

    #[test]
    fn wcspd_round_trip(inst in instance(4, 6)) {
        let text = serialize_wcspd(&inst);
        let back = parse_wcspd(&text).unwrap();
        prop_assert_eq!(serialize_wcspd(&back), text);
        for mode in [EvalMode::Sum, EvalMode::Max] {
            prop_assert_eq!(brute_instance(&back, mode).unwrap(), brute_instance(&inst, mode).unwrap());
        }
    }
}
