mod common;

use common::acyclic_instance;
use nestcount::hypergraph::beta_elimination_order;
use nestcount::oracle::{brute_instance, check_explicit_form};
use nestcount::wcsp::merge_equal_scopes;
use nestcount::{solve, ElimState, EvalMode, Rational};
use proptest::prelude::*;

fn dense(inst: &nestcount::WcspInstance) -> Rational {
    Rational::from(u64::from(inst.domain_size()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn solve_matches_enumeration(inst in acyclic_instance(8, 3)) {
        for mode in [EvalMode::Sum, EvalMode::Max] {
            prop_assert_eq!(solve(&inst, mode).unwrap(), brute_instance(&inst, mode).unwrap());
        }
    }

    #[test]
    fn single_step_soundness(inst in acyclic_instance(8, 3), pick in any::<prop::sample::Index>()) {
        let h = inst.hypergraph();
        let nest: Vec<_> = h.vertices().iter().copied().filter(|&x| h.is_nest_point(x).unwrap()).collect();
        let x = nest[pick.index(nest.len())];
        let rest = beta_elimination_order(&h.remove_vertex(x).unwrap()).unwrap();
        let order: Vec<_> = std::iter::once(x).chain(rest.iter()).collect();

        for mode in [EvalMode::Sum, EvalMode::Max] {
            let mut state = ElimState::with_order(inst.clone(), order.clone()).unwrap();
            state.eliminate_nest_point(x, mode).unwrap();
            let after = state.instance();
            prop_assert!(after.size() <= inst.size());
            prop_assert_eq!(after.hypergraph(), h.remove_vertex(x).unwrap());
            let before = brute_instance(&inst, mode).unwrap();
            let reduced = brute_instance(after, mode).unwrap();
            match mode {
                EvalMode::Sum => prop_assert_eq!(&dense(&inst) * &reduced, before),
                EvalMode::Max => prop_assert_eq!(reduced, before),
            }
        }
    }

    #[test]
    fn alpha_exponents_are_bounded(inst in acyclic_instance(8, 3)) {
        let mut state = ElimState::new(merge_equal_scopes(&inst)).unwrap();
        while state.eliminate_next(EvalMode::Sum).unwrap().is_some() {
            for c in state.instance().constraints() {
                prop_assert!(state.alpha_exponent(c.id()) as usize <= state.step());
                prop_assert!(c.scope().iter().all(|v| !state.order().as_slice()[..state.step()].contains(v)));
            }
        }
    }

    #[test]
    fn deterministic(inst in acyclic_instance(8, 3)) {
        let run = || {
            let mut s = ElimState::new(merge_equal_scopes(&inst)).unwrap();
            s.run(EvalMode::Sum).unwrap();
            (s.instance().clone(), s.result(EvalMode::Sum).unwrap())
        };
        prop_assert_eq!(run(), run());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn explicit_form_holds(inst in acyclic_instance(6, 3)) {
        for mode in [EvalMode::Sum, EvalMode::Max] {
            let report = check_explicit_form(&inst, mode).unwrap();
            prop_assert_eq!(report.steps, inst.vars().len());
        }
    }
}
