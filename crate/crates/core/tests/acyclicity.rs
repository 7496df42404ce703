mod common;

use common::{hypergraph, v};
use nestcount::hypergraph::{beta_elimination_order, is_beta_acyclic, EliminationOrder};
use nestcount::oracle::{brute_chordal_bipartite, exhaustive_beta_acyclic};
use nestcount::{Error, Hypergraph};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn greedy_agrees_with_exhaustive_search(h in hypergraph(8, 8)) {
        prop_assert_eq!(is_beta_acyclic(&h), exhaustive_beta_acyclic(&h).unwrap());
    }

    #[test]
    fn greedy_agrees_with_chordal_bipartite_oracle(h in hypergraph(8, 8)) {
        let g = h.incidence_graph();
        prop_assert_eq!(is_beta_acyclic(&h), brute_chordal_bipartite(&g).unwrap());
    }

    #[test]
    fn greedy_order_is_valid(h in hypergraph(8, 8)) {
        match beta_elimination_order(&h) {
            Ok(order) => {
                let again = EliminationOrder::validated(&h, order.as_slice().to_vec()).unwrap();
                prop_assert_eq!(again, order);
            }
            Err(Error::NotBetaAcyclic { witness }) => {
                let residual = h.induced(&witness);
                for &x in residual.vertices() {
                    prop_assert!(!residual.is_nest_point(x).unwrap());
                }
            }
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn remove_vertex_shrinks(h in hypergraph(8, 8), pick in any::<prop::sample::Index>()) {
        let verts: Vec<_> = h.vertices().iter().copied().collect();
        let x = verts[pick.index(verts.len())];
        let r = h.remove_vertex(x).unwrap();
        prop_assert_eq!(r.vertices().len() + 1, h.vertices().len());
        prop_assert!(r.num_edges() <= h.num_edges());
        prop_assert!(r.edges().all(|e| !e.is_empty()));
    }
}

#[test]
fn triangle_has_no_nest_point() {
    let h = Hypergraph::from_edges([vec![v(1), v(2)], vec![v(2), v(3)], vec![v(1), v(3)]]).unwrap();
    assert!(!is_beta_acyclic(&h));
    assert!(!brute_chordal_bipartite(&h.incidence_graph()).unwrap());
}

#[test]
fn triangle_plus_covering_edge_is_still_cyclic() {
    // beta-acyclicity is hereditary, unlike alpha-acyclicity
    let h = Hypergraph::from_edges([
        vec![v(1), v(2)],
        vec![v(2), v(3)],
        vec![v(1), v(3)],
        vec![v(1), v(2), v(3)],
    ])
    .unwrap();
    assert!(!is_beta_acyclic(&h));
    assert!(!exhaustive_beta_acyclic(&h).unwrap());
}
