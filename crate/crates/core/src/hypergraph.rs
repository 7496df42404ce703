//! Hypergraphs, nest points and beta-elimination orders.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::Var;

/// A finite vertex set with a set of non-empty edges over it. Edges are
/// stored as sorted, duplicate-free vertex lists.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    vertices: BTreeSet<Var>,
    edges: BTreeSet<Vec<Var>>,
}

fn canonical(edge: impl IntoIterator<Item = Var>) -> Vec<Var> {
    let mut e: Vec<Var> = edge.into_iter().collect();
    e.sort_unstable();
    e.dedup();
    e
}

/// `a ⊆ b` for sorted slices.
pub(crate) fn is_subset(a: &[Var], b: &[Var]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut it = b.iter();
    'outer: for x in a {
        for y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

/// Whether the given sorted edges, taken together, form an inclusion chain.
fn forms_chain<'a>(edges: impl IntoIterator<Item = &'a [Var]>) -> bool {
    let mut edges: Vec<&[Var]> = edges.into_iter().collect();
    edges.sort_by_key(|e| e.len());
    edges.windows(2).all(|w| is_subset(w[0], w[1]))
}

impl Hypergraph {
    pub fn new(
        vertices: impl IntoIterator<Item = Var>,
        edges: impl IntoIterator<Item = Vec<Var>>,
    ) -> Result<Self> {
        let vertices: BTreeSet<Var> = vertices.into_iter().collect();
        let mut set = BTreeSet::new();
        for e in edges {
            let e = canonical(e);
            if e.is_empty() {
                return Err(Error::Precondition(
                    "hypergraph edges must be non-empty".into(),
                ));
            }
            if let Some(v) = e.iter().find(|v| !vertices.contains(v)) {
                return Err(Error::UnknownVertex(*v));
            }
            set.insert(e);
        }
        Ok(Hypergraph {
            vertices,
            edges: set,
        })
    }

    /// Hypergraph whose vertex set is the union of the edges.
    pub fn from_edges(edges: impl IntoIterator<Item = Vec<Var>>) -> Result<Self> {
        let edges: Vec<Vec<Var>> = edges.into_iter().collect();
        let vertices: BTreeSet<Var> = edges.iter().flatten().copied().collect();
        Hypergraph::new(vertices, edges)
    }

    pub fn vertices(&self) -> &BTreeSet<Var> {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = &[Var]> + '_ {
        self.edges.iter().map(Vec::as_slice)
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `‖H‖`, the sum of edge sizes.
    pub fn size(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn contains_edge(&self, edge: &[Var]) -> bool {
        self.edges.contains(&canonical(edge.iter().copied()))
    }

    pub fn edges_containing(&self, x: Var) -> impl Iterator<Item = &[Var]> + '_ {
        self.edges().filter(move |e| e.binary_search(&x).is_ok())
    }

    /// True iff the edges containing `x` form an inclusion chain.
    pub fn is_nest_point(&self, x: Var) -> Result<bool> {
        if !self.vertices.contains(&x) {
            return Err(Error::UnknownVertex(x));
        }
        Ok(forms_chain(self.edges_containing(x)))
    }

    /// Induced subhypergraph on `keep`.
    pub fn induced(&self, keep: &BTreeSet<Var>) -> Hypergraph {
        let vertices: BTreeSet<Var> = self.vertices.intersection(keep).copied().collect();
        let edges = self
            .edges
            .iter()
            .map(|e| {
                e.iter()
                    .copied()
                    .filter(|v| keep.contains(v))
                    .collect::<Vec<_>>()
            })
            .filter(|e| !e.is_empty())
            .collect();
        Hypergraph { vertices, edges }
    }

    pub fn remove_vertex(&self, x: Var) -> Result<Hypergraph> {
        if !self.vertices.contains(&x) {
            return Err(Error::UnknownVertex(x));
        }
        let mut keep = self.vertices.clone();
        keep.remove(&x);
        Ok(self.induced(&keep))
    }

    pub fn incidence_graph(&self) -> IncidenceGraph {
        IncidenceGraph::of(self)
    }
}

/// A sequence of vertices, each a nest point once its predecessors are gone.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EliminationOrder(Vec<Var>);

impl EliminationOrder {
    pub fn as_slice(&self) -> &[Var] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().copied()
    }

    /// Wraps `order` after checking that it is a beta-elimination order of `h`.
    pub fn validated(h: &Hypergraph, order: Vec<Var>) -> Result<Self> {
        let as_set: BTreeSet<Var> = order.iter().copied().collect();
        if as_set.len() != order.len() || &as_set != h.vertices() {
            return Err(Error::Precondition(
                "elimination order must be a permutation of the vertices".into(),
            ));
        }
        let mut residual = h.clone();
        for &x in &order {
            if !residual.is_nest_point(x)? {
                return Err(Error::NotANestPoint(x));
            }
            residual = residual.remove_vertex(x)?;
        }
        Ok(EliminationOrder(order))
    }
}

impl IntoIterator for EliminationOrder {
    type Item = Var;
    type IntoIter = std::vec::IntoIter<Var>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

/// Greedy nest-point elimination with smallest-index tie-break.
///
/// Fails with the residual vertex set when no nest point is left.
pub fn beta_elimination_order(h: &Hypergraph) -> Result<EliminationOrder> {
    let mut edges: Vec<Vec<Var>> = h.edges.iter().cloned().collect();
    let mut incident: BTreeMap<Var, Vec<usize>> =
        h.vertices.iter().map(|&v| (v, Vec::new())).collect();
    for (i, e) in edges.iter().enumerate() {
        for v in e {
            incident.get_mut(v).expect("edge vertex").push(i);
        }
    }

    let mut order = Vec::with_capacity(incident.len());
    while !incident.is_empty() {
        let next = incident
            .iter()
            .find(|(_, ids)| forms_chain(ids.iter().map(|&i| edges[i].as_slice())))
            .map(|(&v, _)| v);
        let Some(x) = next else {
            return Err(Error::NotBetaAcyclic {
                witness: incident.keys().copied().collect(),
            });
        };
        for i in incident.remove(&x).expect("present") {
            edges[i].retain(|&v| v != x);
        }
        order.push(x);
    }
    Ok(EliminationOrder(order))
}

pub fn is_beta_acyclic(h: &Hypergraph) -> bool {
    beta_elimination_order(h).is_ok()
}

/// Bipartite vertex/edge incidence graph. Nodes `0..left_len()` stand for
/// hypergraph vertices, the rest for edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceGraph {
    left: usize,
    right: usize,
    adjacency: Vec<Vec<usize>>,
}

impl IncidenceGraph {
    fn of(h: &Hypergraph) -> Self {
        let index: BTreeMap<Var, usize> = h
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let pairs: Vec<(usize, usize)> = h
            .edges
            .iter()
            .enumerate()
            .flat_map(|(j, e)| e.iter().map(|v| (index[v], j)).collect::<Vec<_>>())
            .collect();
        IncidenceGraph::from_pairs(h.vertices.len(), h.edges.len(), &pairs)
    }

    /// Builds a bipartite graph from `(left, right)` index pairs.
    pub fn from_pairs(left: usize, right: usize, pairs: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![Vec::new(); left + right];
        for &(l, r) in pairs {
            assert!(l < left && r < right, "pair ({l}, {r}) out of range");
            adjacency[l].push(left + r);
            adjacency[left + r].push(l);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
            adj.dedup();
        }
        IncidenceGraph {
            left,
            right,
            adjacency,
        }
    }

    pub fn left_len(&self) -> usize {
        self.left
    }

    pub fn right_len(&self) -> usize {
        self.right
    }

    pub fn num_nodes(&self) -> usize {
        self.left + self.right
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency[..self.left].iter().map(Vec::len).sum()
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> Var {
        Var::new(i)
    }

    fn hg(edges: &[&[u32]]) -> Hypergraph {
        Hypergraph::from_edges(edges.iter().map(|e| e.iter().map(|&i| v(i)).collect())).unwrap()
    }

    #[test]
    fn nest_points() {
        let chain = hg(&[&[1], &[1, 2], &[1, 2, 3]]);
        assert!(chain.is_nest_point(v(1)).unwrap());

        let triangle = hg(&[&[1, 2], &[2, 3], &[3, 1]]);
        assert!(!triangle.is_nest_point(v(1)).unwrap());

        let closed = hg(&[&[1, 2], &[2, 3], &[3, 1], &[1, 2, 3]]);
        for i in 1..=3 {
            assert!(!closed.is_nest_point(v(i)).unwrap());
        }
        assert_eq!(chain.is_nest_point(v(9)), Err(Error::UnknownVertex(v(9))));
    }

    #[test]
    fn isolated_vertex_is_nest_point() {
        let h = Hypergraph::new([v(1), v(2)], [vec![v(1)]]).unwrap();
        assert!(h.is_nest_point(v(2)).unwrap());
    }

    #[test]
    fn remove_vertex_cases() {
        assert_eq!(
            hg(&[&[1, 2], &[1]]).remove_vertex(v(1)).unwrap(),
            hg(&[&[2]])
        );
        let merged = hg(&[&[1, 2], &[2]]).remove_vertex(v(1)).unwrap();
        assert_eq!(merged, hg(&[&[2]]));
        assert_eq!(merged.num_edges(), 1);
        assert!(hg(&[&[1]]).remove_vertex(v(1)).unwrap().is_empty());
        assert!(hg(&[&[1]]).remove_vertex(v(5)).is_err());
    }

    #[test]
    fn greedy_order_path() {
        let order = beta_elimination_order(&hg(&[&[1, 2], &[2, 3]])).unwrap();
        assert_eq!(order.as_slice(), &[v(1), v(2), v(3)]);
    }

    #[test]
    fn greedy_order_triangle_fails_with_witness() {
        match beta_elimination_order(&hg(&[&[1, 2], &[2, 3], &[3, 1]])) {
            Err(Error::NotBetaAcyclic { witness }) => {
                assert_eq!(witness, [v(1), v(2), v(3)].into_iter().collect())
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn witness_is_the_residual() {
        // vertex 4 hangs off the triangle and is removed first
        let h = hg(&[&[1, 2], &[2, 3], &[3, 1], &[3, 4]]);
        match beta_elimination_order(&h) {
            Err(Error::NotBetaAcyclic { witness }) => {
                assert_eq!(witness, [v(1), v(2), v(3)].into_iter().collect())
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_order() {
        assert!(beta_elimination_order(&Hypergraph::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn validated_order() {
        let h = hg(&[&[1, 2], &[2, 3]]);
        assert!(EliminationOrder::validated(&h, vec![v(3), v(1), v(2)]).is_ok());
        assert_eq!(
            EliminationOrder::validated(&h, vec![v(2), v(1), v(3)]),
            Err(Error::NotANestPoint(v(2)))
        );
        assert!(EliminationOrder::validated(&h, vec![v(1), v(2)]).is_err());
    }

    #[test]
    fn incidence_graphs() {
        let g = hg(&[&[1, 2]]).incidence_graph();
        assert_eq!((g.left_len(), g.right_len(), g.num_edges()), (2, 1, 2));
        assert!(g.adjacent(0, 2) && g.adjacent(1, 2));

        let g = hg(&[&[1], &[1, 2]]).incidence_graph();
        assert_eq!(g.neighbors(0).len(), 2);
        assert_eq!(g.neighbors(1).len(), 1);

        let g = Hypergraph::default().incidence_graph();
        assert_eq!(g.num_nodes(), 0);
    }

    #[test]
    fn subset_helper() {
        assert!(is_subset(&[v(1), v(3)], &[v(1), v(2), v(3)]));
        assert!(!is_subset(&[v(1), v(4)], &[v(1), v(2), v(3)]));
        assert!(is_subset(&[], &[v(1)]));
        assert!(!is_subset(&[v(1)], &[]));
    }
}
