//! Oblique neighbors and pseudoadjacency.
//!
//! A vertex `v` is an oblique neighbor of a tree edge `e` when `v` is
//! adjacent (in the host graph) to the endpoint of `e` farthest from `v` in
//! the tree. Both endpoints of an edge are oblique neighbors of it, since a
//! tree edge is also a graph edge; the counting identity below depends on
//! this.

use crate::graph::{Edge, Graph};
use crate::tree::RootedTree;

/// Evidence that `vertex` is an oblique neighbor of `edge`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ObliqueWitness {
    pub edge: Edge,
    pub vertex: usize,
    /// The endpoint of `edge` farthest from `vertex`; `{vertex, far}` is a
    /// graph edge.
    pub far: usize,
}

/// True iff `v` and the far endpoint of `e` (seen from `v`) are adjacent in `g`.
pub fn is_oblique_neighbor(g: &Graph, t: &RootedTree, v: usize, e: Edge) -> bool {
    let far = t.far_endpoint(e, v);
    g.has_edge(v, far)
}

/// Witness-producing form of [`is_oblique_neighbor`].
pub fn oblique_witness(g: &Graph, t: &RootedTree, v: usize, e: Edge) -> Option<ObliqueWitness> {
    let far = t.far_endpoint(e, v);
    g.has_edge(v, far).then_some(ObliqueWitness {
        edge: e,
        vertex: v,
        far,
    })
}

/// Number of tree edges that have `v` as an oblique neighbor. Always equals
/// the degree of `v` in the host graph.
pub fn oblique_degree(g: &Graph, t: &RootedTree, v: usize) -> usize {
    t.edges()
        .into_iter()
        .filter(|&e| is_oblique_neighbor(g, t, v, e))
        .count()
}

/// All oblique neighbors of `e` (ascending), including its endpoints.
pub fn oblique_neighbors_of_edge(g: &Graph, t: &RootedTree, e: Edge) -> Vec<usize> {
    (0..g.vertex_count())
        .filter(|&v| is_oblique_neighbor(g, t, v, e))
        .collect()
}

/// The first tree edge (canonical order) that has both `u` and `v` as oblique
/// neighbors, or `None`.
///
/// # Panics
/// Panics if `u == v`.
pub fn pseudoadjacency_witness(
    g: &Graph,
    t: &RootedTree,
    u: usize,
    v: usize,
) -> Option<Edge> {
    assert!(u != v, "pseudoadjacency is defined on distinct vertices");
    t.edges().into_iter().find(|&e| {
        is_oblique_neighbor(g, t, u, e) && is_oblique_neighbor(g, t, v, e)
    })
}

/// True iff no two vertices of `s` are pseudoadjacent with respect to `t`.
pub fn is_pseudoindependent(g: &Graph, t: &RootedTree, s: &[usize]) -> bool {
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            if pseudoadjacency_witness(g, t, s[i], s[j]).is_some() {
                return false;
            }
        }
    }
    true
}
