//! Rooted spanning trees: leaf/branch classification, tree paths and
//! direction helpers, the distance-degree sequence with its order, the
//! composite lexicographic potential, and validated edge-swap application.

use crate::graph::{Edge, Graph};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("graph is not connected; no spanning tree exists")]
    Disconnected,
    #[error("root {0} out of range")]
    RootOutOfRange(usize),
    #[error("tree requires at least two vertices")]
    TooSmall,
    #[error("edge set is not a spanning tree: {0}")]
    NotSpanning(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("remove/add size mismatch ({remove} removed, {add} added)")]
    SizeMismatch { remove: usize, add: usize },
    #[error("removed edge {0:?} is not a tree edge")]
    RemoveNotInTree(Edge),
    #[error("added edge {0:?} is already a tree edge")]
    AddAlreadyInTree(Edge),
    #[error("added edge {0:?} is not a graph edge")]
    AddNotInGraph(Edge),
    #[error("swap result is not a spanning tree (offending edges {0:?})")]
    ResultNotSpanning(Vec<Edge>),
}

/// A spanning tree of a host graph, rooted, with parent links and sorted
/// children lists. Immutable; move application produces a fresh value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    degree: Vec<usize>,
}

/// Leaf and branch structure of a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeClassification {
    /// Vertices of tree degree one, ascending.
    pub leaves: Vec<usize>,
    /// Vertices of tree degree at least three, ascending.
    pub branch: Vec<usize>,
}

impl TreeClassification {
    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn branch_count(&self) -> usize {
        self.branch.len()
    }

    /// Branch vertices of tree degree exactly `k`.
    pub fn branch_by_degree(&self, t: &RootedTree, k: usize) -> Vec<usize> {
        self.branch
            .iter()
            .copied()
            .filter(|&v| t.degree(v) == k)
            .collect()
    }
}

/// The sorted sequence of (distance-to-root, degree) pairs over branch
/// vertices. Ordered entrywise lexicographically; a strict prefix compares
/// smaller.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TrKey {
    pub pairs: Vec<(usize, usize)>,
}

/// Composite well-founded potential. Compared lexicographically in field
/// order; every accepted local-search move must strictly decrease it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PotentialKey {
    /// |B(T)|
    pub b_count: usize,
    /// 0 when a degree-3 branch vertex exists, 1 otherwise.
    pub b3_flag: u8,
    /// Sum of (deg - 4) over branch vertices of degree at least 5.
    pub excess5: usize,
    pub tr_key: TrKey,
    /// |L(T)|
    pub leaf_count: usize,
}

/// Identifies which guard produced a repair move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimTag {
    Claim2,
    Claim3,
    Claim4,
    Claim5,
    Claim6,
    Claim7,
    Claim8,
    Claim9,
    Claim10,
    AbDisjoint,
    CdeDisjoint,
}

impl ClaimTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClaimTag::Claim2 => "claim2",
            ClaimTag::Claim3 => "claim3",
            ClaimTag::Claim4 => "claim4",
            ClaimTag::Claim5 => "claim5",
            ClaimTag::Claim6 => "claim6",
            ClaimTag::Claim7 => "claim7",
            ClaimTag::Claim8 => "claim8",
            ClaimTag::Claim9 => "claim9",
            ClaimTag::Claim10 => "claim10",
            ClaimTag::AbDisjoint => "ab_disjoint",
            ClaimTag::CdeDisjoint => "cde_disjoint",
        }
    }
}

/// A reversible edge swap: remove `remove` from the tree, add `add`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub remove: Vec<Edge>,
    pub add: Vec<Edge>,
    pub claim_tag: ClaimTag,
}

impl Move {
    pub fn new(claim_tag: ClaimTag, remove: Vec<Edge>, add: Vec<Edge>) -> Self {
        Move {
            remove,
            add,
            claim_tag,
        }
    }

    /// The inverse swap restores the original tree edge set.
    pub fn reversed(&self) -> Move {
        Move {
            remove: self.add.clone(),
            add: self.remove.clone(),
            claim_tag: self.claim_tag,
        }
    }
}

impl RootedTree {
    /// Builds a rooted tree from a spanning edge set, validating that it is
    /// one.
    pub fn from_edge_set(g: &Graph, edges: &[Edge], root: usize) -> Result<Self, TreeError> {
        let n = g.vertex_count();
        if root >= n {
            return Err(TreeError::RootOutOfRange(root));
        }
        if edges.len() + 1 != n {
            return Err(TreeError::NotSpanning(format!(
                "{} edges for {} vertices",
                edges.len(),
                n
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for e in edges {
            if !g.has_edge(e.u(), e.v()) {
                return Err(TreeError::NotSpanning(format!(
                    "{e:?} is not an edge of the host graph"
                )));
            }
            adj[e.u()].push(e.v());
            adj[e.v()].push(e.u());
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let mut parent = vec![None; n];
        let mut depth = vec![0usize; n];
        let mut children = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        seen[root] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    parent[v] = Some(u);
                    depth[v] = depth[u] + 1;
                    children[u].push(v);
                    stack.push(v);
                }
            }
        }
        if count != n {
            return Err(TreeError::NotSpanning("edge set is disconnected".into()));
        }
        for list in &mut children {
            list.sort_unstable();
        }
        let degree = (0..n)
            .map(|v| children[v].len() + usize::from(parent[v].is_some()))
            .collect();
        Ok(RootedTree {
            root,
            parent,
            children,
            depth,
            degree,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degree[v]
    }

    /// Tree neighbors: parent (if any) followed by children, ascending overall.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.children[v].clone();
        if let Some(p) = self.parent[v] {
            out.push(p);
        }
        out.sort_unstable();
        out
    }

    /// Tree edges in canonical sorted order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = (0..self.vertex_count())
            .filter_map(|v| self.parent[v].map(|p| Edge::new(v, p)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.parent[e.u()] == Some(e.v()) || self.parent[e.v()] == Some(e.u())
    }

    /// True iff `a` lies on the path from the root to `b` (including `a == b`).
    pub fn is_ancestor_or_self(&self, a: usize, b: usize) -> bool {
        let mut cur = b;
        loop {
            if cur == a {
                return true;
            }
            match self.parent[cur] {
                Some(p) => cur = p,
                None => return false,
            }
        }
    }

    pub fn lca(&self, u: usize, v: usize) -> usize {
        let (mut a, mut b) = (u, v);
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].unwrap();
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].unwrap();
        }
        while a != b {
            a = self.parent[a].unwrap();
            b = self.parent[b].unwrap();
        }
        a
    }

    /// The meeting vertex of the three pairwise paths between `a`, `b`, `c`.
    pub fn median(&self, a: usize, b: usize, c: usize) -> usize {
        let x = self.lca(a, b);
        let y = self.lca(b, c);
        let z = self.lca(a, c);
        // Two of the three coincide; the remaining (deepest) one is the median.
        if x == y {
            z
        } else if x == z {
            y
        } else {
            x
        }
    }

    pub fn distance(&self, u: usize, v: usize) -> usize {
        let w = self.lca(u, v);
        self.depth[u] + self.depth[v] - 2 * self.depth[w]
    }

    /// The unique tree path from `u` to `v`, inclusive; `[u]` when `u == v`.
    pub fn path_between(&self, u: usize, v: usize) -> Vec<usize> {
        let w = self.lca(u, v);
        let mut up = Vec::new();
        let mut cur = u;
        while cur != w {
            up.push(cur);
            cur = self.parent[cur].unwrap();
        }
        up.push(w);
        let mut down = Vec::new();
        let mut cur = v;
        while cur != w {
            down.push(cur);
            cur = self.parent[cur].unwrap();
        }
        up.extend(down.into_iter().rev());
        up
    }

    /// The neighbor of `u` on the path toward `v`.
    ///
    /// # Panics
    /// Panics if `u == v`.
    pub fn toward(&self, u: usize, v: usize) -> usize {
        assert!(u != v, "toward({u},{u}) is undefined");
        if self.is_ancestor_or_self(u, v) {
            // first step down: the child of u that is an ancestor of v
            let mut cur = v;
            loop {
                let p = self.parent[cur].unwrap();
                if p == u {
                    return cur;
                }
                cur = p;
            }
        } else {
            self.parent[u].unwrap()
        }
    }

    /// The endpoint of tree edge `e` at greater tree distance from `v`; the
    /// other endpoint when `v` is itself an endpoint.
    pub fn far_endpoint(&self, e: Edge, v: usize) -> usize {
        debug_assert!(self.contains_edge(e), "{e:?} is not a tree edge");
        if v == e.u() {
            return e.v();
        }
        if v == e.v() {
            return e.u();
        }
        if self.distance(v, e.u()) > self.distance(v, e.v()) {
            e.u()
        } else {
            e.v()
        }
    }

    /// The child-side endpoint of a tree edge (the one farther from the root).
    pub fn lower_endpoint(&self, e: Edge) -> usize {
        if self.parent[e.u()] == Some(e.v()) {
            e.u()
        } else {
            e.v()
        }
    }

    /// The parent-side endpoint of a tree edge.
    pub fn upper_endpoint(&self, e: Edge) -> usize {
        e.other(self.lower_endpoint(e))
    }

    /// Leaf/branch classification.
    ///
    /// Errors on single-vertex trees, where the notions degenerate.
    pub fn classify(&self) -> Result<TreeClassification, TreeError> {
        let n = self.vertex_count();
        if n < 2 {
            return Err(TreeError::TooSmall);
        }
        let leaves = (0..n).filter(|&v| self.degree[v] == 1).collect();
        let branch = (0..n).filter(|&v| self.degree[v] >= 3).collect();
        Ok(TreeClassification { leaves, branch })
    }

    /// The sorted distance-degree sequence over branch vertices, relative to
    /// the current root.
    pub fn tr_key(&self) -> TrKey {
        let mut pairs: Vec<(usize, usize)> = (0..self.vertex_count())
            .filter(|&v| self.degree[v] >= 3)
            .map(|v| (self.depth[v], self.degree[v]))
            .collect();
        pairs.sort_unstable();
        TrKey { pairs }
    }

    /// The composite potential of this tree (with its current root).
    ///
    /// # Panics
    /// Panics on single-vertex trees.
    pub fn potential(&self) -> PotentialKey {
        let class = self.classify().expect("potential requires >= 2 vertices");
        let has_b3 = class.branch.iter().any(|&v| self.degree[v] == 3);
        let excess5: usize = class
            .branch
            .iter()
            .filter(|&&v| self.degree[v] >= 5)
            .map(|&v| self.degree[v] - 4)
            .sum();
        PotentialKey {
            b_count: class.branch_count(),
            b3_flag: if has_b3 { 0 } else { 1 },
            excess5,
            tr_key: self.tr_key(),
            leaf_count: class.leaf_count(),
        }
    }

    /// Same edge set, new root.
    pub fn rerooted(&self, g: &Graph, new_root: usize) -> RootedTree {
        RootedTree::from_edge_set(g, &self.edges(), new_root)
            .expect("rerooting a valid tree cannot fail")
    }

    /// JSON form: root, parent array, canonical edge list.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "root": self.root,
            "parent": self.parent,
            "edges": self.edges(),
        })
    }
}

/// The solver's root policy for a fresh tree: the smallest-id degree-3
/// branch vertex if one exists, else the smallest-id branch vertex, else
/// vertex 0.
pub fn policy_root(t: &RootedTree) -> usize {
    let n = t.vertex_count();
    if let Some(v) = (0..n).find(|&v| t.degree(v) == 3) {
        return v;
    }
    if let Some(v) = (0..n).find(|&v| t.degree(v) >= 3) {
        return v;
    }
    0
}

/// The root policy after a move: keep the previous root while it still
/// qualifies for its class, falling back to [`policy_root`] otherwise.
///
/// Keeping the root stable matters for termination: the distance-degree
/// component of the potential is measured from the root, and the repair
/// swaps only shrink it when distances are measured from the same vertex.
/// Any swap that changes the root's own degree already shrinks an earlier,
/// root-independent component.
pub fn sticky_root(prev: usize, t: &RootedTree) -> usize {
    let n = t.vertex_count();
    if (0..n).any(|v| t.degree(v) == 3) {
        if t.degree(prev) == 3 {
            prev
        } else {
            policy_root(t)
        }
    } else if (0..n).any(|v| t.degree(v) >= 3) {
        if t.degree(prev) >= 3 {
            prev
        } else {
            policy_root(t)
        }
    } else {
        0
    }
}

/// Depth-first spanning tree from `root`, exploring neighbors in ascending id
/// order.
pub fn dfs_spanning_tree(g: &Graph, root: usize) -> Result<RootedTree, TreeError> {
    let n = g.vertex_count();
    if root >= n {
        return Err(TreeError::RootOutOfRange(root));
    }
    let mut parent = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut children = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut count = 1;

    fn dfs(
        g: &Graph,
        u: usize,
        seen: &mut [bool],
        parent: &mut [Option<usize>],
        depth: &mut [usize],
        children: &mut [Vec<usize>],
        count: &mut usize,
    ) {
        for &v in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                *count += 1;
                parent[v] = Some(u);
                depth[v] = depth[u] + 1;
                children[u].push(v);
                dfs(g, v, seen, parent, depth, children, count);
            }
        }
    }

    dfs(
        g,
        root,
        &mut seen,
        &mut parent,
        &mut depth,
        &mut children,
        &mut count,
    );
    if count != n {
        return Err(TreeError::Disconnected);
    }
    let degree = (0..n)
        .map(|v| children[v].len() + usize::from(parent[v].is_some()))
        .collect();
    Ok(RootedTree {
        root,
        parent,
        children,
        depth,
        degree,
    })
}

/// Applies an edge swap, validating it yields a spanning tree of `g`. The new
/// tree is rooted per [`sticky_root`] relative to the input tree's root. The
/// original tree is unchanged.
pub fn apply_move(g: &Graph, t: &RootedTree, mv: &Move) -> Result<RootedTree, MoveError> {
    if mv.remove.len() != mv.add.len() {
        return Err(MoveError::SizeMismatch {
            remove: mv.remove.len(),
            add: mv.add.len(),
        });
    }
    let mut edges: Vec<Edge> = t.edges();
    for e in &mv.remove {
        match edges.iter().position(|x| x == e) {
            Some(i) => {
                edges.swap_remove(i);
            }
            None => return Err(MoveError::RemoveNotInTree(*e)),
        }
    }
    for e in &mv.add {
        if !g.has_edge(e.u(), e.v()) {
            return Err(MoveError::AddNotInGraph(*e));
        }
        if t.contains_edge(*e) && !mv.remove.contains(e) {
            return Err(MoveError::AddAlreadyInTree(*e));
        }
        if edges.contains(e) {
            return Err(MoveError::AddAlreadyInTree(*e));
        }
        edges.push(*e);
    }
    edges.sort_unstable();
    let provisional = RootedTree::from_edge_set(g, &edges, t.root())
        .map_err(|_| MoveError::ResultNotSpanning(mv.add.clone()))?;
    let root = sticky_root(t.root(), &provisional);
    Ok(if root == provisional.root() {
        provisional
    } else {
        provisional.rerooted(g, root)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn cycle(n: usize) -> Graph {
        let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges).unwrap()
    }

    fn path_graph(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn star_graph() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    fn star_tree(g: &Graph) -> RootedTree {
        dfs_spanning_tree(g, 0).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    // ------------------------------------------------------------------
    // construction
    // ------------------------------------------------------------------

    #[test]
    fn dfs_on_cycle_gives_hamiltonian_path() {
        let g = cycle(5);
        let t = dfs_spanning_tree(&g, 0).unwrap();
        assert_eq!(
            t.edges(),
            vec![Edge(0, 1), Edge(1, 2), Edge(2, 3), Edge(3, 4)]
        );
    }

    #[test]
    fn dfs_on_a_tree_returns_that_tree() {
        let g = path_graph(4);
        let t = dfs_spanning_tree(&g, 2).unwrap();
        assert_eq!(t.edges(), g.edges().to_vec());
        assert_eq!(t.root(), 2);
    }

    #[test]
    fn dfs_on_disconnected_graph_errors() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(dfs_spanning_tree(&g, 0).unwrap_err(), TreeError::Disconnected);
    }

    #[test]
    fn degree_matches_children_plus_parent() {
        let g = cycle(6);
        let t = dfs_spanning_tree(&g, 3).unwrap();
        for v in 0..6 {
            let expect = t.children(v).len() + usize::from(v != t.root());
            assert_eq!(t.degree(v), expect);
        }
    }

    // ------------------------------------------------------------------
    // paths and directions
    // ------------------------------------------------------------------

    #[test]
    fn path_between_on_path_tree() {
        let g = path_graph(4);
        let t = dfs_spanning_tree(&g, 0).unwrap();
        assert_eq!(t.path_between(0, 3), vec![0, 1, 2, 3]);
        assert_eq!(t.path_between(2, 2), vec![2]);
        let s = dfs_spanning_tree(&star_graph(), 0).unwrap();
        assert_eq!(s.path_between(1, 2), vec![1, 0, 2]);
    }

    #[test]
    fn toward_examples() {
        let t = dfs_spanning_tree(&path_graph(4), 0).unwrap();
        assert_eq!(t.toward(0, 3), 1);
        assert_eq!(t.toward(3, 0), 2);
        let s = star_tree(&star_graph());
        assert_eq!(s.toward(1, 2), 0);
    }

    #[test]
    fn far_endpoint_examples() {
        let t = dfs_spanning_tree(&path_graph(4), 0).unwrap();
        assert_eq!(t.far_endpoint(Edge(1, 2), 0), 2);
        assert_eq!(t.far_endpoint(Edge(1, 2), 2), 1);
        let s = star_tree(&star_graph());
        assert_eq!(s.far_endpoint(Edge(0, 1), 2), 1);
    }

    #[test]
    fn far_endpoint_agrees_with_toward_on_path_edges() {
        let g = cycle(6);
        let t = dfs_spanning_tree(&g, 0).unwrap();
        // for an edge on P[u,v], the endpoint far from u is the one closer to v
        let (u, v) = (0, 5);
        for pair in t.path_between(u, v).windows(2) {
            let e = Edge::new(pair[0], pair[1]);
            let far_u = t.far_endpoint(e, u);
            assert!(t.distance(far_u, v) < t.distance(e.other(far_u), v));
        }
    }

    // ------------------------------------------------------------------
    // classification and keys
    // ------------------------------------------------------------------

    #[test]
    fn classify_path_and_star_and_spider() {
        let t = dfs_spanning_tree(&path_graph(4), 0).unwrap();
        let c = t.classify().unwrap();
        assert_eq!(c.leaves, vec![0, 3]);
        assert!(c.branch.is_empty());

        let s = star_tree(&star_graph());
        let c = s.classify().unwrap();
        assert_eq!(c.leaves, vec![1, 2, 3]);
        assert_eq!(c.branch, vec![0]);
        assert_eq!(c.branch_by_degree(&s, 3), vec![0]);

        // spider: center 0 with three legs of length 2
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
        let t = dfs_spanning_tree(&g, 0).unwrap();
        let c = t.classify().unwrap();
        assert_eq!(c.branch_by_degree(&t, 3), vec![0]);
        assert_eq!(c.leaf_count(), 3);
    }

    #[test]
    fn classify_single_vertex_errors() {
        let g = Graph::from_edges(1, &[]).unwrap();
        let t = RootedTree::from_edge_set(&g, &[], 0).unwrap();
        assert_eq!(t.classify().unwrap_err(), TreeError::TooSmall);
    }

    #[test]
    fn leaf_identity_holds() {
        // |L| = 2 + sum over branch vertices of (deg - 2)
        for (g, root) in [(cycle(6), 0), (star_graph(), 0), (complete(5), 2)] {
            let t = dfs_spanning_tree(&g, root).unwrap();
            let c = t.classify().unwrap();
            let excess: usize = c.branch.iter().map(|&b| t.degree(b) - 2).sum();
            assert_eq!(c.leaf_count(), 2 + excess);
            assert!(c.leaf_count() >= c.branch_count() + 2);
        }
    }

    #[test]
    fn tr_key_examples() {
        let s = star_tree(&star_graph());
        assert_eq!(s.tr_key().pairs, vec![(0, 3)]);

        // root of degree 3 with a degree-4 branch child at distance 1
        let g = Graph::from_edges(7, &[(0, 1), (0, 2), (0, 3), (3, 4), (3, 5), (3, 6)]).unwrap();
        let t = dfs_spanning_tree(&g, 0).unwrap();
        assert_eq!(t.tr_key().pairs, vec![(0, 3), (1, 4)]);

        let a = TrKey {
            pairs: vec![(0, 3), (1, 4)],
        };
        let b = TrKey {
            pairs: vec![(0, 3), (2, 3)],
        };
        assert!(a < b);
        // strict prefix compares smaller
        let p = TrKey {
            pairs: vec![(0, 3)],
        };
        assert!(p < a);
    }

    #[test]
    fn potential_examples() {
        // Hamiltonian path: no branch vertices
        let t = dfs_spanning_tree(&cycle(6), 0).unwrap();
        let p = t.potential();
        assert_eq!(
            (p.b_count, p.b3_flag, p.excess5, p.leaf_count),
            (0, 1, 0, 2)
        );
        assert!(p.tr_key.pairs.is_empty());

        // net-shaped tree with one degree-3 branch vertex at the root
        let g = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 5)]).unwrap();
        let t = dfs_spanning_tree(&g, 0).unwrap();
        let p = t.potential();
        assert_eq!(
            (p.b_count, p.b3_flag, p.excess5, p.leaf_count),
            (1, 0, 0, 3)
        );
        assert_eq!(p.tr_key.pairs, vec![(0, 3)]);

        // star inside K_5: one degree-4 branch vertex
        let g = complete(5);
        let t = RootedTree::from_edge_set(
            &g,
            &[Edge(0, 1), Edge(0, 2), Edge(0, 3), Edge(0, 4)],
            0,
        )
        .unwrap();
        let p = t.potential();
        assert_eq!(
            (p.b_count, p.b3_flag, p.excess5, p.leaf_count),
            (1, 1, 0, 4)
        );
        assert_eq!(p.tr_key.pairs, vec![(0, 4)]);
    }

    // ------------------------------------------------------------------
    // moves
    // ------------------------------------------------------------------

    #[test]
    fn apply_move_rotates_cycle_path() {
        let g = cycle(5);
        let t = dfs_spanning_tree(&g, 0).unwrap();
        let mv = Move::new(ClaimTag::Claim3, vec![Edge(0, 1)], vec![Edge(0, 4)]);
        let t2 = apply_move(&g, &t, &mv).unwrap();
        assert_eq!(
            t2.edges(),
            vec![Edge(0, 4), Edge(1, 2), Edge(2, 3), Edge(3, 4)]
        );
        // still a Hamiltonian path
        let c = t2.classify().unwrap();
        assert_eq!(c.branch_count(), 0);
    }

    #[test]
    fn apply_move_rejects_adding_existing_tree_edge() {
        let g = cycle(5);
        let t = dfs_spanning_tree(&g, 0).unwrap();
        let mv = Move::new(ClaimTag::Claim3, vec![Edge(0, 1)], vec![Edge(2, 3)]);
        assert_eq!(
            apply_move(&g, &t, &mv).unwrap_err(),
            MoveError::AddAlreadyInTree(Edge(2, 3))
        );
    }

    #[test]
    fn apply_move_rejects_disconnecting_swap() {
        // C_6 plus chord (0,2); swapping a far path edge for the chord leaves
        // {4,5} stranded.
        let g = Graph::from_edges(
            6,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 2)],
        )
        .unwrap();
        let t = RootedTree::from_edge_set(
            &g,
            &[Edge(0, 1), Edge(1, 2), Edge(2, 3), Edge(3, 4), Edge(4, 5)],
            0,
        )
        .unwrap();
        let mv = Move::new(ClaimTag::Claim3, vec![Edge(3, 4)], vec![Edge(0, 2)]);
        assert!(matches!(
            apply_move(&g, &t, &mv).unwrap_err(),
            MoveError::ResultNotSpanning(_)
        ));
    }

    #[test]
    fn k4_star_claim7_repair_gives_path() {
        let g = complete(4);
        let t =
            RootedTree::from_edge_set(&g, &[Edge(0, 1), Edge(0, 2), Edge(0, 3)], 0).unwrap();
        let mv = Move::new(ClaimTag::Claim7, vec![Edge(0, 1)], vec![Edge(1, 2)]);
        let t2 = apply_move(&g, &t, &mv).unwrap();
        assert_eq!(t2.edges(), vec![Edge(0, 2), Edge(0, 3), Edge(1, 2)]);
        // path 3-0-2-1
        let c = t2.classify().unwrap();
        assert_eq!(c.branch_count(), 0);
        assert_eq!(c.leaves, vec![1, 3]);
    }

    #[test]
    fn apply_move_then_reverse_restores_edge_set() {
        let g = cycle(5);
        let t = dfs_spanning_tree(&g, 0).unwrap();
        let mv = Move::new(ClaimTag::Claim3, vec![Edge(2, 3)], vec![Edge(0, 4)]);
        let t2 = apply_move(&g, &t, &mv).unwrap();
        let t3 = apply_move(&g, &t2, &mv.reversed()).unwrap();
        assert_eq!(t3.edges(), t.edges());
    }

    #[test]
    fn move_preserves_vertex_and_edge_count() {
        let g = complete(5);
        let t = dfs_spanning_tree(&g, 0).unwrap();
        let mv = Move::new(ClaimTag::Claim2, vec![Edge(3, 4)], vec![Edge(0, 4)]);
        let t2 = apply_move(&g, &t, &mv).unwrap();
        assert_eq!(t2.vertex_count(), t.vertex_count());
        assert_eq!(t2.edges().len(), t.edges().len());
    }

    // ------------------------------------------------------------------
    // root policy
    // ------------------------------------------------------------------

    #[test]
    fn policy_prefers_degree_three_branch_vertices() {
        // vertex 3 has degree 4, vertex 1 has degree 3
        let g = Graph::from_edges(
            8,
            &[(1, 0), (1, 2), (1, 3), (3, 4), (3, 5), (3, 6), (6, 7)],
        )
        .unwrap();
        let t = dfs_spanning_tree(&g, 0).unwrap();
        assert_eq!(policy_root(&t), 1);
        // no degree-3 vertex: smallest branch vertex
        let g = Graph::from_edges(6, &[(2, 0), (2, 1), (2, 3), (2, 4), (4, 5)]).unwrap();
        let t = dfs_spanning_tree(&g, 0).unwrap();
        assert_eq!(policy_root(&t), 2);
        // path: no branch vertices at all
        let t = dfs_spanning_tree(&path_graph(4), 2).unwrap();
        assert_eq!(policy_root(&t), 0);
    }
}
