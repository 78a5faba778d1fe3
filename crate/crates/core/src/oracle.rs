//! Brute-force ground truth at desk scale: exhaustive spanning-tree
//! enumeration by contract-or-delete, exact minimum leaf-plus-branch and
//! minimum branch counts, an unpruned degree-sum reference, and the theorem
//! auditor that replays the solver against the oracle.

use crate::graph::{check_hypothesis, claw_witness, Edge, Graph, SigmaValue};
use crate::instances::CorpusEntry;
use crate::solver::{self, SolveOutcome, SolverConfig};
use crate::tree::{policy_root, RootedTree};
use serde_json::json;
use thiserror::Error;

/// Hard cap on enumeration work (recursion nodes).
pub const WORK_GUARD: u64 = 1 << 22;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("enumeration work guard exceeded ({0} units)")]
    SizeGuard(u64),
}

#[derive(Clone)]
struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            false
        } else {
            self.parent[ra] = rb;
            true
        }
    }
}

/// Visits every spanning tree of `g` exactly once (as a canonical edge
/// slice) and returns the count.
///
/// Recursive inclusion/exclusion over the canonical edge order: an edge
/// already spanned by the chosen forest is skipped; otherwise both branches
/// are explored, except that the exclusion branch is pruned when the edge
/// bridges the remaining graph.
pub fn enumerate_spanning_trees<F: FnMut(&[Edge])>(
    g: &Graph,
    mut visit: F,
) -> Result<u64, OracleError> {
    if !g.is_connected() {
        return Err(OracleError::Disconnected);
    }
    let n = g.vertex_count();
    let edges = g.edges();
    let mut chosen: Vec<Edge> = Vec::with_capacity(n.saturating_sub(1));
    let mut work = 0u64;
    let mut count = 0u64;

    fn still_spannable(n: usize, dsu: &Dsu, edges: &[Edge], from: usize) -> bool {
        let mut d = dsu.clone();
        let mut comps = {
            let mut roots = std::collections::HashSet::new();
            for v in 0..n {
                roots.insert(d.find(v));
            }
            roots.len()
        };
        for e in &edges[from..] {
            if d.union(e.u(), e.v()) {
                comps -= 1;
                if comps == 1 {
                    return true;
                }
            }
        }
        comps == 1
    }

    #[allow(clippy::too_many_arguments)]
    fn rec<F: FnMut(&[Edge])>(
        n: usize,
        edges: &[Edge],
        idx: usize,
        chosen: &mut Vec<Edge>,
        dsu: &Dsu,
        visit: &mut F,
        count: &mut u64,
        work: &mut u64,
    ) -> Result<(), OracleError> {
        *work += 1;
        if *work > WORK_GUARD {
            return Err(OracleError::SizeGuard(*work));
        }
        if chosen.len() == n - 1 {
            visit(chosen);
            *count += 1;
            return Ok(());
        }
        if idx == edges.len() || edges.len() - idx < (n - 1) - chosen.len() {
            return Ok(());
        }
        let e = edges[idx];
        let mut probe = dsu.clone();
        if !probe.union(e.u(), e.v()) {
            // cycle edge: can never be part of a tree extending this forest
            return rec(n, edges, idx + 1, chosen, dsu, visit, count, work);
        }
        // include e
        chosen.push(e);
        rec(n, edges, idx + 1, chosen, &probe, visit, count, work)?;
        chosen.pop();
        // exclude e, unless it bridges what remains
        if still_spannable(n, dsu, edges, idx + 1) {
            rec(n, edges, idx + 1, chosen, dsu, visit, count, work)?;
        }
        Ok(())
    }

    if n <= 1 {
        visit(&[]);
        return Ok(1);
    }
    let dsu = Dsu::new(n);
    rec(
        n,
        &edges,
        0,
        &mut chosen,
        &dsu,
        &mut visit,
        &mut count,
        &mut work,
    )?;
    Ok(count)
}

/// Exact spanning-tree count via the Laplacian minor determinant, computed
/// with fraction-free integer elimination.
pub fn matrix_tree_count(g: &Graph) -> u128 {
    let n = g.vertex_count();
    if n <= 1 {
        return 1;
    }
    let m = n - 1;
    let mut a = vec![vec![0i128; m]; m];
    for i in 0..m {
        a[i][i] = g.degree(i + 1) as i128;
        for j in 0..m {
            if i != j && g.has_edge(i + 1, j + 1) {
                a[i][j] = -1;
            }
        }
    }
    // Bareiss elimination: all divisions are exact.
    let mut prev = 1i128;
    for k in 0..m {
        if a[k][k] == 0 {
            if let Some(p) = (k + 1..m).find(|&r| a[r][k] != 0) {
                a.swap(k, p);
                for item in a[k].iter_mut() {
                    *item = -*item;
                }
            } else {
                return 0;
            }
        }
        for i in k + 1..m {
            for j in k + 1..m {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    a[m - 1][m - 1].unsigned_abs()
}

/// Whether `g` is small enough for exhaustive enumeration under the work
/// guard: at most 22 edges and at most 400k spanning trees.
pub fn fits_size_guard(g: &Graph) -> bool {
    g.edge_count() <= 22 && matrix_tree_count(g) <= 400_000
}

fn tree_stats(n: usize, edges: &[Edge]) -> (usize, usize) {
    let mut deg = vec![0usize; n];
    for e in edges {
        deg[e.u()] += 1;
        deg[e.v()] += 1;
    }
    let leaves = deg.iter().filter(|&&d| d == 1).count();
    let branch = deg.iter().filter(|&&d| d >= 3).count();
    (leaves, branch)
}

/// Exhaustive statistics for a graph, gathered in one enumeration pass.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub tree_count: u64,
    pub min_leaf_plus_branch: usize,
    pub min_lb_witness: RootedTree,
    pub min_branch: usize,
    pub min_branch_witness: RootedTree,
}

impl OracleReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "schema": 1,
            "tree_count": self.tree_count,
            "min_leaf_plus_branch": {
                "value": self.min_leaf_plus_branch,
                "tree": self.min_lb_witness.to_json(),
            },
            "min_branch": {
                "value": self.min_branch,
                "tree": self.min_branch_witness.to_json(),
            },
        })
    }
}

/// Enumerates all spanning trees and reports the count plus the exact minima
/// of leaves-plus-branch-vertices and of branch vertices, with witnesses.
pub fn oracle_report(g: &Graph) -> Result<OracleReport, OracleError> {
    let n = g.vertex_count();
    let mut best_lb: Option<(usize, Vec<Edge>)> = None;
    let mut best_b: Option<(usize, Vec<Edge>)> = None;
    let count = enumerate_spanning_trees(g, |edges| {
        let (l, b) = tree_stats(n, edges);
        if best_lb.as_ref().map_or(true, |(v, _)| l + b < *v) {
            best_lb = Some((l + b, edges.to_vec()));
        }
        if best_b.as_ref().map_or(true, |(v, _)| b < *v) {
            best_b = Some((b, edges.to_vec()));
        }
    })?;
    let (min_lb, lb_edges) = best_lb.expect("connected graph has a spanning tree");
    let (min_b, b_edges) = best_b.expect("connected graph has a spanning tree");
    let build = |edges: &[Edge]| -> RootedTree {
        let t = RootedTree::from_edge_set(g, edges, 0).expect("enumerated tree is spanning");
        let r = policy_root(&t);
        if r == t.root() {
            t
        } else {
            t.rerooted(g, r)
        }
    };
    Ok(OracleReport {
        tree_count: count,
        min_leaf_plus_branch: min_lb,
        min_lb_witness: build(&lb_edges),
        min_branch: min_b,
        min_branch_witness: build(&b_edges),
    })
}

/// Exact minimum of `|L(T)| + |B(T)|` over all spanning trees, with witness.
pub fn min_leaf_plus_branch(g: &Graph) -> Result<(usize, RootedTree), OracleError> {
    let r = oracle_report(g)?;
    Ok((r.min_leaf_plus_branch, r.min_lb_witness))
}

/// Exact minimum of `|B(T)|` over all spanning trees, with witness.
pub fn min_branch_count(g: &Graph) -> Result<(usize, RootedTree), OracleError> {
    let r = oracle_report(g)?;
    Ok((r.min_branch, r.min_branch_witness))
}

/// Reference degree-sum minimum by unpruned enumeration of all `k`-subsets.
pub fn sigma_bruteforce(g: &Graph, k: usize) -> SigmaValue {
    assert!(k >= 1);
    let n = g.vertex_count();
    let mut best: Option<u64> = None;
    let mut subset: Vec<usize> = Vec::with_capacity(k);

    fn rec(
        g: &Graph,
        k: usize,
        start: usize,
        subset: &mut Vec<usize>,
        best: &mut Option<u64>,
    ) {
        if subset.len() == k {
            let independent = subset
                .iter()
                .enumerate()
                .all(|(i, &u)| subset[i + 1..].iter().all(|&v| !g.has_edge(u, v)));
            if independent {
                let sum: u64 = subset.iter().map(|&v| g.degree(v) as u64).sum();
                if best.map_or(true, |b| sum < b) {
                    *best = Some(sum);
                }
            }
            return;
        }
        for v in start..g.vertex_count() {
            subset.push(v);
            rec(g, k, v + 1, subset, best);
            subset.pop();
        }
    }

    if k <= n {
        rec(g, k, 0, &mut subset, &mut best);
    }
    match best {
        Some(s) => SigmaValue::Finite(s),
        None => SigmaValue::Infinite,
    }
}

/// One audited `(graph, m, n)` combination.
#[derive(Clone, Debug)]
pub struct AuditRecord {
    pub graph_id: String,
    pub m: usize,
    pub n: usize,
    pub hypothesis: bool,
    pub oracle_min: Option<usize>,
    pub solver_status: String,
    pub solver_value: Option<usize>,
    pub counterexample: bool,
}

impl AuditRecord {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "graph_id": self.graph_id,
            "m": self.m,
            "n": self.n,
            "hypothesis": self.hypothesis,
            "oracle_min": self.oracle_min,
            "solver_status": self.solver_status,
            "solver_value": self.solver_value,
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct AuditReport {
    pub records: Vec<AuditRecord>,
    /// Corpus members skipped, with the reason.
    pub skipped: Vec<(String, String)>,
    pub counterexamples: usize,
}

/// Audits one corpus graph across all `(m, n)` combinations up to `n_max`.
///
/// For hypothesis-satisfied combinations this checks both the theorem itself
/// (oracle minimum at most `n`) and the solver (tree status within the
/// bound); any failure is reported as a counterexample record.
pub fn audit_graph(entry: &CorpusEntry, n_max: usize) -> Result<Vec<AuditRecord>, String> {
    let g = &entry.graph;
    if !g.is_connected() {
        return Err("not connected".into());
    }
    if claw_witness(g).is_some() {
        return Err("not claw-free".into());
    }
    let report = oracle_report(g).map_err(|e| e.to_string())?;
    let mut records = Vec::new();
    for n in 2..=n_max {
        for m in 1..=crate::graph::ceil_two_thirds(n) {
            let hyp = check_hypothesis(g, m, n);
            let mut solver_status = "skipped".to_string();
            let mut solver_value = None;
            let mut counterexample = false;
            if hyp.satisfied {
                if report.min_leaf_plus_branch > n {
                    counterexample = true;
                }
                match solver::solve(g, m, n, &SolverConfig::default()) {
                    Ok(result) => match &result.outcome {
                        SolveOutcome::Tree { tree, .. } => {
                            solver_status = "tree".into();
                            let c = tree.classify().expect("solver trees have >= 2 vertices");
                            let value = c.leaf_count() + c.branch_count();
                            solver_value = Some(value);
                            if value > n {
                                counterexample = true;
                            }
                        }
                        SolveOutcome::Certificate(_) => {
                            solver_status = "certificate".into();
                            counterexample = true;
                        }
                        SolveOutcome::Anomaly(_) => {
                            solver_status = "anomaly".into();
                            counterexample = true;
                        }
                    },
                    Err(e) => {
                        solver_status = format!("error: {e}");
                        counterexample = true;
                    }
                }
            }
            records.push(AuditRecord {
                graph_id: entry.id.clone(),
                m,
                n,
                hypothesis: hyp.satisfied,
                oracle_min: Some(report.min_leaf_plus_branch),
                solver_status,
                solver_value,
                counterexample,
            });
        }
    }
    Ok(records)
}

/// Runs [`audit_graph`] over a corpus, collecting records and skips.
pub fn theorem_audit(corpus: &[CorpusEntry], n_max: usize) -> AuditReport {
    let mut report = AuditReport::default();
    for entry in corpus {
        match audit_graph(entry, n_max) {
            Ok(records) => {
                report.counterexamples += records.iter().filter(|r| r.counterexample).count();
                report.records.extend(records);
            }
            Err(reason) => report.skipped.push((entry.id.clone(), reason)),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::named;

    fn cycle(n: usize) -> Graph {
        let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges).unwrap()
    }

    fn path_graph(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
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

    #[test]
    fn cycle_has_n_spanning_trees() {
        assert_eq!(enumerate_spanning_trees(&cycle(4), |_| {}).unwrap(), 4);
        assert_eq!(enumerate_spanning_trees(&cycle(5), |_| {}).unwrap(), 5);
    }

    #[test]
    fn k4_has_sixteen_spanning_trees() {
        assert_eq!(enumerate_spanning_trees(&complete(4), |_| {}).unwrap(), 16);
    }

    #[test]
    fn enumeration_matches_matrix_tree_determinant() {
        for name in ["c5", "c6", "k4", "k5", "net", "4net"] {
            let g = named(name).unwrap();
            let by_enum = enumerate_spanning_trees(&g, |_| {}).unwrap();
            assert_eq!(by_enum as u128, matrix_tree_count(&g), "graph {name}");
        }
    }

    #[test]
    fn enumeration_rejects_disconnected_input() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            enumerate_spanning_trees(&g, |_| {}).unwrap_err(),
            OracleError::Disconnected
        );
    }

    #[test]
    fn trees_are_visited_once_each() {
        let g = complete(4);
        let mut seen = std::collections::HashSet::new();
        enumerate_spanning_trees(&g, |edges| {
            assert!(seen.insert(edges.to_vec()), "duplicate {edges:?}");
        })
        .unwrap();
        assert_eq!(seen.len(), 16);
    }

    #[test]
    fn min_leaf_plus_branch_examples() {
        assert_eq!(min_leaf_plus_branch(&cycle(6)).unwrap().0, 2);
        assert_eq!(min_leaf_plus_branch(&named("net").unwrap()).unwrap().0, 4);
        assert_eq!(min_leaf_plus_branch(&named("4net").unwrap()).unwrap().0, 5);
    }

    #[test]
    fn min_branch_examples() {
        assert_eq!(min_branch_count(&path_graph(5)).unwrap().0, 0);
        assert_eq!(min_branch_count(&named("net").unwrap()).unwrap().0, 1);
        assert_eq!(min_branch_count(&named("4net").unwrap()).unwrap().0, 1);
    }

    #[test]
    fn witnesses_attain_reported_minima() {
        let g = named("net").unwrap();
        let rep = oracle_report(&g).unwrap();
        let c = rep.min_lb_witness.classify().unwrap();
        assert_eq!(c.leaf_count() + c.branch_count(), rep.min_leaf_plus_branch);
        let c = rep.min_branch_witness.classify().unwrap();
        assert_eq!(c.branch_count(), rep.min_branch);
    }

    #[test]
    fn sigma_bruteforce_examples() {
        assert_eq!(sigma_bruteforce(&cycle(5), 2), SigmaValue::Finite(4));
        assert_eq!(sigma_bruteforce(&complete(4), 2), SigmaValue::Infinite);
        assert_eq!(
            sigma_bruteforce(&named("net").unwrap(), 3),
            SigmaValue::Finite(3)
        );
    }

    #[test]
    fn sigma_bruteforce_agrees_with_pruned_sigma() {
        for name in ["c5", "c6", "k4", "k5", "net", "4net"] {
            let g = named(name).unwrap();
            for k in 1..=4 {
                assert_eq!(
                    sigma_bruteforce(&g, k),
                    crate::graph::sigma_k(&g, k),
                    "graph {name}, k={k}"
                );
            }
        }
    }
}
