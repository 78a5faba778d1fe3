//! Potential-decreasing local search over spanning trees.
//!
//! The solver repeatedly scans the current tree for a violated structural
//! guard (see [`scan`]) and applies that guard's repair swap. Every accepted
//! swap must strictly decrease the composite [`PotentialKey`], which makes
//! termination unconditional. When no guard is violated and the tree still
//! has more than `n` leaves plus branch vertices, the irreducible tree is
//! converted into an independently verifiable refutation certificate.
//!
//! [`PotentialKey`]: crate::tree::PotentialKey

mod certificate;
mod scan;

pub use certificate::{
    build_certificate, verify_certificate, CertMode, Certificate, CertificateDefect,
};
pub use scan::{find_violation, Violation, ViolationContext};

use crate::graph::{check_hypothesis, claw_witness, ClawWitness, Graph, HypothesisReport};
use crate::tree::{apply_move, dfs_spanning_tree, policy_root, ClaimTag, RootedTree};
use serde_json::json;
use std::collections::BTreeMap;
use thiserror::Error;

/// A defect the solver can neither repair nor certify. Anomalies indicate a
/// divergence between the repair catalog and the trees actually reached;
/// they are surfaced loudly instead of being looped over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Anomaly {
    pub kind: AnomalyKind,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnomalyKind {
    /// A guard fired but its context contradicts an invariant the repair
    /// relies on.
    GuardInconsistency,
    /// A prescribed repair did not strictly decrease the potential.
    NonDecreasingMove,
    /// A prescribed repair was rejected as a tree swap.
    MoveRejected,
    /// Certificate construction or self-verification failed.
    CertificateDefect,
    /// The defensive iteration cap was exceeded.
    IterationCap,
}

impl AnomalyKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            AnomalyKind::GuardInconsistency => "guard_inconsistency",
            AnomalyKind::NonDecreasingMove => "non_decreasing_move",
            AnomalyKind::MoveRejected => "move_rejected",
            AnomalyKind::CertificateDefect => "certificate_defect",
            AnomalyKind::IterationCap => "iteration_cap",
        }
    }
}

impl std::fmt::Display for Anomaly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind.as_str(), self.detail)
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not claw-free (center {}, leaves {:?})", .0.center, .0.leaves)]
    NotClawFree(ClawWitness),
    #[error("hypothesis not satisfied (sigma_{} = {} < {} or m-constraint violated)",
            .0.m + 1, .0.sigma_value, .0.threshold)]
    HypothesisUnsatisfied(Box<HypothesisReport>),
}

/// Solver knobs; the defaults reproduce the documented deterministic runs.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Skip the hypothesis check and search anyway.
    pub force: bool,
    /// Override the defensive iteration cap (default `n^3`).
    pub max_iterations: Option<u64>,
    /// Start vertex for the initial depth-first tree.
    pub start_vertex: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            force: false,
            max_iterations: None,
            start_vertex: 0,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolveStats {
    pub iterations: u64,
    pub moves_by_claim: BTreeMap<ClaimTag, u64>,
}

#[derive(Clone, Debug)]
pub enum SolveOutcome {
    Tree {
        tree: RootedTree,
        leaf_count: usize,
        branch_count: usize,
    },
    Certificate(Certificate),
    Anomaly(Anomaly),
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub outcome: SolveOutcome,
    pub stats: SolveStats,
}

impl SolveResult {
    pub fn status_str(&self) -> &'static str {
        match &self.outcome {
            SolveOutcome::Tree { .. } => "tree",
            SolveOutcome::Certificate(_) => "certificate",
            SolveOutcome::Anomaly(_) => "anomaly",
        }
    }

    /// The schema-1 JSON document for this result.
    pub fn to_json(&self) -> serde_json::Value {
        let moves: serde_json::Map<String, serde_json::Value> = self
            .stats
            .moves_by_claim
            .iter()
            .map(|(tag, count)| (tag.as_str().to_string(), json!(count)))
            .collect();
        let mut doc = json!({
            "schema": 1,
            "status": self.status_str(),
            "stats": {
                "iterations": self.stats.iterations,
                "moves": moves,
            },
        });
        let obj = doc.as_object_mut().unwrap();
        match &self.outcome {
            SolveOutcome::Tree { tree, .. } => {
                obj.insert("tree".into(), tree_json(tree));
            }
            SolveOutcome::Certificate(cert) => {
                obj.insert("certificate".into(), cert.to_json());
                obj.insert(
                    "tree".into(),
                    json!({
                        "root": cert.tree_root,
                        "edges": cert.tree_edges,
                    }),
                );
            }
            SolveOutcome::Anomaly(a) => {
                obj.insert(
                    "anomaly".into(),
                    json!({ "kind": a.kind.as_str(), "detail": a.detail }),
                );
            }
        }
        doc
    }
}

fn tree_json(t: &RootedTree) -> serde_json::Value {
    let (leaves, branch) = match t.classify() {
        Ok(c) => (c.leaves, c.branch),
        Err(_) => (vec![], vec![]),
    };
    json!({
        "root": t.root(),
        "edges": t.edges(),
        "leaves": leaves,
        "branch": branch,
    })
}

fn tree_outcome(tree: RootedTree) -> SolveOutcome {
    let (l, b) = match tree.classify() {
        Ok(c) => (c.leaf_count(), c.branch_count()),
        Err(_) => (0, 0), // single vertex
    };
    SolveOutcome::Tree {
        tree,
        leaf_count: l,
        branch_count: b,
    }
}

/// Transforms some spanning tree of `g` into one with at most `n` leaves
/// plus branch vertices, or returns a refutation certificate from the
/// irreducible tree it gets stuck on.
///
/// Unless `cfg.force` is set, the degree-sum hypothesis is checked first and
/// an unsatisfied hypothesis is an error rather than a search.
pub fn solve(g: &Graph, m: usize, n: usize, cfg: &SolverConfig) -> Result<SolveResult, SolveError> {
    if m < 1 {
        return Err(SolveError::BadParameters("m must be at least 1".into()));
    }
    if n < 2 {
        return Err(SolveError::BadParameters("n must be at least 2".into()));
    }
    if g.vertex_count() == 0 {
        return Err(SolveError::BadParameters("empty graph".into()));
    }
    if !g.is_connected() {
        return Err(SolveError::NotConnected);
    }
    if let Some(w) = claw_witness(g) {
        return Err(SolveError::NotClawFree(w));
    }
    if !cfg.force {
        let report = check_hypothesis(g, m, n);
        if !report.satisfied {
            return Err(SolveError::HypothesisUnsatisfied(Box::new(report)));
        }
    }

    let nv = g.vertex_count();
    let mut stats = SolveStats::default();

    // Trees on at most two vertices meet any bound n >= 2.
    if nv <= 2 {
        let tree = dfs_spanning_tree(g, 0).expect("connected");
        return Ok(SolveResult {
            outcome: tree_outcome(tree),
            stats,
        });
    }

    let start = cfg.start_vertex.min(nv - 1);
    let mut tree = dfs_spanning_tree(g, start).expect("connected");
    let preferred = policy_root(&tree);
    if preferred != tree.root() {
        tree = tree.rerooted(g, preferred);
    }
    let cap = cfg.max_iterations.unwrap_or((nv as u64).pow(3));

    loop {
        let class = tree.classify().expect("nv >= 3");
        if class.leaf_count() + class.branch_count() <= n {
            return Ok(SolveResult {
                outcome: tree_outcome(tree),
                stats,
            });
        }
        let violation = match find_violation(g, &tree, m, n) {
            Ok(v) => v,
            Err(a) => {
                return Ok(SolveResult {
                    outcome: SolveOutcome::Anomaly(a),
                    stats,
                })
            }
        };
        match violation {
            None => {
                let outcome = match build_certificate(g, &tree, m, n) {
                    Ok(cert) => SolveOutcome::Certificate(cert),
                    Err(a) => SolveOutcome::Anomaly(a),
                };
                return Ok(SolveResult { outcome, stats });
            }
            Some(v) => {
                let before = tree.potential();
                let next = match apply_move(g, &tree, &v.mv) {
                    Ok(t) => t,
                    Err(e) => {
                        return Ok(SolveResult {
                            outcome: SolveOutcome::Anomaly(Anomaly {
                                kind: AnomalyKind::MoveRejected,
                                detail: format!(
                                    "{} repair {:?} rejected: {e}",
                                    v.claim_tag.as_str(),
                                    v.mv
                                ),
                            }),
                            stats,
                        })
                    }
                };
                let after = next.potential();
                if after >= before {
                    return Ok(SolveResult {
                        outcome: SolveOutcome::Anomaly(Anomaly {
                            kind: AnomalyKind::NonDecreasingMove,
                            detail: format!(
                                "{} repair did not decrease the potential ({before:?} -> {after:?})",
                                v.claim_tag.as_str()
                            ),
                        }),
                        stats,
                    });
                }
                stats.iterations += 1;
                *stats.moves_by_claim.entry(v.claim_tag).or_insert(0) += 1;
                if stats.iterations > cap {
                    return Ok(SolveResult {
                        outcome: SolveOutcome::Anomaly(Anomaly {
                            kind: AnomalyKind::IterationCap,
                            detail: format!("exceeded {cap} iterations"),
                        }),
                        stats,
                    });
                }
                tree = next;
            }
        }
    }
}

/// Branch-count mode: runs [`solve`] with `n = 2k+3`, `m = k+3`, whose
/// hypothesis reduces to `sigma_{k+4} >= |G| - k - 1`. A returned tree has at
/// most `k` branch vertices (implied by the leaf bound together with
/// `|L| >= |B| + 2`; asserted, not assumed).
pub fn solve_branch_mode(
    g: &Graph,
    k: usize,
    cfg: &SolverConfig,
) -> Result<SolveResult, SolveError> {
    if k < 1 {
        return Err(SolveError::BadParameters("k must be at least 1".into()));
    }
    let n = 2 * k + 3;
    let m = k + 3;
    let result = solve(g, m, n, cfg)?;
    if let SolveOutcome::Tree { branch_count, .. } = &result.outcome {
        if *branch_count > k {
            return Ok(SolveResult {
                outcome: SolveOutcome::Anomaly(Anomaly {
                    kind: AnomalyKind::GuardInconsistency,
                    detail: format!(
                        "branch mode returned {branch_count} branch vertices for k = {k}"
                    ),
                }),
                stats: result.stats,
            });
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, SigmaValue};
    use crate::instances::named;
    use crate::tree::RootedTree;

    fn cycle(n: usize) -> Graph {
        let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn c6_yields_hamiltonian_path_immediately() {
        let g = cycle(6);
        let res = solve(&g, 1, 2, &SolverConfig::default()).unwrap();
        match &res.outcome {
            SolveOutcome::Tree {
                leaf_count,
                branch_count,
                ..
            } => {
                assert_eq!(leaf_count + branch_count, 2);
            }
            other => panic!("expected tree, got {other:?}"),
        }
        assert_eq!(res.stats.iterations, 0);
    }

    #[test]
    fn net_with_n4_returns_tree_of_value_four() {
        let g = named("net").unwrap();
        let res = solve(&g, 1, 4, &SolverConfig::default()).unwrap();
        match &res.outcome {
            SolveOutcome::Tree {
                leaf_count,
                branch_count,
                ..
            } => assert_eq!(leaf_count + branch_count, 4),
            other => panic!("expected tree, got {other:?}"),
        }
    }

    #[test]
    fn net_with_n3_forced_returns_verified_certificate() {
        let g = named("net").unwrap();
        let err = solve(&g, 1, 3, &SolverConfig::default()).unwrap_err();
        assert!(matches!(err, SolveError::HypothesisUnsatisfied(_)));

        let cfg = SolverConfig {
            force: true,
            ..Default::default()
        };
        let res = solve(&g, 1, 3, &cfg).unwrap();
        match &res.outcome {
            SolveOutcome::Certificate(cert) => {
                assert_eq!(cert.witness.len(), 2);
                assert_eq!(cert.degree_sum, 2);
                assert_eq!(cert.count, 3);
                assert_eq!(cert.bound, 2);
                verify_certificate(&g, cert, 1, 3).unwrap();
                // the refutation really does break the degree-sum hypothesis
                assert_eq!(crate::graph::sigma_k(&g, 2), SigmaValue::Finite(2));
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn claw_input_is_refused_with_witness() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        match solve(&g, 1, 2, &SolverConfig::default()).unwrap_err() {
            SolveError::NotClawFree(w) => {
                assert_eq!(w.center, 0);
                assert_eq!(w.leaves, [1, 2, 3]);
            }
            other => panic!("expected claw refusal, got {other:?}"),
        }
    }

    #[test]
    fn two_vertex_graph_short_circuits() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let res = solve(&g, 1, 2, &SolverConfig::default()).unwrap();
        assert_eq!(res.status_str(), "tree");
    }

    #[test]
    fn branch_mode_on_net() {
        let g = named("net").unwrap();
        // alpha(net) = 3 < 5, so sigma_5 is infinite and the hypothesis holds
        let res = solve_branch_mode(&g, 1, &SolverConfig::default()).unwrap();
        match &res.outcome {
            SolveOutcome::Tree { branch_count, .. } => assert!(*branch_count <= 1),
            other => panic!("expected tree, got {other:?}"),
        }
    }

    #[test]
    fn branch_mode_on_c6_gives_path() {
        let g = cycle(6);
        let res = solve_branch_mode(&g, 1, &SolverConfig::default()).unwrap();
        match &res.outcome {
            SolveOutcome::Tree { branch_count, .. } => assert_eq!(*branch_count, 0),
            other => panic!("expected tree, got {other:?}"),
        }
    }

    #[test]
    fn branch_mode_refuses_claws() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(matches!(
            solve_branch_mode(&g, 1, &SolverConfig::default()).unwrap_err(),
            SolveError::NotClawFree(_)
        ));
    }

    #[test]
    fn k5_reaches_the_bound_from_a_bad_start() {
        // Force the search to begin at a star (potentially many leaves) by
        // running on K_5 with n = 2: every spanning tree can be improved to a
        // Hamiltonian path.
        let g = {
            let mut edges = Vec::new();
            for i in 0..5 {
                for j in i + 1..5 {
                    edges.push((i, j));
                }
            }
            Graph::from_edges(5, &edges).unwrap()
        };
        let res = solve(&g, 1, 2, &SolverConfig::default()).unwrap();
        assert_eq!(res.status_str(), "tree");
    }

    #[test]
    fn result_json_matches_schema_shape() {
        let g = cycle(6);
        let res = solve(&g, 1, 2, &SolverConfig::default()).unwrap();
        let doc = res.to_json();
        assert_eq!(doc["schema"], 1);
        assert_eq!(doc["status"], "tree");
        assert!(doc["tree"]["edges"].is_array());
        assert!(doc["stats"]["iterations"].is_u64());
    }

    #[test]
    fn solve_is_deterministic() {
        let g = named("4net").unwrap();
        let cfg = SolverConfig {
            force: true,
            ..Default::default()
        };
        let a = solve(&g, 1, 5, &cfg).unwrap();
        let b = solve(&g, 1, 5, &cfg).unwrap();
        assert_eq!(a.stats.iterations, b.stats.iterations);
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn find_violation_on_k4_star_matches_expected_repair() {
        let g = {
            let mut edges = Vec::new();
            for i in 0..4 {
                for j in i + 1..4 {
                    edges.push((i, j));
                }
            }
            Graph::from_edges(4, &edges).unwrap()
        };
        let t = RootedTree::from_edge_set(&g, &[Edge(0, 1), Edge(0, 2), Edge(0, 3)], 0).unwrap();
        let v = find_violation(&g, &t, 1, 2).unwrap().unwrap();
        assert_eq!(v.claim_tag, ClaimTag::Claim7);
        assert_eq!(v.mv.remove, vec![Edge(0, 1)]);
        assert_eq!(v.mv.add, vec![Edge(1, 2)]);
    }

    #[test]
    fn find_violation_on_k5_star_matches_expected_repair() {
        let g = {
            let mut edges = Vec::new();
            for i in 0..5 {
                for j in i + 1..5 {
                    edges.push((i, j));
                }
            }
            Graph::from_edges(5, &edges).unwrap()
        };
        let t = RootedTree::from_edge_set(
            &g,
            &[Edge(0, 1), Edge(0, 2), Edge(0, 3), Edge(0, 4)],
            0,
        )
        .unwrap();
        let v = find_violation(&g, &t, 1, 2).unwrap().unwrap();
        assert_eq!(v.claim_tag, ClaimTag::Claim2);
        assert_eq!(v.mv.remove, vec![Edge(0, 1)]);
        assert_eq!(v.mv.add, vec![Edge(1, 3)]);
    }

    #[test]
    fn net_fixpoint_tree_has_no_violation() {
        let g = named("net").unwrap();
        let t = RootedTree::from_edge_set(
            &g,
            &[Edge(0, 1), Edge(0, 2), Edge(0, 3), Edge(1, 4), Edge(2, 5)],
            0,
        )
        .unwrap();
        assert!(find_violation(&g, &t, 1, 3).unwrap().is_none());
    }
}
