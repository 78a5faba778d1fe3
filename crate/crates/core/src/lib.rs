//! Spanning trees with few leaves and branch vertices in claw-free graphs.
//!
//! The library turns an arbitrary spanning tree of a connected claw-free
//! graph into one with at most `n` leaves plus branch vertices whenever the
//! degree-sum hypothesis `sigma_{m+1}(G) >= |G| - n + m - 1` (with
//! `m <= ceil(2n/3)`) holds, by a potential-decreasing edge-swap search.
//! When the search reaches an irreducible tree above the bound instead, it
//! emits a standalone refutation certificate showing that the hypothesis
//! fails. A brute-force oracle validates everything at desk scale.

pub mod graph;
pub mod instances;
pub mod oblique;
pub mod oracle;
pub mod solver;
pub mod tree;

pub use graph::{
    check_hypothesis, claw_witness, line_graph, parse_graph, sigma_k, write_graph, ClawWitness,
    Edge, Graph, GraphError, HypothesisReport, SigmaValue,
};
pub use solver::{
    build_certificate, solve, solve_branch_mode, verify_certificate, Certificate, SolveOutcome,
    SolveResult, SolverConfig,
};
pub use tree::{
    apply_move, dfs_spanning_tree, policy_root, ClaimTag, Move, PotentialKey, RootedTree, TrKey,
};
