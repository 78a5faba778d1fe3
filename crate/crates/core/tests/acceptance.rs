//! Acceptance suite: runs every shipped guarantee against the deterministic
//! corpus and prints one pass/fail line per criterion.

use leafbound::graph::{ceil_two_thirds, check_hypothesis, Graph};
use leafbound::instances::{claw_free_corpus, named, random_connected, CorpusEntry, Rng64};
use leafbound::oracle::{enumerate_spanning_trees, oracle_report, sigma_bruteforce, OracleReport};
use leafbound::solver::{verify_certificate, SolveOutcome, SolverConfig};
use leafbound::tree::dfs_spanning_tree;
use leafbound::{sigma_k, solve, solve_branch_mode, SigmaValue};
use std::sync::OnceLock;

const CORPUS_SEED: u64 = 0x5EED_2024;
const CORPUS_BUDGET: usize = 300;
const N_MAX: usize = 6;

struct Fixture {
    corpus: Vec<CorpusEntry>,
    oracle: Vec<OracleReport>,
}

fn fixture() -> &'static Fixture {
    static FIXTURE: OnceLock<Fixture> = OnceLock::new();
    FIXTURE.get_or_init(|| {
        let corpus = claw_free_corpus(CORPUS_BUDGET, CORPUS_SEED);
        let oracle = corpus
            .iter()
            .map(|entry| {
                oracle_report(&entry.graph)
                    .unwrap_or_else(|e| panic!("oracle failed on {}: {e}", entry.id))
            })
            .collect();
        Fixture { corpus, oracle }
    })
}

fn report(criterion: &str, pass: bool) {
    println!(
        "[acceptance] {criterion}: {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion} failed");
}

/// Criteria 1, 2, 4 and 7 ride on the same corpus sweep: for every
/// hypothesis-satisfied combination the solver must return a tree within the
/// bound, the oracle must confirm the bound, the solver can never do better
/// than the oracle, no run may end in a certificate or anomaly, and every
/// run stays within the iteration cap.
#[test]
fn criterion_1_2_4_7_theorem_suite() {
    let fx = fixture();
    let mut failures: Vec<String> = Vec::new();
    let mut runs = 0usize;
    for (entry, oracle) in fx.corpus.iter().zip(fx.oracle.iter()) {
        let g = &entry.graph;
        let nv = g.vertex_count();
        for n in 2..=N_MAX {
            for m in 1..=ceil_two_thirds(n) {
                let hyp = check_hypothesis(g, m, n);
                if !hyp.satisfied {
                    continue;
                }
                runs += 1;
                if oracle.min_leaf_plus_branch > n {
                    failures.push(format!(
                        "{}: oracle min {} exceeds n={n} despite the hypothesis",
                        entry.id, oracle.min_leaf_plus_branch
                    ));
                    continue;
                }
                match solve(g, m, n, &SolverConfig::default()) {
                    Ok(result) => {
                        if result.stats.iterations > (nv as u64).pow(3) {
                            failures.push(format!("{}: iteration cap exceeded", entry.id));
                        }
                        match &result.outcome {
                            SolveOutcome::Tree {
                                leaf_count,
                                branch_count,
                                ..
                            } => {
                                let value = leaf_count + branch_count;
                                if value > n {
                                    failures.push(format!(
                                        "{} (m={m},n={n}): tree value {value} > n",
                                        entry.id
                                    ));
                                }
                                if value < oracle.min_leaf_plus_branch {
                                    failures.push(format!(
                                        "{} (m={m},n={n}): tree value {value} beats the oracle",
                                        entry.id
                                    ));
                                }
                            }
                            SolveOutcome::Certificate(_) => failures.push(format!(
                                "{} (m={m},n={n}): false refutation",
                                entry.id
                            )),
                            SolveOutcome::Anomaly(a) => failures.push(format!(
                                "{} (m={m},n={n}): anomaly {a}",
                                entry.id
                            )),
                        }
                    }
                    Err(e) => failures.push(format!("{} (m={m},n={n}): error {e}", entry.id)),
                }
            }
        }
    }
    for f in failures.iter().take(10) {
        eprintln!("  {f}");
    }
    println!("[acceptance] theorem suite covered {runs} hypothesis-satisfied runs");
    report(
        "criterion 1 (theorem suite: tree status within the bound)",
        failures.is_empty() && runs > 0,
    );
    report(
        "criterion 2 (oracle concordance on the same corpus)",
        failures.is_empty(),
    );
    report(
        "criterion 4 (no false refutations under the hypothesis)",
        failures.is_empty(),
    );
    report(
        "criterion 7 (move soundness and iteration cap)",
        failures.is_empty(),
    );
}

/// Criterion 3: every certificate the suite can elicit passes the
/// independent verifier, and the refuted degree-sum bound is confirmed by
/// brute force.
#[test]
fn criterion_3_certificate_soundness() {
    let fx = fixture();
    let mut checked = 0usize;
    let mut failures: Vec<String> = Vec::new();
    let force = SolverConfig {
        force: true,
        ..Default::default()
    };
    for entry in &fx.corpus {
        let g = &entry.graph;
        for n in 2..=N_MAX {
            for m in 1..=ceil_two_thirds(n) {
                let hyp = check_hypothesis(g, m, n);
                if hyp.satisfied {
                    continue;
                }
                let Ok(result) = solve(g, m, n, &force) else {
                    continue;
                };
                if let SolveOutcome::Certificate(cert) = &result.outcome {
                    checked += 1;
                    if let Err(defect) = verify_certificate(g, cert, m, n) {
                        failures.push(format!("{} (m={m},n={n}): {defect}", entry.id));
                        continue;
                    }
                    let bound = g.vertex_count() as i64 - n as i64 + m as i64 - 2;
                    match sigma_bruteforce(g, m + 1) {
                        SigmaValue::Finite(s) => {
                            if s as i64 > bound {
                                failures.push(format!(
                                    "{} (m={m},n={n}): sigma {s} above refuted bound {bound}",
                                    entry.id
                                ));
                            }
                        }
                        SigmaValue::Infinite => failures.push(format!(
                            "{} (m={m},n={n}): certificate but sigma is infinite",
                            entry.id
                        )),
                    }
                }
            }
        }
    }
    for f in failures.iter().take(10) {
        eprintln!("  {f}");
    }
    println!("[acceptance] certificates checked: {checked}");
    report(
        "criterion 3 (certificate soundness, exact bound arithmetic)",
        failures.is_empty() && checked > 0,
    );
}

/// Criterion 5: the oblique-degree identity holds exactly on more than a
/// thousand random (graph, spanning tree) pairs.
#[test]
fn criterion_5_oblique_degree_identity() {
    let mut rng = Rng64::new(0xB0B);
    let mut pairs = 0usize;
    let mut ok = true;
    'outer: while pairs < 1000 {
        let nv = 4 + (rng.below(7) as usize);
        let max_extra = nv * (nv - 1) / 2 - (nv - 1);
        let extra = (rng.below(5) as usize).min(max_extra);
        let g = random_connected(nv, extra, rng.next_u64()).unwrap();
        for root in 0..nv {
            let t = dfs_spanning_tree(&g, root).unwrap();
            pairs += 1;
            for v in 0..nv {
                if leafbound::oblique::oblique_degree(&g, &t, v) != g.degree(v) {
                    ok = false;
                    break 'outer;
                }
            }
        }
    }
    println!("[acceptance] oblique identity pairs checked: {pairs}");
    report("criterion 5 (oblique-degree identity, exact)", ok && pairs >= 1000);
}

/// Criterion 6: the leaf-count identity and the leaf/branch inequality hold
/// on every enumerated spanning tree across the corpus (at least 10^4
/// trees), and the enumeration agrees with the determinant count.
#[test]
fn criterion_6_structural_identities() {
    let fx = fixture();
    let mut trees = 0u64;
    let mut ok = true;
    for (entry, oracle) in fx.corpus.iter().zip(fx.oracle.iter()) {
        let g = &entry.graph;
        let nv = g.vertex_count();
        if nv < 2 {
            continue;
        }
        let count = enumerate_spanning_trees(g, |edges| {
            let mut deg = vec![0usize; nv];
            for e in edges {
                deg[e.u()] += 1;
                deg[e.v()] += 1;
            }
            let leaves = deg.iter().filter(|&&d| d == 1).count();
            let branch: Vec<usize> = (0..nv).filter(|&v| deg[v] >= 3).collect();
            let excess: usize = branch.iter().map(|&b| deg[b] - 2).sum();
            if leaves != 2 + excess || leaves < branch.len() + 2 {
                ok = false;
            }
        })
        .unwrap();
        if count != oracle.tree_count {
            ok = false;
        }
        if count as u128 != leafbound::oracle::matrix_tree_count(g) {
            ok = false;
        }
        trees += count;
        if trees >= 200_000 {
            break;
        }
    }
    println!("[acceptance] structural identities checked on {trees} trees");
    report(
        "criterion 6 (leaf identities on enumerated trees, exact)",
        ok && trees >= 10_000,
    );
}

/// Criterion 8: branch mode returns a tree with at most k branch vertices
/// whenever its hypothesis holds, and never beats the oracle minimum.
#[test]
fn criterion_8_branch_mode() {
    let fx = fixture();
    let mut runs = 0usize;
    let mut failures: Vec<String> = Vec::new();
    for (entry, oracle) in fx.corpus.iter().zip(fx.oracle.iter()) {
        let g = &entry.graph;
        for k in 1..=2usize {
            let threshold = g.vertex_count() as i64 - k as i64 - 1;
            if !sigma_k(g, k + 4).at_least(threshold) {
                continue;
            }
            runs += 1;
            match solve_branch_mode(g, k, &SolverConfig::default()) {
                Ok(result) => match &result.outcome {
                    SolveOutcome::Tree { branch_count, .. } => {
                        if *branch_count > k {
                            failures.push(format!(
                                "{} (k={k}): {branch_count} branch vertices",
                                entry.id
                            ));
                        }
                        if *branch_count < oracle.min_branch {
                            failures.push(format!(
                                "{} (k={k}): beats the oracle minimum",
                                entry.id
                            ));
                        }
                        if oracle.min_branch > k {
                            failures.push(format!(
                                "{} (k={k}): oracle minimum {} above k",
                                entry.id, oracle.min_branch
                            ));
                        }
                    }
                    other => failures.push(format!(
                        "{} (k={k}): unexpected outcome {other:?}",
                        entry.id
                    )),
                },
                Err(e) => failures.push(format!("{} (k={k}): error {e}", entry.id)),
            }
        }
    }
    for f in failures.iter().take(10) {
        eprintln!("  {f}");
    }
    println!("[acceptance] branch-mode runs: {runs}");
    report(
        "criterion 8 (branch mode within k, oracle cross-check)",
        failures.is_empty() && runs > 0,
    );
}

/// Criterion 9: the pruned degree-sum minimum equals the unpruned reference
/// on the whole corpus for k up to 6.
#[test]
fn criterion_9_sigma_correctness() {
    let fx = fixture();
    let mut ok = true;
    for entry in &fx.corpus {
        for k in 1..=6 {
            if sigma_k(&entry.graph, k) != sigma_bruteforce(&entry.graph, k) {
                eprintln!("  sigma mismatch on {} at k={k}", entry.id);
                ok = false;
            }
        }
    }
    report("criterion 9 (pruned sigma equals brute force, exact)", ok);
}

/// Criterion 10: the frozen fixtures for the named instances.
#[test]
fn criterion_10_known_instance_fixtures() {
    let net = named("net").unwrap();
    let net4 = named("4net").unwrap();
    let c6 = named("c6").unwrap();
    let net_report = oracle_report(&net).unwrap();
    let net4_report = oracle_report(&net4).unwrap();
    let c6_report = oracle_report(&c6).unwrap();
    let ok = net_report.min_leaf_plus_branch == 4
        && net_report.min_branch == 1
        && sigma_k(&net, 2) == SigmaValue::Finite(2)
        && net4_report.min_leaf_plus_branch == 5
        && net4_report.min_branch == 1
        && c6_report.min_leaf_plus_branch == 2;
    report("criterion 10 (known-instance fixtures)", ok);
}
