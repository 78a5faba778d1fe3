use leafbound::graph::{line_graph, Edge, Graph};
use leafbound::instances::{named, random_connected, Rng64};
use leafbound::oracle::enumerate_spanning_trees;
use leafbound::solver::{build_certificate, find_violation, verify_certificate};
use leafbound::tree::{apply_move, policy_root, RootedTree};
use std::collections::BTreeMap;

fn main() {
    let mut hist: BTreeMap<String, u64> = BTreeMap::new();
    let mut starts = 0u64;
    let mut certs = 0u64;
    let mut run = |g: &Graph, edges: &[Edge]| {
        starts += 1;
        let mut t = RootedTree::from_edge_set(g, edges, 0).unwrap();
        let pr = policy_root(&t);
        if pr != t.root() { t = t.rerooted(g, pr); }
        let (m, n) = (1usize, 2usize);
        let cap = (g.vertex_count() as u64).pow(3);
        let mut iters = 0u64;
        loop {
            let c = t.classify().unwrap();
            if c.leaf_count() + c.branch_count() <= n { return; }
            match find_violation(g, &t, m, n).expect("anomaly in scan") {
                None => {
                    let cert = build_certificate(g, &t, m, n).expect("cert anomaly");
                    verify_certificate(g, &cert, m, n).expect("unsound cert");
                    certs += 1;
                    return;
                }
                Some(v) => {
                    let before = t.potential();
                    let t2 = apply_move(g, &t, &v.mv).expect("rejected");
                    assert!(t2.potential() < before, "non-decreasing {:?}", v.claim_tag);
                    *hist.entry(v.claim_tag.as_str().to_string()).or_insert(0) += 1;
                    t = t2;
                    iters += 1;
                    assert!(iters <= cap);
                }
            }
        }
    };
    for name in ["c5","c6","k4","k5","net","4net"] {
        let g = named(name).unwrap();
        let mut trees = Vec::new();
        enumerate_spanning_trees(&g, |e| trees.push(e.to_vec())).unwrap();
        for e in trees { run(&g, &e); }
    }
    let mut rng = Rng64::new(0xA11CE);
    let mut graphs = 0;
    while graphs < 60 {
        let nv = 4 + (rng.below(5) as usize);
        let extra = rng.below(4) as usize;
        let Ok(base) = random_connected(nv, extra, rng.next_u64()) else { continue };
        let Ok(lg) = line_graph(&base) else { continue };
        if lg.vertex_count() < 4 || lg.vertex_count() > 12 || !leafbound::oracle::fits_size_guard(&lg) { continue; }
        graphs += 1;
        let mut trees = Vec::new();
        enumerate_spanning_trees(&lg, |e| trees.push(e.to_vec())).unwrap();
        for e in trees { run(&lg, &e); }
    }
    println!("starts: {starts}, certificates: {certs}");
    println!("claim firings: {hist:?}");
}
