//! Refutation certificates.
//!
//! An irreducible tree that still exceeds the bound is turned into a
//! certificate: an independent, pseudoindependent witness set of `m + 1`
//! vertices together with tree edges none of which has an oblique neighbor
//! in the witness. Counting those edges bounds the witness degree sum by
//! `|G| - n + m - 2`, which refutes the degree-sum hypothesis. The verifier
//! recomputes everything from the graph and the certificate alone.

use crate::graph::{Edge, Graph};
use crate::oblique::{is_oblique_neighbor, is_pseudoindependent};
use crate::solver::{Anomaly, AnomalyKind};
use crate::tree::RootedTree;
use serde_json::json;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertMode {
    Case1,
    Case2,
}

impl CertMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertMode::Case1 => "case1",
            CertMode::Case2 => "case2",
        }
    }
}

/// A standalone refutation witness; serializes to a self-contained JSON
/// object that [`verify_certificate`] can check without solver state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub mode: CertMode,
    /// Independent, pseudoindependent set of `m + 1` vertices.
    pub witness: Vec<usize>,
    /// The root used by the rooted regime (mode `case2` only).
    pub root: Option<usize>,
    /// Tree edges with no oblique neighbor in the witness.
    pub edges_no_oblique: Vec<Edge>,
    pub count: usize,
    pub degree_sum: u64,
    /// `|G| - n + m - 2`.
    pub bound: i64,
    pub tree_root: usize,
    pub tree_edges: Vec<Edge>,
}

impl Certificate {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "mode": self.mode.as_str(),
            "witness": self.witness,
            "root": self.root,
            "edges_no_oblique": self.edges_no_oblique,
            "count": self.count,
            "degree_sum": self.degree_sum,
            "bound": self.bound,
            "tree": {
                "root": self.tree_root,
                "edges": self.tree_edges,
            },
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, String> {
        let mode = match value["mode"].as_str() {
            Some("case1") => CertMode::Case1,
            Some("case2") => CertMode::Case2,
            other => return Err(format!("bad mode {other:?}")),
        };
        let witness = parse_usize_array(&value["witness"]).ok_or("bad witness array")?;
        let root = match &value["root"] {
            serde_json::Value::Null => None,
            v => Some(v.as_u64().ok_or("bad root")? as usize),
        };
        let edges_no_oblique =
            parse_edge_array(&value["edges_no_oblique"]).ok_or("bad edge array")?;
        let count = value["count"].as_u64().ok_or("bad count")? as usize;
        let degree_sum = value["degree_sum"].as_u64().ok_or("bad degree_sum")?;
        let bound = value["bound"].as_i64().ok_or("bad bound")?;
        let tree_root = value["tree"]["root"].as_u64().ok_or("bad tree root")? as usize;
        let tree_edges = parse_edge_array(&value["tree"]["edges"]).ok_or("bad tree edges")?;
        Ok(Certificate {
            mode,
            witness,
            root,
            edges_no_oblique,
            count,
            degree_sum,
            bound,
            tree_root,
            tree_edges,
        })
    }
}

fn parse_usize_array(v: &serde_json::Value) -> Option<Vec<usize>> {
    v.as_array()?
        .iter()
        .map(|x| x.as_u64().map(|n| n as usize))
        .collect()
}

fn parse_edge_array(v: &serde_json::Value) -> Option<Vec<Edge>> {
    v.as_array()?
        .iter()
        .map(|pair| {
            let arr = pair.as_array()?;
            if arr.len() != 2 {
                return None;
            }
            let a = arr[0].as_u64()? as usize;
            let b = arr[1].as_u64()? as usize;
            (a != b).then(|| Edge::new(a, b))
        })
        .collect()
}

/// Why a certificate failed verification.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CertificateDefect {
    #[error("witness has size {found}, expected {expected}")]
    WitnessSize { expected: usize, found: usize },
    #[error("witness vertex {0} out of range")]
    WitnessOutOfRange(usize),
    #[error("witness vertices {0} and {1} are adjacent")]
    WitnessNotIndependent(usize, usize),
    #[error("witness is not pseudoindependent with respect to the tree")]
    WitnessNotPseudoindependent,
    #[error("embedded tree is not a spanning tree: {0}")]
    TreeInvalid(String),
    #[error("listed edge {0:?} is not a tree edge")]
    EdgeNotInTree(Edge),
    #[error("listed edge {0:?} has witness vertex {1} as an oblique neighbor")]
    EdgeHasObliqueWitness(Edge, usize),
    #[error("listed edges are not distinct")]
    EdgesNotDistinct,
    #[error("count field {0} does not match {1} listed edges")]
    CountMismatch(usize, usize),
    #[error("count {count} below the required n + 1 - m = {required}")]
    CountTooSmall { count: usize, required: i64 },
    #[error("degree_sum field {stated} does not match recomputed {actual}")]
    DegreeSumMismatch { stated: u64, actual: u64 },
    #[error("bound field {stated} does not match |G| - n + m - 2 = {actual}")]
    BoundMismatch { stated: i64, actual: i64 },
    #[error("degree sum {degree_sum} exceeds the bound {bound}")]
    BoundExceeded { degree_sum: u64, bound: i64 },
}

fn cert_bug(detail: impl Into<String>) -> Anomaly {
    Anomaly {
        kind: AnomalyKind::CertificateDefect,
        detail: detail.into(),
    }
}

/// True iff no witness vertex is an oblique neighbor of `e`.
fn edge_free_of(g: &Graph, t: &RootedTree, witness: &[usize], e: Edge) -> bool {
    witness.iter().all(|&w| !is_oblique_neighbor(g, t, w, e))
}

/// Builds the refutation certificate for an irreducible tree that still has
/// more than `n` leaves plus branch vertices. The construction re-checks
/// every property it relies on and reports an anomaly instead of emitting an
/// unsound certificate.
pub fn build_certificate(
    g: &Graph,
    t: &RootedTree,
    m: usize,
    n: usize,
) -> Result<Certificate, Anomaly> {
    let class = t
        .classify()
        .map_err(|e| cert_bug(format!("classification failed: {e}")))?;
    if class.leaf_count() + class.branch_count() < n + 1 {
        return Err(cert_bug(
            "certificate requested although the tree meets the bound",
        ));
    }
    let b3: Vec<usize> = class.branch_by_degree(t, 3);
    let cert = if b3.is_empty() {
        build_case1(g, t, &class.leaves, &class.branch, m, n)?
    } else {
        build_case2(g, t, &class.leaves, &class.branch, &b3, m, n)?
    };
    verify_certificate(g, &cert, m, n).map_err(|d| cert_bug(format!("self-check failed: {d}")))?;
    Ok(cert)
}

fn build_case1(
    g: &Graph,
    t: &RootedTree,
    leaves: &[usize],
    branch: &[usize],
    m: usize,
    n: usize,
) -> Result<Certificate, Anomaly> {
    if leaves.len() < m + 1 {
        return Err(cert_bug(format!(
            "only {} leaves for a witness of size {}",
            leaves.len(),
            m + 1
        )));
    }
    let witness: Vec<usize> = leaves[..m + 1].to_vec();
    // pendant edges of the leaves left out of the witness
    let mut pendant_edges = Vec::new();
    for &l in &leaves[m + 1..] {
        let e = Edge::new(l, t.neighbors(l)[0]);
        if !edge_free_of(g, t, &witness, e) {
            return Err(cert_bug(format!(
                "pendant edge {e:?} has an oblique neighbor in the witness"
            )));
        }
        pendant_edges.push(e);
    }
    // per branch vertex, a host-adjacent child pair whose edges are clean
    let mut pair_edges = Vec::new();
    for &b in branch {
        let kids = t.children(b);
        let mut chosen = None;
        'pairs: for i in 0..kids.len() {
            for j in i + 1..kids.len() {
                let (c1, c2) = (kids[i], kids[j]);
                if !g.has_edge(c1, c2) {
                    continue;
                }
                let (e1, e2) = (Edge::new(b, c1), Edge::new(b, c2));
                if edge_free_of(g, t, &witness, e1) && edge_free_of(g, t, &witness, e2) {
                    chosen = Some((e1, e2));
                    break 'pairs;
                }
            }
        }
        match chosen {
            Some((e1, e2)) => {
                pair_edges.push(e1);
                pair_edges.push(e2);
            }
            None => {
                return Err(cert_bug(format!(
                    "branch vertex {b} has no clean adjacent child pair"
                )))
            }
        }
    }
    for e in &pendant_edges {
        if pair_edges.contains(e) {
            return Err(cert_bug(format!(
                "edge {e:?} appears in both counted sets"
            )));
        }
    }
    let mut edges = pendant_edges;
    edges.extend(pair_edges);
    edges.sort_unstable();
    finish(g, t, CertMode::Case1, None, witness, edges, m, n)
}

#[allow(clippy::too_many_arguments)]
fn build_case2(
    g: &Graph,
    t: &RootedTree,
    leaves: &[usize],
    branch: &[usize],
    b3: &[usize],
    m: usize,
    n: usize,
) -> Result<Certificate, Anomaly> {
    let root = t.root();
    if t.degree(root) != 3 {
        return Err(cert_bug(format!(
            "root {root} is not a degree-3 branch vertex"
        )));
    }
    let mut h_set: Vec<usize> = leaves
        .iter()
        .chain(b3.iter())
        .copied()
        .filter(|&v| v != root)
        .collect();
    h_set.sort_unstable();
    if h_set.len() < m + 1 {
        return Err(cert_bug(format!(
            "tracked set has {} members for a witness of size {}",
            h_set.len(),
            m + 1
        )));
    }
    let witness: Vec<usize> = h_set[..m + 1].to_vec();

    // two clean root edges over a host-adjacent neighbor pair
    let mut root_edges = Vec::new();
    {
        let nb = t.children(root);
        let mut chosen = None;
        'pairs: for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                let (r1, r2) = (nb[i], nb[j]);
                if !g.has_edge(r1, r2) {
                    continue;
                }
                let (e1, e2) = (Edge::new(root, r1), Edge::new(root, r2));
                if edge_free_of(g, t, &witness, e1) && edge_free_of(g, t, &witness, e2) {
                    chosen = Some((e1, e2));
                    break 'pairs;
                }
            }
        }
        match chosen {
            Some((e1, e2)) => {
                root_edges.push(e1);
                root_edges.push(e2);
            }
            None => return Err(cert_bug("root has no clean adjacent neighbor pair")),
        }
    }
    // one clean child edge per non-root degree-3 branch vertex outside the witness
    let mut deg3_edges = Vec::new();
    for &u in b3 {
        if u == root || witness.contains(&u) {
            continue;
        }
        let kids = t.children(u);
        let (a, b) = (kids[0], kids[1]);
        if !g.has_edge(a, b) {
            return Err(cert_bug(format!(
                "children of degree-3 vertex {u} are not adjacent"
            )));
        }
        let ea = Edge::new(u, a);
        let eb = Edge::new(u, b);
        if edge_free_of(g, t, &witness, ea) {
            deg3_edges.push(ea);
        } else if edge_free_of(g, t, &witness, eb) {
            deg3_edges.push(eb);
        } else {
            return Err(cert_bug(format!(
                "degree-3 vertex {u} has no clean child edge"
            )));
        }
    }
    // one clean paired child edge per higher-degree branch vertex
    let mut high_edges = Vec::new();
    for &b in branch {
        if t.degree(b) < 4 {
            continue;
        }
        let kids = t.children(b);
        let mut chosen = None;
        'pairs: for i in 0..kids.len() {
            for j in i + 1..kids.len() {
                let (c1, c2) = (kids[i], kids[j]);
                if !g.has_edge(c1, c2) {
                    continue;
                }
                let e1 = Edge::new(b, c1);
                if edge_free_of(g, t, &witness, e1) {
                    chosen = Some(e1);
                    break 'pairs;
                }
                let e2 = Edge::new(b, c2);
                if edge_free_of(g, t, &witness, e2) {
                    chosen = Some(e2);
                    break 'pairs;
                }
            }
        }
        match chosen {
            Some(e) => high_edges.push(e),
            None => {
                return Err(cert_bug(format!(
                    "branch vertex {b} has no clean paired child edge"
                )))
            }
        }
    }
    // pendant edges of the leaves left out of the witness
    let mut pendant_edges = Vec::new();
    for &l in leaves {
        if witness.contains(&l) {
            continue;
        }
        let e = Edge::new(l, t.neighbors(l)[0]);
        if !edge_free_of(g, t, &witness, e) {
            return Err(cert_bug(format!(
                "pendant edge {e:?} has an oblique neighbor in the witness"
            )));
        }
        pendant_edges.push(e);
    }
    let groups: [&[Edge]; 3] = [
        &root_edges[..],
        &deg3_edges[..],
        &high_edges[..],
    ];
    for (gi, ga) in groups.iter().enumerate() {
        for gb in groups.iter().skip(gi + 1) {
            if ga.iter().any(|e| gb.contains(e)) {
                return Err(cert_bug("counted edge sets overlap"));
            }
        }
        if ga.iter().any(|e| pendant_edges.contains(e)) {
            return Err(cert_bug("counted edge sets overlap"));
        }
    }
    let mut edges = root_edges;
    edges.extend(deg3_edges);
    edges.extend(high_edges);
    edges.extend(pendant_edges);
    edges.sort_unstable();
    finish(g, t, CertMode::Case2, Some(root), witness, edges, m, n)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    g: &Graph,
    t: &RootedTree,
    mode: CertMode,
    root: Option<usize>,
    witness: Vec<usize>,
    edges: Vec<Edge>,
    m: usize,
    n: usize,
) -> Result<Certificate, Anomaly> {
    let count = edges.len();
    let degree_sum: u64 = witness.iter().map(|&w| g.degree(w) as u64).sum();
    let bound = g.vertex_count() as i64 - n as i64 + m as i64 - 2;
    Ok(Certificate {
        mode,
        witness,
        root,
        edges_no_oblique: edges,
        count,
        degree_sum,
        bound,
        tree_root: t.root(),
        tree_edges: t.edges(),
    })
}

/// Independently verifies a certificate against the graph alone. A passing
/// certificate proves `sigma_{m+1}(g) <= |G| - n + m - 2`, i.e. that the
/// degree-sum hypothesis for `(m, n)` fails.
pub fn verify_certificate(
    g: &Graph,
    cert: &Certificate,
    m: usize,
    n: usize,
) -> Result<(), CertificateDefect> {
    let nv = g.vertex_count();
    if cert.witness.len() != m + 1 {
        return Err(CertificateDefect::WitnessSize {
            expected: m + 1,
            found: cert.witness.len(),
        });
    }
    let mut sorted = cert.witness.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != cert.witness.len() {
        return Err(CertificateDefect::WitnessSize {
            expected: m + 1,
            found: sorted.len(),
        });
    }
    if let Some(&w) = cert.witness.iter().find(|&&w| w >= nv) {
        return Err(CertificateDefect::WitnessOutOfRange(w));
    }
    for (i, &u) in cert.witness.iter().enumerate() {
        for &v in &cert.witness[i + 1..] {
            if g.has_edge(u, v) {
                return Err(CertificateDefect::WitnessNotIndependent(u, v));
            }
        }
    }
    let tree = RootedTree::from_edge_set(g, &cert.tree_edges, cert.tree_root.min(nv - 1))
        .map_err(|e| CertificateDefect::TreeInvalid(e.to_string()))?;
    if !is_pseudoindependent(g, &tree, &cert.witness) {
        return Err(CertificateDefect::WitnessNotPseudoindependent);
    }
    let mut seen = cert.edges_no_oblique.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != cert.edges_no_oblique.len() {
        return Err(CertificateDefect::EdgesNotDistinct);
    }
    for &e in &cert.edges_no_oblique {
        if !tree.contains_edge(e) {
            return Err(CertificateDefect::EdgeNotInTree(e));
        }
        for &w in &cert.witness {
            if is_oblique_neighbor(g, &tree, w, e) {
                return Err(CertificateDefect::EdgeHasObliqueWitness(e, w));
            }
        }
    }
    if cert.count != cert.edges_no_oblique.len() {
        return Err(CertificateDefect::CountMismatch(
            cert.count,
            cert.edges_no_oblique.len(),
        ));
    }
    let required = n as i64 + 1 - m as i64;
    if (cert.count as i64) < required {
        return Err(CertificateDefect::CountTooSmall {
            count: cert.count,
            required,
        });
    }
    let actual_sum: u64 = cert.witness.iter().map(|&w| g.degree(w) as u64).sum();
    if cert.degree_sum != actual_sum {
        return Err(CertificateDefect::DegreeSumMismatch {
            stated: cert.degree_sum,
            actual: actual_sum,
        });
    }
    let actual_bound = nv as i64 - n as i64 + m as i64 - 2;
    if cert.bound != actual_bound {
        return Err(CertificateDefect::BoundMismatch {
            stated: cert.bound,
            actual: actual_bound,
        });
    }
    if cert.degree_sum as i64 > cert.bound {
        return Err(CertificateDefect::BoundExceeded {
            degree_sum: cert.degree_sum,
            bound: cert.bound,
        });
    }
    Ok(())
}
