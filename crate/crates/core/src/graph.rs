//! Immutable simple-graph model: adjacency, claw detection, degree-sum
//! invariants over independent sets, line graphs, and the hypothesis check
//! used by the solver front end.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// An undirected edge stored with the smaller endpoint first.
///
/// Serializes as a two-element array `[u, v]`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(pub usize, pub usize);

impl Edge {
    /// Canonical constructor; endpoint order does not matter.
    ///
    /// # Panics
    /// Panics if `a == b` (self-loops are never valid edges here).
    pub fn new(a: usize, b: usize) -> Self {
        assert!(a != b, "self-loop edge ({a},{b})");
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn u(&self) -> usize {
        self.0
    }

    pub fn v(&self) -> usize {
        self.1
    }

    pub fn has_endpoint(&self, x: usize) -> bool {
        self.0 == x || self.1 == x
    }

    /// The endpoint that is not `x`.
    ///
    /// # Panics
    /// Panics if `x` is not an endpoint.
    pub fn other(&self, x: usize) -> usize {
        if self.0 == x {
            self.1
        } else {
            assert_eq!(self.1, x, "vertex {x} is not an endpoint of {self:?}");
            self.0
        }
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

/// A simple undirected graph over dense vertex ids `0..n`.
///
/// Adjacency lists are kept sorted; the structure is immutable after
/// construction, so values can be shared freely across threads.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

/// Errors from building or parsing a graph.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: malformed line {content:?}")]
    MalformedLine { line: usize, content: String },
    #[error("line {line}: vertex id {id} out of range (n = {n})")]
    VertexOutOfRange { line: usize, id: usize, n: usize },
    #[error("line {line}: self-loop at vertex {id}")]
    SelfLoop { line: usize, id: usize },
    #[error("line {line}: duplicate edge ({u},{v})")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("edge count mismatch: header says {expected}, found {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("missing header line \"N M\"")]
    MissingHeader,
    #[error("graph has no edges")]
    NoEdges,
}

impl Graph {
    /// Builds a graph from an edge list, validating simplicity.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            let line = i + 2; // as if read from an edge-list document
            if u >= n {
                return Err(GraphError::VertexOutOfRange { line, id: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { line, id: v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { line, id: u });
            }
            if adj[u].contains(&v) {
                let (a, b) = if u < v { (u, v) } else { (v, u) };
                return Err(GraphError::DuplicateEdge { line, u: a, v: b });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            adj,
            edge_count: edges.len(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u].binary_search(&v).is_ok()
    }

    /// All edges in canonical order (smaller endpoint first, sorted).
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.adj.len() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push(Edge(u, v));
                }
            }
        }
        out
    }

    /// True iff every vertex is reachable from vertex 0. Vacuously true for
    /// the empty and one-vertex graph.
    pub fn is_connected(&self) -> bool {
        let n = self.adj.len();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }
}

/// Witness of an induced claw: `center` adjacent to all three `leaves`,
/// which are pairwise non-adjacent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClawWitness {
    pub center: usize,
    pub leaves: [usize; 3],
}

/// Returns an induced-claw witness, or `None` when the graph is claw-free.
///
/// Scans centers in ascending id order and neighbor triples in ascending
/// lexicographic order, so the returned witness is deterministic.
pub fn claw_witness(g: &Graph) -> Option<ClawWitness> {
    for c in 0..g.vertex_count() {
        let nb = g.neighbors(c);
        let d = nb.len();
        for i in 0..d {
            for j in i + 1..d {
                if g.has_edge(nb[i], nb[j]) {
                    continue;
                }
                for k in j + 1..d {
                    if !g.has_edge(nb[i], nb[k]) && !g.has_edge(nb[j], nb[k]) {
                        return Some(ClawWitness {
                            center: c,
                            leaves: [nb[i], nb[j], nb[k]],
                        });
                    }
                }
            }
        }
    }
    None
}

/// The value of a degree-sum minimum over independent sets; infinite when no
/// independent set of the requested size exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SigmaValue {
    Finite(u64),
    Infinite,
}

impl SigmaValue {
    pub fn at_least(&self, threshold: i64) -> bool {
        match self {
            SigmaValue::Infinite => true,
            SigmaValue::Finite(s) => *s as i64 >= threshold,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, SigmaValue::Finite(_))
    }
}

impl fmt::Display for SigmaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigmaValue::Finite(s) => write!(f, "{s}"),
            SigmaValue::Infinite => write!(f, "inf"),
        }
    }
}

/// Minimum degree sum over all independent sets of exactly `k` vertices.
///
/// Depth-first enumeration in ascending vertex order, pruned with the sum of
/// the `k - depth` smallest candidate degrees. Exact; intended for graphs of
/// a few dozen vertices.
///
/// # Panics
/// Panics if `k == 0`.
pub fn sigma_k(g: &Graph, k: usize) -> SigmaValue {
    assert!(k >= 1, "sigma_k requires k >= 1");
    let n = g.vertex_count();
    let mut best: Option<u64> = None;
    let mut chosen: Vec<usize> = Vec::with_capacity(k);

    // candidates[v] = still eligible (independent from everything chosen)
    fn recurse(
        g: &Graph,
        k: usize,
        start: usize,
        sum: u64,
        chosen: &mut Vec<usize>,
        blocked: &mut Vec<bool>,
        best: &mut Option<u64>,
    ) {
        if chosen.len() == k {
            if best.map_or(true, |b| sum < b) {
                *best = Some(sum);
            }
            return;
        }
        let need = k - chosen.len();
        let n = g.vertex_count();
        if n.saturating_sub(start) < need {
            return;
        }
        // Lower bound: current sum plus the `need` smallest remaining degrees.
        if let Some(b) = *best {
            let mut degs: Vec<u64> = (start..n)
                .filter(|&v| !blocked[v])
                .map(|v| g.degree(v) as u64)
                .collect();
            if degs.len() < need {
                return;
            }
            degs.sort_unstable();
            let bound: u64 = sum + degs[..need].iter().sum::<u64>();
            if bound >= b {
                return;
            }
        }
        for v in start..n {
            if blocked[v] {
                continue;
            }
            let mut newly = Vec::new();
            for &w in g.neighbors(v) {
                if w > v && !blocked[w] {
                    blocked[w] = true;
                    newly.push(w);
                }
            }
            chosen.push(v);
            recurse(g, k, v + 1, sum + g.degree(v) as u64, chosen, blocked, best);
            chosen.pop();
            for w in newly {
                blocked[w] = false;
            }
        }
    }

    let mut blocked = vec![false; n];
    recurse(g, k, 0, 0, &mut chosen, &mut blocked, &mut best);
    match best {
        Some(s) => SigmaValue::Finite(s),
        None => SigmaValue::Infinite,
    }
}

/// Smallest integer not below `2n/3`, in integer arithmetic.
pub fn ceil_two_thirds(n: usize) -> usize {
    (2 * n + 2) / 3
}

/// Outcome of checking the degree-sum hypothesis for parameters `(m, n)`:
/// connected, claw-free, `m <= ceil(2n/3)`, and `sigma_{m+1} >= |G|-n+m-1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub connected: bool,
    pub claw_free: bool,
    pub claw: Option<ClawWitness>,
    pub m: usize,
    pub n: usize,
    pub m_constraint_ok: bool,
    pub sigma_value: SigmaValue,
    pub threshold: i64,
    pub satisfied: bool,
}

/// Evaluates the hypothesis report for `(g, m, n)`. Failures are report
/// fields, never errors.
///
/// # Panics
/// Panics if `m < 1` or `n < 2`.
pub fn check_hypothesis(g: &Graph, m: usize, n: usize) -> HypothesisReport {
    assert!(m >= 1, "m must be at least 1");
    assert!(n >= 2, "n must be at least 2");
    let connected = g.is_connected();
    let claw = claw_witness(g);
    let claw_free = claw.is_none();
    let m_constraint_ok = m <= ceil_two_thirds(n);
    let sigma_value = sigma_k(g, m + 1);
    let threshold = g.vertex_count() as i64 - n as i64 + m as i64 - 1;
    let satisfied = connected && claw_free && m_constraint_ok && sigma_value.at_least(threshold);
    HypothesisReport {
        connected,
        claw_free,
        claw,
        m,
        n,
        m_constraint_ok,
        sigma_value,
        threshold,
        satisfied,
    }
}

/// Line graph: one vertex per edge of `g` (in canonical edge order), with two
/// vertices adjacent iff the underlying edges share an endpoint.
pub fn line_graph(g: &Graph) -> Result<Graph, GraphError> {
    let edges = g.edges();
    if edges.is_empty() {
        return Err(GraphError::NoEdges);
    }
    let m = edges.len();
    let mut lg_edges = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = (edges[i], edges[j]);
            if a.has_endpoint(b.u()) || a.has_endpoint(b.v()) {
                lg_edges.push((i, j));
            }
        }
    }
    Graph::from_edges(m, &lg_edges)
}

/// Parses the text edge-list format: a header `N M`, then `M` lines `u v`.
/// `#` begins a comment line; blank lines are ignored.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut adj_seen: Vec<Vec<usize>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let a = parts.next();
        let b = parts.next();
        let rest = parts.next();
        let (a, b) = match (a, b, rest) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(GraphError::MalformedLine {
                    line: line_no,
                    content: line.to_string(),
                })
            }
        };
        let (a, b): (usize, usize) = match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                return Err(GraphError::MalformedLine {
                    line: line_no,
                    content: line.to_string(),
                })
            }
        };
        match header {
            None => {
                header = Some((a, b));
                adj_seen = vec![Vec::new(); a];
            }
            Some((n, _)) => {
                if a >= n {
                    return Err(GraphError::VertexOutOfRange {
                        line: line_no,
                        id: a,
                        n,
                    });
                }
                if b >= n {
                    return Err(GraphError::VertexOutOfRange {
                        line: line_no,
                        id: b,
                        n,
                    });
                }
                if a == b {
                    return Err(GraphError::SelfLoop { line: line_no, id: a });
                }
                if adj_seen[a].contains(&b) {
                    let (u, v) = if a < b { (a, b) } else { (b, a) };
                    return Err(GraphError::DuplicateEdge { line: line_no, u, v });
                }
                adj_seen[a].push(b);
                adj_seen[b].push(a);
                edges.push((a, b));
            }
        }
    }

    let (n, m) = header.ok_or(GraphError::MissingHeader)?;
    if edges.len() != m {
        return Err(GraphError::EdgeCountMismatch {
            expected: m,
            found: edges.len(),
        });
    }
    Graph::from_edges(n, &edges)
}

/// Writes the edge list in the canonical form parsed by [`parse_graph`];
/// `parse_graph(&write_graph(g))` reproduces `g` exactly.
pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", g.vertex_count(), g.edge_count()));
    for e in g.edges() {
        out.push_str(&format!("{} {}\n", e.u(), e.v()));
    }
    out
}
