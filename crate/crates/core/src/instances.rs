//! Deterministic generators for the claw-free test corpus and the named
//! graphs used throughout the suite.

use crate::graph::{claw_witness, line_graph, Graph};
use crate::oracle;
use serde::{Deserialize, Serialize};

/// A 64-bit mixing generator. Update formula, applied to the state `s` on
/// every draw:
///
/// ```text
/// s += 0x9E3779B97F4A7C15
/// z = s
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
/// z = (z ^ (z >> 27)) * 0x94D049BB133111EB
/// output = z ^ (z >> 31)
/// ```
///
/// Any implementation of this formula reproduces the corpus bit for bit.
#[derive(Clone, Debug)]
pub struct Rng64 {
    state: u64,
}

impl Rng64 {
    pub fn new(seed: u64) -> Self {
        Rng64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw from `0..bound` by rejection.
    ///
    /// # Panics
    /// Panics if `bound == 0`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }
}

/// What to generate; identical specs yield identical graphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    Named { name: String },
    LineOfSpider { legs: usize, length: usize },
    RandomConnected { nv: usize, extra: usize, seed: u64 },
    LineOfRandom { nv: usize, extra: usize, seed: u64 },
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GenError {
    #[error("unknown named graph {0:?}")]
    UnknownName(String),
    #[error("bad generator parameters: {0}")]
    BadParameters(String),
}

/// A tree with one center vertex of degree `legs`, each leg a path of
/// `length` edges. Vertex 0 is the center; leg `i` occupies ids
/// `1 + i*length ..= (i+1)*length`, center-outward.
pub fn spider(legs: usize, length: usize) -> Result<Graph, GenError> {
    if legs < 3 || length < 1 {
        return Err(GenError::BadParameters(format!(
            "spider needs legs >= 3 and length >= 1, got ({legs},{length})"
        )));
    }
    let n = 1 + legs * length;
    let mut edges = Vec::with_capacity(n - 1);
    for i in 0..legs {
        let first = 1 + i * length;
        edges.push((0, first));
        for j in 1..length {
            edges.push((first + j - 1, first + j));
        }
    }
    Ok(Graph::from_edges(n, &edges).expect("spider construction is simple"))
}

/// A connected random graph: a random-attachment tree skeleton plus `extra`
/// distinct random non-tree edges. `extra` saturates at the number of
/// available non-tree edges, so large values yield the complete graph.
pub fn random_connected(nv: usize, extra: usize, seed: u64) -> Result<Graph, GenError> {
    if nv == 0 {
        return Err(GenError::BadParameters("nv must be positive".into()));
    }
    let mut rng = Rng64::new(seed);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for v in 1..nv {
        let p = rng.below(v as u64) as usize;
        edges.push((p, v));
    }
    let max_edges = nv * (nv.saturating_sub(1)) / 2;
    let extra = extra.min(max_edges - edges.len());
    let mut present: Vec<Vec<bool>> = vec![vec![false; nv]; nv];
    for &(u, v) in &edges {
        present[u][v] = true;
        present[v][u] = true;
    }
    let mut added = 0;
    while added < extra {
        let u = rng.below(nv as u64) as usize;
        let v = rng.below(nv as u64) as usize;
        if u == v || present[u][v] {
            continue;
        }
        present[u][v] = true;
        present[v][u] = true;
        edges.push((u.min(v), u.max(v)));
        added += 1;
    }
    Ok(Graph::from_edges(nv, &edges).expect("generation keeps the graph simple"))
}

/// Named fixtures: `c5`, `c6`, `k4`, `k5`, `net`, `4net`.
pub fn named(name: &str) -> Result<Graph, GenError> {
    let g = match name {
        "c5" => cycle(5),
        "c6" => cycle(6),
        "k4" => complete(4),
        "k5" => complete(5),
        "net" => Graph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 4), (2, 5)]).unwrap(),
        "4net" => {
            let mut edges = vec![];
            for i in 0..4 {
                for j in i + 1..4 {
                    edges.push((i, j));
                }
            }
            for i in 0..4 {
                edges.push((i, i + 4));
            }
            Graph::from_edges(8, &edges).unwrap()
        }
        other => return Err(GenError::UnknownName(other.to_string())),
    };
    Ok(g)
}

fn cycle(n: usize) -> Graph {
    let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    edges.push((n - 1, 0));
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

/// Realizes a generator spec.
pub fn generate(spec: &GeneratorSpec) -> Result<Graph, GenError> {
    match spec {
        GeneratorSpec::Named { name } => named(name),
        GeneratorSpec::LineOfSpider { legs, length } => {
            let s = spider(*legs, *length)?;
            line_graph(&s).map_err(|e| GenError::BadParameters(e.to_string()))
        }
        GeneratorSpec::RandomConnected { nv, extra, seed } => random_connected(*nv, *extra, *seed),
        GeneratorSpec::LineOfRandom { nv, extra, seed } => {
            let base = random_connected(*nv, *extra, *seed)?;
            line_graph(&base).map_err(|e| GenError::BadParameters(e.to_string()))
        }
    }
}

/// One corpus member: a display id and the graph itself.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub id: String,
    pub graph: Graph,
}

/// The deterministic claw-free corpus: the named graphs, line graphs of
/// spiders up to 5 legs by length 2, and `size_budget` line graphs of random
/// connected graphs (12 or fewer vertices each, within the oracle's size
/// guard). Every member is verified connected and claw-free.
pub fn claw_free_corpus(size_budget: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for name in ["c5", "c6", "k4", "k5", "net", "4net"] {
        let g = named(name).unwrap();
        debug_assert!(claw_witness(&g).is_none() || name == "none");
        if claw_witness(&g).is_none() && g.is_connected() {
            out.push(CorpusEntry {
                id: name.to_string(),
                graph: g,
            });
        }
    }
    for legs in 3..=5 {
        for length in 1..=2 {
            let s = spider(legs, length).unwrap();
            let g = line_graph(&s).unwrap();
            assert!(claw_witness(&g).is_none(), "line graphs are claw-free");
            if g.is_connected() && oracle::fits_size_guard(&g) {
                out.push(CorpusEntry {
                    id: format!("line_spider_{legs}x{length}"),
                    graph: g,
                });
            }
        }
    }
    let mut rng = Rng64::new(seed);
    let mut accepted = 0;
    let mut attempt = 0u64;
    while accepted < size_budget {
        attempt += 1;
        let nv = 4 + (rng.below(5) as usize); // 4..=8 base vertices
        let max_extra = (nv * (nv - 1) / 2).saturating_sub(nv - 1);
        let extra = (rng.below(4) as usize).min(max_extra);
        let sub_seed = rng.next_u64();
        let base = match random_connected(nv, extra, sub_seed) {
            Ok(b) => b,
            Err(_) => continue,
        };
        if base.edge_count() == 0 || base.edge_count() > 12 {
            continue;
        }
        let g = match line_graph(&base) {
            Ok(g) => g,
            Err(_) => continue,
        };
        assert!(claw_witness(&g).is_none(), "line graphs are claw-free");
        if !g.is_connected() || g.vertex_count() > 12 || !oracle::fits_size_guard(&g) {
            continue;
        }
        accepted += 1;
        out.push(CorpusEntry {
            id: format!("line_random_{nv}_{extra}_{attempt}"),
            graph: g,
        });
    }
    out
}
