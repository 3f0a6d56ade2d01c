//! Graph generators: bowtie graphs BF(m,n), wrapped butterflies BF(n),
//! small fixtures, and the OTIS (swapped network) composition.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GraphError, TopologyError};
use crate::graph::Graph;

/// Parameters of the bowtie graph BF(m,n): a left cycle of length `m` and a
/// right cycle of length `n` sharing the cut vertex `c = m`.
///
/// Construction canonicalizes the pair: when exactly one side is odd it
/// becomes the left cycle, otherwise the smaller side does. BF(m,n) and
/// BF(n,m) are isomorphic, so nothing is lost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BowtieParams {
    m: usize,
    n: usize,
}

impl BowtieParams {
    pub fn new(m: usize, n: usize) -> Result<Self, TopologyError> {
        for (what, got) in [("left cycle length m", m), ("right cycle length n", n)] {
            if got < 3 {
                return Err(TopologyError::OutOfRange { what, min: 3, got });
            }
        }
        let swap = match (m % 2 == 1, n % 2 == 1) {
            (false, true) => true,
            (true, false) => false,
            _ => m > n,
        };
        Ok(if swap { Self { m: n, n: m } } else { Self { m, n } })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Label of the cut vertex.
    pub fn c(&self) -> usize {
        self.m
    }

    /// Label of the last vertex, equal to the vertex count.
    pub fn i(&self) -> usize {
        self.m + self.n - 1
    }
}

impl fmt::Display for BowtieParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BF({},{})", self.m, self.n)
    }
}

fn labelled(count: usize) -> Graph {
    Graph::with_vertices((1..=count).map(|v| v.to_string())).expect("decimal labels are valid")
}

fn link(g: &mut Graph, a: usize, b: usize) {
    g.add_edge_ids(a - 1, b - 1).expect("generator emits a simple graph");
}

/// BF(m,n) on labels `1..=i`: left cycle 1–2–…–c–1, right cycle
/// c–(c+1)–…–i–c.
pub fn gen_bowtie(params: BowtieParams) -> Graph {
    let (c, i) = (params.c(), params.i());
    let mut g = labelled(i);
    for v in 1..c {
        link(&mut g, v, v + 1);
    }
    link(&mut g, c, 1);
    for v in c..i {
        link(&mut g, v, v + 1);
    }
    link(&mut g, i, c);
    g
}

pub fn gen_cycle(k: usize) -> Result<Graph, TopologyError> {
    if k < 3 {
        return Err(TopologyError::OutOfRange {
            what: "cycle length",
            min: 3,
            got: k,
        });
    }
    let mut g = gen_path(k)?;
    link(&mut g, k, 1);
    Ok(g)
}

pub fn gen_path(k: usize) -> Result<Graph, TopologyError> {
    if k < 1 {
        return Err(TopologyError::OutOfRange {
            what: "path length",
            min: 1,
            got: k,
        });
    }
    let mut g = labelled(k);
    for v in 1..k {
        link(&mut g, v, v + 1);
    }
    Ok(g)
}

pub fn gen_complete(k: usize) -> Result<Graph, TopologyError> {
    if k < 3 {
        return Err(TopologyError::OutOfRange {
            what: "complete graph order",
            min: 3,
            got: k,
        });
    }
    let mut g = labelled(k);
    for a in 1..=k {
        for b in (a + 1)..=k {
            link(&mut g, a, b);
        }
    }
    Ok(g)
}

/// Vertex `(level; x_{n-1} … x_0)` of the wrapped butterfly of dimension `dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ButterflyVertex {
    pub level: usize,
    /// Bit `j` holds `x_j`.
    pub word: u64,
}

impl ButterflyVertex {
    /// Decimal label `level * 2^dim + word + 1`.
    pub fn label(&self, dim: usize) -> String {
        ((self.level << dim) + self.word as usize + 1).to_string()
    }

    pub fn from_label(label: &str, dim: usize) -> Option<Self> {
        let id = label.parse::<usize>().ok()?.checked_sub(1)?;
        let level = id >> dim;
        (level < dim).then(|| Self {
            level,
            word: (id & ((1 << dim) - 1)) as u64,
        })
    }

    /// Bit string `x_{n-1} … x_0`.
    pub fn word_string(&self, dim: usize) -> String {
        (0..dim)
            .rev()
            .map(|j| if self.word >> j & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

/// Wrapped butterfly BF(dim): `(a, x)` is joined to `(a+1 mod dim, x)` and to
/// `(a+1 mod dim, x with bit a+1 mod dim flipped)`. 4-regular on
/// `dim * 2^dim` vertices for `dim >= 3`.
pub fn gen_butterfly(dim: usize) -> Result<Graph, TopologyError> {
    if dim < 3 {
        return Err(TopologyError::OutOfRange {
            what: "butterfly dimension",
            min: 3,
            got: dim,
        });
    }
    if dim > 16 {
        return Err(TopologyError::TooLarge(dim));
    }
    let words = 1u64 << dim;
    let mut g = Graph::new();
    for level in 0..dim {
        for word in 0..words {
            g.add_vertex(ButterflyVertex { level, word }.label(dim))
                .expect("butterfly labels are distinct");
        }
    }
    let id = |v: ButterflyVertex| (v.level << dim) + v.word as usize;
    for level in 0..dim {
        let next = (level + 1) % dim;
        for word in 0..words {
            let from = ButterflyVertex { level, word };
            for to_word in [word, word ^ (1 << next)] {
                let to = ButterflyVertex { level: next, word: to_word };
                g.add_edge_ids(id(from), id(to)).expect("butterfly edges are distinct for dim >= 3");
            }
        }
    }
    Ok(g)
}

/// Address `<g,u>`: processor `u` inside cluster `g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OtisVertex {
    pub cluster: String,
    pub processor: String,
}

impl OtisVertex {
    pub fn new(cluster: impl Into<String>, processor: impl Into<String>) -> Self {
        Self {
            cluster: cluster.into(),
            processor: processor.into(),
        }
    }

    pub fn label(&self) -> String {
        format!("{}:{}", self.cluster, self.processor)
    }

    pub fn parse(label: &str) -> Option<Self> {
        let (g, u) = label.split_once(':')?;
        (!g.is_empty() && !u.is_empty()).then(|| Self::new(g, u))
    }

    pub fn is_diagonal(&self) -> bool {
        self.cluster == self.processor
    }
}

impl fmt::Display for OtisVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{}>", self.cluster, self.processor)
    }
}

/// Label of `<g,u>` for integer-labelled bases.
pub fn otis_label(g: usize, u: usize) -> String {
    format!("{g}:{u}")
}

/// OTIS(base): one copy of `base` per base vertex `g` (cluster `g`), plus the
/// transpose edges `<g,u>`–`<u,g>` for `g != u`.
///
/// Vertices are ordered cluster by cluster; edges list every cluster's
/// intracluster edges before the transpose edges.
pub fn otis(base: &Graph) -> Result<Graph, GraphError> {
    let n = base.vertex_count();
    let mut g = Graph::new();
    for cluster in base.labels() {
        for proc in base.labels() {
            g.add_vertex(OtisVertex::new(cluster.as_str(), proc.as_str()).label())?;
        }
    }
    for cluster in 0..n {
        for &(a, b) in base.edges() {
            g.add_edge_ids(cluster * n + a, cluster * n + b)?;
        }
    }
    for cluster in 0..n {
        for proc in (cluster + 1)..n {
            g.add_edge_ids(cluster * n + proc, proc * n + cluster)?;
        }
    }
    Ok(g)
}

/// OTIS of the canonical bowtie BF(m,n).
pub fn bowtie_otis(params: BowtieParams) -> Graph {
    otis(&gen_bowtie(params)).expect("bowtie base is simple")
}
