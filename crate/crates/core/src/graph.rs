//! Undirected simple graphs with string labels, plus the metrics and
//! certificate checks the rest of the crate consumes.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::GraphError;

/// Dense vertex index into a [`Graph`].
pub type VertexId = usize;
/// Dense edge index into a [`Graph`].
pub type EdgeId = usize;

/// Undirected simple graph. Vertices keep insertion order, so every
/// iteration-dependent result is reproducible.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    adj: Vec<Vec<(VertexId, EdgeId)>>,
    edges: Vec<(VertexId, VertexId)>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.edges == other.edges
    }
}

impl Eq for Graph {}

fn check_label(label: &str) -> Result<(), GraphError> {
    if label.is_empty() || label.chars().any(char::is_whitespace) {
        return Err(GraphError::InvalidLabel(label.to_string()));
    }
    Ok(())
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph on the given labels with no edges.
    pub fn with_vertices<I, S>(labels: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut g = Self::new();
        for l in labels {
            g.add_vertex(l)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> Result<VertexId, GraphError> {
        let label = label.into();
        check_label(&label)?;
        if self.index.contains_key(&label) {
            return Err(GraphError::DuplicateVertex(label));
        }
        let id = self.labels.len();
        self.index.insert(label.clone(), id);
        self.labels.push(label);
        self.adj.push(Vec::new());
        Ok(id)
    }

    /// Adds the edge `a`–`b` by label.
    pub fn add_edge(&mut self, a: &str, b: &str) -> Result<EdgeId, GraphError> {
        let u = self.id(a).ok_or_else(|| GraphError::UnknownVertex(a.to_string()))?;
        let v = self.id(b).ok_or_else(|| GraphError::UnknownVertex(b.to_string()))?;
        self.add_edge_ids(u, v)
    }

    pub fn add_edge_ids(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        let n = self.labels.len();
        if u >= n {
            return Err(GraphError::UnknownVertex(format!("#{u}")));
        }
        if v >= n {
            return Err(GraphError::UnknownVertex(format!("#{v}")));
        }
        if u == v {
            return Err(GraphError::SelfLoop(self.labels[u].clone()));
        }
        if self.edge_between(u, v).is_some() {
            return Err(GraphError::DuplicateEdge(
                self.labels[u].clone(),
                self.labels[v].clone(),
            ));
        }
        let e = self.edges.len();
        self.edges.push((u, v));
        self.adj[u].push((v, e));
        self.adj[v].push((u, e));
        Ok(e)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn id(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    /// `(neighbour, edge)` pairs in insertion order.
    pub fn incident(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v]
    }

    pub fn degree_of(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn degree(&self, label: &str) -> Result<usize, GraphError> {
        self.id(label)
            .map(|v| self.adj[v].len())
            .ok_or_else(|| GraphError::UnknownVertex(label.to_string()))
    }

    pub fn neighbors(&self, label: &str) -> Result<Vec<&str>, GraphError> {
        let v = self
            .id(label)
            .ok_or_else(|| GraphError::UnknownVertex(label.to_string()))?;
        Ok(self.adj[v].iter().map(|&(w, _)| self.label(w)).collect())
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a].iter().find(|&&(w, _)| w == b).map(|&(_, e)| e)
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        match (self.id(a), self.id(b)) {
            (Some(u), Some(v)) => self.edge_between(u, v).is_some(),
            _ => false,
        }
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Copy of the graph without the listed edges. Vertex order is kept.
    pub fn without_edges(&self, removed: &[EdgeId]) -> Graph {
        let mut drop = vec![false; self.edges.len()];
        for &e in removed {
            drop[e] = true;
        }
        let mut g = Graph {
            labels: self.labels.clone(),
            index: self.index.clone(),
            adj: vec![Vec::new(); self.labels.len()],
            edges: Vec::new(),
        };
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if !drop[e] {
                g.add_edge_ids(u, v).expect("subgraph of a simple graph is simple");
            }
        }
        g
    }

    /// BFS hop distances from `src`; `None` for unreachable vertices.
    pub fn bfs_distances(&self, src: VertexId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[src] = Some(0);
        queue.push_back(src);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &(w, _) in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.bfs_distances(0).iter().all(Option::is_some)
    }

    /// Maximum eccentricity, or `None` when the graph is disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for s in 0..self.vertex_count() {
            for d in self.bfs_distances(s) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    /// Lowercase hex SHA-256 of the order-insensitive canonical form.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(crate::io::canonical_form(self).as_bytes());
        hex::encode(h.finalize())
    }

    pub fn metrics(&self) -> GraphMetrics {
        self.metrics_with_cap(DEFAULT_CONNECTIVITY_CAP)
    }

    pub fn metrics_with_cap(&self, connectivity_cap: usize) -> GraphMetrics {
        let connectivity = if self.vertex_count() <= connectivity_cap {
            Connectivity {
                value: vertex_connectivity(self),
                exact: true,
            }
        } else {
            Connectivity {
                value: connectivity_lower_bound(self),
                exact: false,
            }
        };
        GraphMetrics {
            vertices: self.vertex_count(),
            edges: self.edge_count(),
            min_degree: self.min_degree(),
            max_degree: self.max_degree(),
            diameter: self.diameter().map_or(Diameter::Infinite, Diameter::Finite),
            connectivity,
        }
    }
}

/// Graphs up to this many vertices get an exact vertex connectivity.
pub const DEFAULT_CONNECTIVITY_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Diameter {
    Finite(usize),
    Infinite,
}

impl Diameter {
    pub fn finite(self) -> Option<usize> {
        match self {
            Diameter::Finite(d) => Some(d),
            Diameter::Infinite => None,
        }
    }
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connectivity {
    pub value: usize,
    /// `false` when `value` is only a lower bound.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMetrics {
    pub vertices: usize,
    pub edges: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    pub diameter: Diameter,
    pub connectivity: Connectivity,
}

/// Upper bound on the number of pairwise edge-disjoint Hamiltonian cycles:
/// every cycle consumes two edges at each vertex.
pub fn max_edge_disjoint_ham_bound(graph: &Graph) -> usize {
    graph.min_degree() / 2
}

// Unit-capacity max-flow on the split graph: v_in = 2v, v_out = 2v + 1.
fn local_vertex_connectivity(g: &Graph, s: VertexId, t: VertexId) -> usize {
    let n = g.vertex_count();
    let mut cap: HashMap<(usize, usize), i32> = HashMap::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    let mut add = |cap: &mut HashMap<(usize, usize), i32>, a: usize, b: usize, c: i32| {
        *cap.entry((a, b)).or_insert(0) += c;
        cap.entry((b, a)).or_insert(0);
        adj[a].push(b);
        adj[b].push(a);
    };
    let inf = n as i32 + 1;
    for v in 0..n {
        let c = if v == s || v == t { inf } else { 1 };
        add(&mut cap, 2 * v, 2 * v + 1, c);
    }
    for &(u, v) in g.edges() {
        add(&mut cap, 2 * u + 1, 2 * v, inf);
        add(&mut cap, 2 * v + 1, 2 * u, inf);
    }
    let (src, sink) = (2 * s + 1, 2 * t);
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; 2 * n];
        prev[src] = src;
        let mut queue = VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            if x == sink {
                break;
            }
            for &y in &adj[x] {
                if prev[y] == usize::MAX && cap[&(x, y)] > 0 {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if prev[sink] == usize::MAX {
            return flow;
        }
        let mut y = sink;
        while y != src {
            let x = prev[y];
            *cap.get_mut(&(x, y)).unwrap() -= 1;
            *cap.get_mut(&(y, x)).unwrap() += 1;
            y = x;
        }
        flow += 1;
    }
}

/// Exact vertex connectivity. Complete graphs K_n give n - 1.
pub fn vertex_connectivity(g: &Graph) -> usize {
    let n = g.vertex_count();
    if n <= 1 {
        return 0;
    }
    if !g.is_connected() {
        return 0;
    }
    let mut k = n - 1;
    // A minimum separator misses at least one of the first k + 1 vertices.
    let mut i = 0;
    while i <= k && i < n {
        for j in (i + 1)..n {
            if g.edge_between(i, j).is_none() {
                k = k.min(local_vertex_connectivity(g, i, j));
            }
        }
        i += 1;
    }
    k
}

fn connectivity_lower_bound(g: &Graph) -> usize {
    if g.vertex_count() <= 1 || !g.is_connected() {
        return 0;
    }
    if g.vertex_count() >= 3 && articulation_points(g).is_empty() {
        2
    } else {
        1
    }
}

/// Cut vertices of a graph (iterative Hopcroft–Tarjan).
pub fn articulation_points(g: &Graph) -> Vec<VertexId> {
    let n = g.vertex_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut is_cut = vec![false; n];
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        let mut root_children = 0;
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, parent edge, next adjacency slot)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(&mut (v, pe, ref mut slot)) = stack.last_mut() {
            if let Some(&(w, e)) = g.incident(v).get(*slot) {
                *slot += 1;
                if e == pe {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, e, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if p != root && low[v] >= disc[p] {
                        is_cut[p] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            is_cut[root] = true;
        }
    }
    (0..n).filter(|&v| is_cut[v]).collect()
}

/// Why a vertex sequence fails to be a Hamiltonian cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum CycleDefect {
    TooFewVertices { vertices: usize },
    WrongLength { expected: usize, found: usize },
    UnknownVertex { label: String },
    Repeated { label: String },
    NotAdjacent { from: String, to: String },
}

impl fmt::Display for CycleDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleDefect::TooFewVertices { vertices } => {
                write!(f, "a Hamiltonian cycle needs at least 3 vertices, graph has {vertices}")
            }
            CycleDefect::WrongLength { expected, found } => {
                write!(f, "sequence has {found} entries, graph has {expected} vertices")
            }
            CycleDefect::UnknownVertex { label } => write!(f, "unknown vertex {label}"),
            CycleDefect::Repeated { label } => write!(f, "vertex {label} repeated"),
            CycleDefect::NotAdjacent { from, to } => write!(f, "{from} and {to} are not adjacent"),
        }
    }
}

/// Checks `order` against the Hamiltonian cycle invariants, reporting the
/// first defect found.
pub fn check_hamiltonian_cycle<S: AsRef<str>>(
    graph: &Graph,
    order: &[S],
) -> Result<Vec<VertexId>, CycleDefect> {
    let n = graph.vertex_count();
    if n < 3 {
        return Err(CycleDefect::TooFewVertices { vertices: n });
    }
    if order.len() != n {
        return Err(CycleDefect::WrongLength {
            expected: n,
            found: order.len(),
        });
    }
    let mut seen = vec![false; n];
    let mut ids = Vec::with_capacity(n);
    for l in order {
        let l = l.as_ref();
        let v = graph.id(l).ok_or_else(|| CycleDefect::UnknownVertex {
            label: l.to_string(),
        })?;
        if std::mem::replace(&mut seen[v], true) {
            return Err(CycleDefect::Repeated {
                label: l.to_string(),
            });
        }
        ids.push(v);
    }
    for k in 0..n {
        let (a, b) = (ids[k], ids[(k + 1) % n]);
        if graph.edge_between(a, b).is_none() {
            return Err(CycleDefect::NotAdjacent {
                from: graph.label(a).to_string(),
                to: graph.label(b).to_string(),
            });
        }
    }
    Ok(ids)
}

pub fn is_hamiltonian_cycle<S: AsRef<str>>(graph: &Graph, order: &[S]) -> bool {
    check_hamiltonian_cycle(graph, order).is_ok()
}

/// A vertex sequence that has been checked to be a Hamiltonian cycle of
/// some graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HamCycle {
    order: Vec<String>,
}

impl HamCycle {
    pub fn verified<S: AsRef<str>>(graph: &Graph, order: &[S]) -> Result<Self, CycleDefect> {
        check_hamiltonian_cycle(graph, order)?;
        Ok(Self {
            order: order.iter().map(|s| s.as_ref().to_string()).collect(),
        })
    }

    pub(crate) fn from_ids(graph: &Graph, ids: &[VertexId]) -> Result<Self, CycleDefect> {
        let order: Vec<&str> = ids.iter().map(|&v| graph.label(v)).collect();
        Self::verified(graph, &order)
    }

    pub fn order(&self) -> &[String] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.order.iter().position(|l| l == label)
    }

    /// Edge ids of the cycle in `graph` (which must be the host graph).
    pub fn edge_ids(&self, graph: &Graph) -> Vec<EdgeId> {
        let n = self.order.len();
        (0..n)
            .map(|k| {
                let a = graph.id(&self.order[k]).expect("cycle vertex in host graph");
                let b = graph.id(&self.order[(k + 1) % n]).expect("cycle vertex in host graph");
                graph.edge_between(a, b).expect("cycle edge in host graph")
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{gen_complete, gen_cycle, gen_path};

    #[test]
    fn cycle_degrees() {
        let c5 = gen_cycle(5).unwrap();
        for l in c5.labels() {
            assert_eq!(c5.degree(l).unwrap(), 2);
        }
        let handshake: usize = (0..5).map(|v| c5.degree_of(v)).sum();
        assert_eq!(handshake, 2 * c5.edge_count());
    }

    #[test]
    fn path_middle_neighbours() {
        let p3 = gen_path(3).unwrap();
        let mut nb = p3.neighbors("2").unwrap();
        nb.sort();
        assert_eq!(nb, vec!["1", "3"]);
    }

    #[test]
    fn insertion_errors() {
        let mut g = Graph::with_vertices(["a", "b"]).unwrap();
        assert_eq!(g.add_edge("a", "a"), Err(GraphError::SelfLoop("a".into())));
        g.add_edge("a", "b").unwrap();
        assert!(matches!(g.add_edge("b", "a"), Err(GraphError::DuplicateEdge(..))));
        assert_eq!(g.add_edge("a", "z"), Err(GraphError::UnknownVertex("z".into())));
        assert!(matches!(g.add_vertex("a"), Err(GraphError::DuplicateVertex(_))));
        assert!(matches!(g.add_vertex("x y"), Err(GraphError::InvalidLabel(_))));
        assert!(matches!(g.add_vertex(""), Err(GraphError::InvalidLabel(_))));
    }

    #[test]
    fn triangle_metrics() {
        let m = gen_cycle(3).unwrap().metrics();
        assert_eq!((m.min_degree, m.max_degree), (2, 2));
        assert_eq!(m.diameter, Diameter::Finite(1));
        assert_eq!(m.connectivity, Connectivity { value: 2, exact: true });
    }

    #[test]
    fn disconnected_diameter_is_infinite() {
        let g = Graph::with_vertices(["a", "b"]).unwrap();
        let m = g.metrics();
        assert_eq!(m.diameter, Diameter::Infinite);
        assert_eq!(m.connectivity.value, 0);
    }

    #[test]
    fn connectivity_values() {
        assert_eq!(vertex_connectivity(&gen_complete(5).unwrap()), 4);
        assert_eq!(vertex_connectivity(&gen_path(4).unwrap()), 1);
        assert_eq!(vertex_connectivity(&gen_cycle(6).unwrap()), 2);
        let bowtie = crate::topology::gen_bowtie(crate::topology::BowtieParams::new(3, 3).unwrap());
        assert_eq!(vertex_connectivity(&bowtie), 1);
        assert_eq!(articulation_points(&bowtie), vec![2]);
    }

    #[test]
    fn connectivity_above_cap_is_flagged() {
        let m = gen_cycle(10).unwrap().metrics_with_cap(5);
        assert_eq!(m.connectivity, Connectivity { value: 2, exact: false });
        let m = gen_path(10).unwrap().metrics_with_cap(5);
        assert_eq!(m.connectivity, Connectivity { value: 1, exact: false });
    }

    #[test]
    fn edge_disjoint_bound() {
        assert_eq!(max_edge_disjoint_ham_bound(&gen_complete(5).unwrap()), 2);
        assert_eq!(max_edge_disjoint_ham_bound(&gen_path(2).unwrap()), 0);
    }

    #[test]
    fn ham_cycle_checks() {
        let c4 = gen_cycle(4).unwrap();
        assert!(is_hamiltonian_cycle(&c4, &["1", "2", "3", "4"]));
        assert_eq!(
            check_hamiltonian_cycle(&c4, &["1", "3", "2", "4"]),
            Err(CycleDefect::NotAdjacent {
                from: "1".into(),
                to: "3".into()
            })
        );
        assert!(matches!(
            check_hamiltonian_cycle(&c4, &["1", "2", "3"]),
            Err(CycleDefect::WrongLength { .. })
        ));
        assert!(matches!(
            check_hamiltonian_cycle(&c4, &["1", "2", "1", "4"]),
            Err(CycleDefect::Repeated { .. })
        ));
        assert!(matches!(
            check_hamiltonian_cycle(&c4, &["1", "2", "3", "9"]),
            Err(CycleDefect::UnknownVertex { .. })
        ));
        let p2 = gen_path(2).unwrap();
        assert!(matches!(
            check_hamiltonian_cycle(&p2, &["1", "2"]),
            Err(CycleDefect::TooFewVertices { .. })
        ));
    }

    #[test]
    fn without_edges_keeps_vertices() {
        let c4 = gen_cycle(4).unwrap();
        let g = c4.without_edges(&[0, 2]);
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 2);
        assert!(!g.is_connected());
    }
}
