//! Forced-edge propagation.
//!
//! Every edge is `Undecided`, `Forced` (must lie on the cycle) or `Deleted`
//! (cannot). Three rules run to a fixpoint:
//!
//! * a vertex with two forced edges deletes its remaining undecided edges;
//! * a vertex with exactly two live (forced or undecided) edges forces both;
//! * an undecided edge joining the two ends of a forced path shorter than
//!   `|V|` is deleted, since using it would close a short cycle.
//!
//! Forced edges always form vertex-disjoint paths (a cycle is either the
//! Hamiltonian cycle or a contradiction), so each path end records the
//! opposite end and the path length. That makes the subcycle rule O(Δ) per
//! forced edge.

use std::collections::VecDeque;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, Graph, HamCycle, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeState {
    Undecided,
    Forced,
    Deleted,
}

/// A propagation dead end: no Hamiltonian cycle extends the current state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Contradiction {
    /// Fewer than two live edges remain at the vertex.
    VertexUnderfilled(VertexId),
    /// More than two forced edges meet at the vertex.
    VertexOverfilled(VertexId),
    /// Forced edges close (or can only be completed by closing) a cycle
    /// through these vertices that misses part of the graph.
    ShortSubcycle(Vec<VertexId>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContradictionKind {
    VertexUnderfilled,
    VertexOverfilled,
    ShortSubcycle,
}

impl fmt::Display for ContradictionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContradictionKind::VertexUnderfilled => "vertex_underfilled",
            ContradictionKind::VertexOverfilled => "vertex_overfilled",
            ContradictionKind::ShortSubcycle => "short_subcycle",
        })
    }
}

impl Contradiction {
    pub fn kind(&self) -> ContradictionKind {
        match self {
            Contradiction::VertexUnderfilled(_) => ContradictionKind::VertexUnderfilled,
            Contradiction::VertexOverfilled(_) => ContradictionKind::VertexOverfilled,
            Contradiction::ShortSubcycle(_) => ContradictionKind::ShortSubcycle,
        }
    }

    /// Witness vertices as labels: one vertex, or the offending cycle.
    pub fn witness(&self, graph: &Graph) -> Vec<String> {
        match self {
            Contradiction::VertexUnderfilled(v) | Contradiction::VertexOverfilled(v) => {
                vec![graph.label(*v).to_string()]
            }
            Contradiction::ShortSubcycle(c) => c.iter().map(|&v| graph.label(v).to_string()).collect(),
        }
    }

    pub fn report(&self, graph: &Graph) -> ContradictionReport {
        ContradictionReport {
            kind: self.kind(),
            witness: self.witness(graph),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContradictionReport {
    pub kind: ContradictionKind,
    pub witness: Vec<String>,
}

/// Tri-state edge assignment with per-vertex forced/live counts.
#[derive(Debug, Clone)]
pub struct EdgeAssignment {
    state: Vec<EdgeState>,
    forced: Vec<u32>,
    live: Vec<u32>,
    // Valid at path ends only.
    other_end: Vec<VertexId>,
    path_len: Vec<u32>,
    undecided: usize,
    closed: bool,
    queue: VecDeque<VertexId>,
    queued: Vec<bool>,
    steps: u64,
}

/// Order in which pending vertices are examined. The fixpoint does not
/// depend on it; `Shuffled` exists to check that.
pub enum Order<'r, R: Rng> {
    Fifo,
    Shuffled(&'r mut R),
}

impl EdgeAssignment {
    /// All edges undecided, every vertex pending.
    pub fn new(graph: &Graph) -> Self {
        let n = graph.vertex_count();
        Self {
            state: vec![EdgeState::Undecided; graph.edge_count()],
            forced: vec![0; n],
            live: (0..n).map(|v| graph.degree_of(v) as u32).collect(),
            other_end: (0..n).collect(),
            path_len: vec![1; n],
            undecided: graph.edge_count(),
            closed: false,
            queue: (0..n).collect(),
            queued: vec![true; n],
            steps: 0,
        }
    }

    /// Starts from explicit forced and deleted edges. Fails if the seed is
    /// already contradictory (or names an edge in both lists).
    pub fn seeded(graph: &Graph, forced: &[EdgeId], deleted: &[EdgeId]) -> Result<Self, Contradiction> {
        let mut a = Self::new(graph);
        for &e in deleted {
            if a.state[e] == EdgeState::Undecided {
                a.delete(graph, e);
            }
        }
        for &e in forced {
            match a.state[e] {
                EdgeState::Undecided => a.force(graph, e)?,
                EdgeState::Forced => {}
                EdgeState::Deleted => {
                    // Either listed as deleted too, or removed by the
                    // subcycle rule while earlier seed edges were forced.
                    let (u, v) = graph.endpoints(e);
                    return Err(if a.forced[u] >= 1 && a.forced[v] >= 1 && a.other_end[u] == v {
                        Contradiction::ShortSubcycle(a.path_from(graph, u))
                    } else {
                        Contradiction::VertexUnderfilled(u)
                    });
                }
            }
        }
        Ok(a)
    }

    pub fn state(&self, e: EdgeId) -> EdgeState {
        self.state[e]
    }

    pub fn states(&self) -> &[EdgeState] {
        &self.state
    }

    pub fn forced_count(&self, v: VertexId) -> usize {
        self.forced[v] as usize
    }

    pub fn live_count(&self, v: VertexId) -> usize {
        self.live[v] as usize
    }

    pub fn undecided_count(&self) -> usize {
        self.undecided
    }

    /// Elementary operations performed so far (vertex examinations plus
    /// edge scans and state changes).
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// True once forced edges close a cycle through every vertex.
    pub fn is_complete(&self) -> bool {
        self.closed
    }

    pub fn forced_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.state
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == EdgeState::Forced)
            .map(|(e, _)| e)
    }

    pub fn deleted_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.state
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == EdgeState::Deleted)
            .map(|(e, _)| e)
    }

    fn enqueue(&mut self, v: VertexId) {
        if !self.queued[v] {
            self.queued[v] = true;
            self.queue.push_back(v);
        }
    }

    /// Marks an undecided edge deleted. Count checks happen when the
    /// endpoints are examined.
    pub(crate) fn delete(&mut self, graph: &Graph, e: EdgeId) {
        debug_assert_eq!(self.state[e], EdgeState::Undecided);
        let (u, v) = graph.endpoints(e);
        self.state[e] = EdgeState::Deleted;
        self.live[u] -= 1;
        self.live[v] -= 1;
        self.undecided -= 1;
        self.steps += 1;
        self.enqueue(u);
        self.enqueue(v);
    }

    /// Marks an undecided edge forced, maintaining path ends and applying
    /// the subcycle rule to the merged path.
    pub(crate) fn force(&mut self, graph: &Graph, e: EdgeId) -> Result<(), Contradiction> {
        debug_assert_eq!(self.state[e], EdgeState::Undecided);
        let (u, v) = graph.endpoints(e);
        self.state[e] = EdgeState::Forced;
        self.undecided -= 1;
        self.steps += 1;
        self.enqueue(u);
        self.enqueue(v);
        for w in [u, v] {
            self.forced[w] += 1;
            if self.forced[w] > 2 {
                return Err(Contradiction::VertexOverfilled(w));
            }
        }
        let n = graph.vertex_count();
        if self.other_end[u] == v {
            if self.path_len[u] as usize == n {
                self.closed = true;
                return Ok(());
            }
            return Err(Contradiction::ShortSubcycle(self.path_from(graph, u)));
        }
        let (a, b) = (self.other_end[u], self.other_end[v]);
        let len = self.path_len[u] + self.path_len[v];
        self.other_end[a] = b;
        self.other_end[b] = a;
        self.path_len[a] = len;
        self.path_len[b] = len;
        if (len as usize) < n {
            self.steps += graph.degree_of(a).min(graph.degree_of(b)) as u64;
            if let Some(closing) = graph.edge_between(a, b) {
                if self.state[closing] == EdgeState::Undecided {
                    self.delete(graph, closing);
                    if self.live[a] < 2 || self.live[b] < 2 {
                        return Err(Contradiction::ShortSubcycle(self.path_from(graph, a)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Vertices of the forced path (or cycle) starting at end `start`.
    fn path_from(&self, graph: &Graph, start: VertexId) -> Vec<VertexId> {
        let mut path = vec![start];
        let (mut prev, mut cur) = (usize::MAX, start);
        loop {
            let next = graph
                .incident(cur)
                .iter()
                .find(|&&(w, e)| self.state[e] == EdgeState::Forced && w != prev)
                .map(|&(w, _)| w);
            match next {
                Some(w) if w != start => {
                    path.push(w);
                    prev = cur;
                    cur = w;
                }
                _ => return path,
            }
        }
    }

    /// Runs the three rules to a fixpoint in FIFO order.
    pub fn propagate(&mut self, graph: &Graph) -> Result<(), Contradiction> {
        self.propagate_in::<rand::rngs::StdRng>(graph, Order::Fifo)
    }

    pub fn propagate_in<R: Rng>(&mut self, graph: &Graph, mut order: Order<'_, R>) -> Result<(), Contradiction> {
        loop {
            let next = match &mut order {
                Order::Fifo => self.queue.pop_front(),
                Order::Shuffled(rng) => {
                    if self.queue.is_empty() {
                        None
                    } else {
                        let k = rng.gen_range(0..self.queue.len());
                        self.queue.swap_remove_back(k)
                    }
                }
            };
            let Some(v) = next else { return Ok(()) };
            self.queued[v] = false;
            self.steps += 1;
            if self.live[v] < 2 {
                return Err(Contradiction::VertexUnderfilled(v));
            }
            let (forced, live) = (self.forced[v], self.live[v]);
            if forced == 2 && live > 2 {
                self.steps += graph.degree_of(v) as u64;
                for &(_, e) in graph.incident(v) {
                    if self.state[e] == EdgeState::Undecided {
                        self.delete(graph, e);
                    }
                }
            } else if live == 2 && forced < 2 {
                self.steps += graph.degree_of(v) as u64;
                for &(_, e) in graph.incident(v) {
                    if self.state[e] == EdgeState::Undecided {
                        self.force(graph, e)?;
                    }
                }
            }
        }
    }

    /// The Hamiltonian cycle spelled out by the forced edges, once complete.
    pub fn cycle(&self, graph: &Graph) -> Option<HamCycle> {
        if !self.closed {
            return None;
        }
        HamCycle::from_ids(graph, &self.path_from(graph, 0)).ok()
    }

    /// First undecided edge in edge order.
    pub fn first_undecided(&self) -> Option<EdgeId> {
        self.state.iter().position(|&s| s == EdgeState::Undecided)
    }
}

/// Seeds an assignment and propagates it.
pub fn propagate(graph: &Graph, forced: &[EdgeId], deleted: &[EdgeId]) -> Result<EdgeAssignment, Contradiction> {
    let mut a = EdgeAssignment::seeded(graph, forced, deleted)?;
    a.propagate(graph)?;
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{gen_complete, gen_cycle, gen_path};
    use rand::SeedableRng;

    #[test]
    fn path_forces_both_edges() {
        let g = gen_path(3).unwrap();
        let mut a = EdgeAssignment::new(&g);
        // End vertices have one live edge, so the run reports underfill;
        // the middle vertex still forces both edges first.
        a.queue = VecDeque::from([1]);
        a.queued = vec![false, true, false];
        let r = a.propagate(&g);
        assert_eq!(a.state(0), EdgeState::Forced);
        assert_eq!(a.state(1), EdgeState::Forced);
        assert_eq!(r, Err(Contradiction::VertexUnderfilled(0)));
    }

    #[test]
    fn cycle_closes() {
        let g = gen_cycle(5).unwrap();
        let a = propagate(&g, &[], &[]).unwrap();
        assert!(a.is_complete());
        assert_eq!(a.undecided_count(), 0);
        assert_eq!(a.cycle(&g).unwrap().len(), 5);
    }

    #[test]
    fn saturated_vertex_deletes_the_rest() {
        let g = gen_complete(4).unwrap();
        // 1-2 and 1-3 forced saturate vertex 1.
        let e12 = g.edge_between(0, 1).unwrap();
        let e13 = g.edge_between(0, 2).unwrap();
        let e14 = g.edge_between(0, 3).unwrap();
        let a = propagate(&g, &[e12, e13], &[]).unwrap();
        assert_eq!(a.state(e14), EdgeState::Deleted);
        assert!(a.is_complete());
        let c = a.cycle(&g).unwrap();
        assert!(crate::graph::is_hamiltonian_cycle(&g, c.order()));
    }

    #[test]
    fn subcycle_rule_deletes_closing_edge() {
        let g = gen_complete(5).unwrap();
        let e12 = g.edge_between(0, 1).unwrap();
        let e23 = g.edge_between(1, 2).unwrap();
        let e13 = g.edge_between(0, 2).unwrap();
        let a = EdgeAssignment::seeded(&g, &[e12, e23], &[]).unwrap();
        assert_eq!(a.state(e13), EdgeState::Deleted);
    }

    #[test]
    fn overfilled_seed() {
        let g = gen_complete(4).unwrap();
        let es: Vec<_> = g.incident(0).iter().map(|&(_, e)| e).collect();
        let err = EdgeAssignment::seeded(&g, &es, &[]).unwrap_err();
        assert_eq!(err, Contradiction::VertexOverfilled(0));
    }

    #[test]
    fn forced_triangle_in_k4_is_short() {
        let g = gen_complete(4).unwrap();
        let e12 = g.edge_between(0, 1).unwrap();
        let e23 = g.edge_between(1, 2).unwrap();
        let e13 = g.edge_between(0, 2).unwrap();
        let err = EdgeAssignment::seeded(&g, &[e12, e23, e13], &[]).unwrap_err();
        assert_eq!(err.kind(), ContradictionKind::ShortSubcycle);
        assert_eq!(err.witness(&g).len(), 3);
    }

    #[test]
    fn underfilled_after_deletion() {
        let g = gen_cycle(4).unwrap();
        let err = propagate(&g, &[], &[0]).unwrap_err();
        assert_eq!(err.kind(), ContradictionKind::VertexUnderfilled);
    }

    #[test]
    fn shuffled_order_reaches_same_fixpoint() {
        let g = crate::topology::bowtie_otis(crate::topology::BowtieParams::new(3, 5).unwrap());
        let mut base = EdgeAssignment::new(&g);
        base.propagate(&g).unwrap();
        for seed in 0..5 {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let mut a = EdgeAssignment::new(&g);
            a.propagate_in(&g, Order::Shuffled(&mut rng)).unwrap();
            assert_eq!(a.states(), base.states());
        }
    }
}
