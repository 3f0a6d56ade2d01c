//! Complete branch-and-propagate Hamiltonicity search.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::propagate::{Contradiction, EdgeAssignment, EdgeState};
use crate::graph::{EdgeId, Graph, HamCycle};

pub const DEFAULT_MAX_NODES: u64 = 10_000_000;
pub const DEFAULT_MAX_SECS: u64 = 600;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_nodes: DEFAULT_MAX_NODES,
            max_time: Duration::from_secs(DEFAULT_MAX_SECS),
        }
    }
}

impl Budget {
    pub fn nodes(max_nodes: u64) -> Self {
        Self {
            max_nodes,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Search-tree nodes visited (each one a propagation to fixpoint).
    pub nodes: u64,
    pub max_depth: usize,
    /// Propagation steps spent below the root, failed branches included.
    #[serde(default)]
    pub steps: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitHit {
    Nodes,
    Time,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HamVerdict {
    Hamiltonian { cycle: HamCycle, stats: SearchStats },
    /// The search tree was exhausted: no Hamiltonian cycle extends the seed.
    NonHamiltonian { stats: SearchStats },
    Inconclusive { stats: SearchStats, limit: LimitHit },
}

impl HamVerdict {
    pub fn stats(&self) -> SearchStats {
        match self {
            HamVerdict::Hamiltonian { stats, .. }
            | HamVerdict::NonHamiltonian { stats }
            | HamVerdict::Inconclusive { stats, .. } => *stats,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            HamVerdict::Hamiltonian { .. } => "hamiltonian",
            HamVerdict::NonHamiltonian { .. } => "non_hamiltonian",
            HamVerdict::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn is_hamiltonian(&self) -> bool {
        matches!(self, HamVerdict::Hamiltonian { .. })
    }

    pub fn is_non_hamiltonian(&self) -> bool {
        matches!(self, HamVerdict::NonHamiltonian { .. })
    }

    pub fn cycle(&self) -> Option<&HamCycle> {
        match self {
            HamVerdict::Hamiltonian { cycle, .. } => Some(cycle),
            _ => None,
        }
    }
}

/// Search options beyond the budget.
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    pub budget: Budget,
    /// Explore the two root branches on separate threads.
    pub parallel_root: bool,
}

enum Outcome {
    Found(EdgeAssignment),
    Exhausted,
    Limit(LimitHit),
}

struct Shared {
    nodes: AtomicU64,
    max_depth: AtomicU64,
    steps: AtomicU64,
    deadline: Instant,
    max_nodes: u64,
}

impl Shared {
    fn tick(&self, depth: usize) -> Result<(), LimitHit> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        self.max_depth.fetch_max(depth as u64, Ordering::Relaxed);
        if n > self.max_nodes {
            return Err(LimitHit::Nodes);
        }
        if n.is_multiple_of(1024) && Instant::now() >= self.deadline {
            return Err(LimitHit::Time);
        }
        Ok(())
    }

    fn stats(&self) -> SearchStats {
        SearchStats {
            nodes: self.nodes.load(Ordering::Relaxed).min(self.max_nodes),
            max_depth: self.max_depth.load(Ordering::Relaxed) as usize,
            steps: self.steps.load(Ordering::Relaxed),
        }
    }
}

/// Branching edge: an undecided edge at a vertex of minimum live count,
/// ties broken by vertex order, then adjacency order.
fn branch_edge(graph: &Graph, a: &EdgeAssignment) -> Option<EdgeId> {
    let mut best: Option<(usize, usize)> = None;
    for v in 0..graph.vertex_count() {
        let live = a.live_count(v);
        if live == a.forced_count(v) {
            continue;
        }
        if best.is_none_or(|(l, _)| live < l) {
            best = Some((live, v));
            if live <= 2 {
                break;
            }
        }
    }
    let (_, v) = best?;
    graph
        .incident(v)
        .iter()
        .find(|&&(_, e)| a.state(e) == EdgeState::Undecided)
        .map(|&(_, e)| e)
}

fn child(
    graph: &Graph,
    parent: &EdgeAssignment,
    e: EdgeId,
    force: bool,
    shared: &Shared,
) -> Result<EdgeAssignment, Contradiction> {
    let mut a = parent.clone();
    let result = if force {
        a.force(graph, e)
    } else {
        a.delete(graph, e);
        Ok(())
    };
    let result = result.and_then(|()| a.propagate(graph));
    shared.steps.fetch_add(a.steps() - parent.steps(), Ordering::Relaxed);
    result.map(|()| a)
}

fn dfs(graph: &Graph, a: EdgeAssignment, depth: usize, shared: &Shared) -> Outcome {
    if let Err(limit) = shared.tick(depth) {
        return Outcome::Limit(limit);
    }
    if a.is_complete() {
        return Outcome::Found(a);
    }
    let Some(e) = branch_edge(graph, &a) else {
        return Outcome::Exhausted;
    };
    for force in [true, false] {
        if let Ok(next) = child(graph, &a, e, force, shared) {
            match dfs(graph, next, depth + 1, shared) {
                Outcome::Exhausted => {}
                other => return other,
            }
        }
    }
    Outcome::Exhausted
}

fn root_parallel(graph: &Graph, a: EdgeAssignment, shared: &Shared) -> Outcome {
    if let Err(limit) = shared.tick(0) {
        return Outcome::Limit(limit);
    }
    if a.is_complete() {
        return Outcome::Found(a);
    }
    let Some(e) = branch_edge(graph, &a) else {
        return Outcome::Exhausted;
    };
    let run = |force: bool| match child(graph, &a, e, force, shared) {
        Ok(next) => dfs(graph, next, 1, shared),
        Err(_) => Outcome::Exhausted,
    };
    // Both branches run to completion; the forced branch wins ties so the
    // witness does not depend on scheduling.
    let (with, without) = rayon::join(|| run(true), || run(false));
    match (with, without) {
        (Outcome::Found(x), _) => Outcome::Found(x),
        (_, Outcome::Found(x)) => Outcome::Found(x),
        (Outcome::Limit(l), _) | (_, Outcome::Limit(l)) => Outcome::Limit(l),
        _ => Outcome::Exhausted,
    }
}

/// Decides whether `graph` has a Hamiltonian cycle extending `seed`
/// (all-undecided when `None`).
pub fn decide(graph: &Graph, seed: Option<EdgeAssignment>, budget: Budget) -> HamVerdict {
    decide_with(graph, seed, SearchOptions { budget, parallel_root: false })
}

pub fn decide_with(graph: &Graph, seed: Option<EdgeAssignment>, options: SearchOptions) -> HamVerdict {
    let trivial = SearchStats::default();
    if graph.vertex_count() < 3 || !graph.is_connected() {
        return HamVerdict::NonHamiltonian { stats: trivial };
    }
    let mut root = seed.unwrap_or_else(|| EdgeAssignment::new(graph));
    if root.propagate(graph).is_err() {
        return HamVerdict::NonHamiltonian {
            stats: SearchStats { nodes: 1, ..SearchStats::default() },
        };
    }
    let shared = Shared {
        nodes: AtomicU64::new(0),
        max_depth: AtomicU64::new(0),
        steps: AtomicU64::new(0),
        deadline: Instant::now() + options.budget.max_time,
        max_nodes: options.budget.max_nodes,
    };
    let outcome = if options.parallel_root {
        root_parallel(graph, root, &shared)
    } else {
        dfs(graph, root, 0, &shared)
    };
    let stats = shared.stats();
    match outcome {
        Outcome::Found(a) => HamVerdict::Hamiltonian {
            cycle: a.cycle(graph).expect("complete assignment spells a verified cycle"),
            stats,
        },
        Outcome::Exhausted => HamVerdict::NonHamiltonian { stats },
        Outcome::Limit(limit) => HamVerdict::Inconclusive { stats, limit },
    }
}
