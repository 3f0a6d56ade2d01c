//! Two independent spanning trees from a Hamiltonian cycle.
//!
//! Removing either cycle edge at the root leaves a Hamiltonian path; the two
//! paths reach every vertex along opposite arcs of the cycle, so the root
//! paths are internally vertex-disjoint.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, HamCycle, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("root {0} is not on the cycle")]
    RootNotOnCycle(String),
}

/// Two spanning trees rooted at `root`, as child -> parent maps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreePair {
    pub root: String,
    pub t1: BTreeMap<String, String>,
    pub t2: BTreeMap<String, String>,
    /// Cycle edge left out of `t1`: (root, successor).
    pub omitted_edge_1: (String, String),
    /// Cycle edge left out of `t2`: (predecessor, root).
    pub omitted_edge_2: (String, String),
}

pub fn build_ists(cycle: &HamCycle, root: &str) -> Result<TreePair, TreeError> {
    let order = cycle.order();
    let n = order.len();
    let r = cycle.position(root).ok_or_else(|| TreeError::RootNotOnCycle(root.to_string()))?;
    let at = |k: usize| order[(r + k) % n].clone();
    // t1 walks backwards from the root, t2 forwards.
    let t1 = (1..n).map(|k| (at(n - k), at(n - k + 1))).collect();
    let t2 = (1..n).map(|k| (at(k), at(k - 1))).collect();
    Ok(TreePair {
        root: root.to_string(),
        t1,
        t2,
        omitted_edge_1: (at(0), at(1)),
        omitted_edge_2: (at(n - 1), at(0)),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeCheck {
    pub edges: usize,
    /// Parent links form no cycle.
    pub acyclic: bool,
    /// Every graph vertex other than the root has a parent, all parent links
    /// are graph edges, and the root has none.
    pub spanning: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub t1: TreeCheck,
    pub t2: TreeCheck,
    /// Root paths share no vertex besides their ends.
    pub vertex_disjoint: bool,
    /// Root paths share no edge.
    pub edge_disjoint: bool,
    /// First vertex whose root paths meet, if any.
    pub first_violation: Option<String>,
}

impl IndependenceReport {
    pub fn independent(&self) -> bool {
        let ok = |t: &TreeCheck| t.acyclic && t.spanning;
        ok(&self.t1) && ok(&self.t2) && self.vertex_disjoint
    }
}

/// Parent array over graph ids; `None` when a label is unknown.
fn parents(graph: &Graph, tree: &BTreeMap<String, String>) -> Option<Vec<Option<VertexId>>> {
    let mut p = vec![None; graph.vertex_count()];
    for (child, parent) in tree {
        p[graph.id(child)?] = Some(graph.id(parent)?);
    }
    Some(p)
}

fn find(uf: &mut [usize], mut x: usize) -> usize {
    while uf[x] != x {
        uf[x] = uf[uf[x]];
        x = uf[x];
    }
    x
}

fn check_tree(graph: &Graph, root: Option<VertexId>, p: Option<&[Option<VertexId>]>, edges: usize) -> TreeCheck {
    let (Some(root), Some(p)) = (root, p) else {
        return TreeCheck {
            edges,
            acyclic: false,
            spanning: false,
        };
    };
    let mut uf: Vec<usize> = (0..p.len()).collect();
    let mut acyclic = true;
    for (v, parent) in p.iter().enumerate() {
        if let Some(u) = *parent {
            let (a, b) = (find(&mut uf, u), find(&mut uf, v));
            if a == b {
                acyclic = false;
            }
            uf[a] = b;
        }
    }
    let spanning = p[root].is_none()
        && p.iter()
            .enumerate()
            .all(|(v, parent)| v == root || parent.is_some_and(|u| graph.edge_between(u, v).is_some()));
    TreeCheck {
        edges,
        acyclic,
        spanning,
    }
}

/// Path from `v` up to the root, or `None` if it does not get there.
fn root_path(p: &[Option<VertexId>], root: VertexId, v: VertexId) -> Option<Vec<VertexId>> {
    let mut path = vec![v];
    let mut x = v;
    while x != root {
        x = p[x]?;
        path.push(x);
        if path.len() > p.len() {
            return None;
        }
    }
    Some(path)
}

pub fn check_independence(pair: &TreePair, graph: &Graph) -> IndependenceReport {
    let root = graph.id(&pair.root);
    let (p1, p2) = (parents(graph, &pair.t1), parents(graph, &pair.t2));
    let t1 = check_tree(graph, root, p1.as_deref(), pair.t1.len());
    let t2 = check_tree(graph, root, p2.as_deref(), pair.t2.len());
    let mut report = IndependenceReport {
        t1,
        t2,
        vertex_disjoint: false,
        edge_disjoint: false,
        first_violation: None,
    };
    let (Some(root), Some(p1), Some(p2)) = (root, p1, p2) else {
        return report;
    };
    report.vertex_disjoint = true;
    report.edge_disjoint = true;
    // Stamp the inner vertices and the edges of the t1 path, then walk t2.
    let mut mark = vec![usize::MAX; graph.vertex_count()];
    let mut edge_mark = vec![usize::MAX; graph.edge_count()];
    for v in (0..graph.vertex_count()).filter(|&v| v != root) {
        let (Some(a), Some(b)) = (root_path(&p1, root, v), root_path(&p2, root, v)) else {
            report.vertex_disjoint = false;
            report.edge_disjoint = false;
            report.first_violation.get_or_insert_with(|| graph.label(v).to_string());
            continue;
        };
        for &x in &a[1..a.len() - 1] {
            mark[x] = v;
        }
        for w in a.windows(2) {
            if let Some(e) = graph.edge_between(w[0], w[1]) {
                edge_mark[e] = v;
            }
        }
        if b[1..b.len() - 1].iter().any(|&x| mark[x] == v) {
            report.vertex_disjoint = false;
            report.first_violation.get_or_insert_with(|| graph.label(v).to_string());
        }
        if b
            .windows(2)
            .any(|w| graph.edge_between(w[0], w[1]).is_some_and(|e| edge_mark[e] == v))
        {
            report.edge_disjoint = false;
        }
    }
    report
}

pub fn verify_independence(pair: &TreePair, graph: &Graph) -> bool {
    check_independence(pair, graph).independent()
}
