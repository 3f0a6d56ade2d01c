//! Edge-counting refutation of Hamiltonicity.
//!
//! A Hamiltonian cycle on `|V|` vertices uses `|V|` edges, so exactly
//! `|E| - |V|` edges stay off it. Independently, every vertex of degree `d`
//! leaves `d - 2` of its edges off the cycle. Summing `d - 2` over an
//! independent vertex set never counts an edge twice, so if that sum
//! exceeds the budget no Hamiltonian cycle exists.
//!
//! The set used here is every vertex of degree at least 4 (pairwise
//! non-adjacent ones, greedily in vertex order), plus a maximum independent
//! set of the degree-3 vertices with no neighbour of degree at least 4.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexId};

/// Largest degree-3 candidate set the exact independent-set search accepts.
pub const MAX_MIS_CANDIDATES: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingCertificate {
    pub vertices: usize,
    pub edges: usize,
    /// `|E| - |V|`: edges a Hamiltonian cycle must leave unused.
    pub budget: usize,
    /// Pairwise non-adjacent vertices of degree at least 4, with degrees.
    pub high_degree: Vec<(String, usize)>,
    pub high_degree_contribution: usize,
    /// Maximum independent set of the qualifying degree-3 vertices.
    pub independent_set: Vec<String>,
    pub independent_contribution: usize,
    /// Lower bound on unused edges; exceeds `budget`.
    pub bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CountingOutcome {
    Refuted(CountingCertificate),
    Inconclusive {
        budget: usize,
        bound: usize,
        /// Set when the degree-3 candidate set exceeded
        /// [`MAX_MIS_CANDIDATES`]; `bound` then omits it.
        candidates_too_large: bool,
    },
}

impl CountingOutcome {
    pub fn certificate(&self) -> Option<&CountingCertificate> {
        match self {
            CountingOutcome::Refuted(c) => Some(c),
            CountingOutcome::Inconclusive { .. } => None,
        }
    }
}

pub fn counting_refutation(graph: &Graph) -> CountingOutcome {
    let n = graph.vertex_count();
    let m = graph.edge_count();
    let budget = m.saturating_sub(n);

    let mut high: Vec<VertexId> = Vec::new();
    for v in 0..n {
        if graph.degree_of(v) >= 4 && high.iter().all(|&h| graph.edge_between(h, v).is_none()) {
            high.push(v);
        }
    }
    let high_contrib: usize = high.iter().map(|&v| graph.degree_of(v) - 2).sum();

    let candidates: Vec<VertexId> = (0..n)
        .filter(|&v| graph.degree_of(v) == 3)
        .filter(|&v| graph.incident(v).iter().all(|&(w, _)| graph.degree_of(w) < 4))
        .collect();
    if candidates.len() > MAX_MIS_CANDIDATES {
        return CountingOutcome::Inconclusive {
            budget,
            bound: high_contrib,
            candidates_too_large: true,
        };
    }
    let mis = max_independent_set(graph, &candidates);
    let bound = high_contrib + mis.len();
    if bound > budget {
        let label = |v: VertexId| graph.label(v).to_string();
        CountingOutcome::Refuted(CountingCertificate {
            vertices: n,
            edges: m,
            budget,
            high_degree: high.iter().map(|&v| (label(v), graph.degree_of(v))).collect(),
            high_degree_contribution: high_contrib,
            independent_set: mis.into_iter().map(label).collect(),
            independent_contribution: bound - high_contrib,
            bound,
        })
    } else {
        CountingOutcome::Inconclusive {
            budget,
            bound,
            candidates_too_large: false,
        }
    }
}

/// Exact maximum independent set of the subgraph induced by `vertices`
/// (at most 64). Returned in the order of `vertices`.
pub fn max_independent_set(graph: &Graph, vertices: &[VertexId]) -> Vec<VertexId> {
    assert!(vertices.len() <= 64, "independent-set search is limited to 64 vertices");
    let k = vertices.len();
    let nbr: Vec<u64> = (0..k)
        .map(|a| {
            (0..k)
                .filter(|&b| b != a && graph.edge_between(vertices[a], vertices[b]).is_some())
                .fold(0u64, |mask, b| mask | 1 << b)
        })
        .collect();
    let all = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut best = 0u64;
    mis_branch(&nbr, all, 0, &mut best);
    (0..k).filter(|&a| best >> a & 1 == 1).map(|a| vertices[a]).collect()
}

fn mis_branch(nbr: &[u64], mut open: u64, mut chosen: u64, best: &mut u64) {
    // Vertices with at most one open neighbour can always be taken.
    loop {
        let mut progressed = false;
        let mut rest = open;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if open >> v & 1 == 0 {
                continue;
            }
            if (nbr[v] & open).count_ones() <= 1 {
                chosen |= 1 << v;
                open &= !(nbr[v] | 1 << v);
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
    }
    if open == 0 {
        if chosen.count_ones() > best.count_ones() {
            *best = chosen;
        }
        return;
    }
    if chosen.count_ones() + open.count_ones() <= best.count_ones() {
        return;
    }
    let mut pick = open.trailing_zeros() as usize;
    let mut rest = open;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if (nbr[v] & open).count_ones() > (nbr[pick] & open).count_ones() {
            pick = v;
        }
    }
    mis_branch(nbr, open & !(nbr[pick] | 1 << pick), chosen | 1 << pick, best);
    mis_branch(nbr, open & !(1 << pick), chosen, best);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::*;
    use proptest::prelude::*;

    fn brute_mis(graph: &Graph, vs: &[VertexId]) -> usize {
        let k = vs.len();
        (0u32..1 << k)
            .filter(|mask| {
                (0..k).all(|a| {
                    mask >> a & 1 == 0
                        || (a + 1..k).all(|b| mask >> b & 1 == 0 || graph.edge_between(vs[a], vs[b]).is_none())
                })
            })
            .map(u32::count_ones)
            .max()
            .unwrap_or(0) as usize
    }

    #[test]
    fn cycle_six_is_inconclusive() {
        let out = counting_refutation(&gen_cycle(6).unwrap());
        assert_eq!(
            out,
            CountingOutcome::Inconclusive {
                budget: 0,
                bound: 0,
                candidates_too_large: false
            }
        );
    }

    #[test]
    fn mis_small_cases() {
        let c5 = gen_cycle(5).unwrap();
        assert_eq!(max_independent_set(&c5, &[0, 1, 2, 3, 4]).len(), 2);
        let k4 = gen_complete(4).unwrap();
        assert_eq!(max_independent_set(&k4, &[0, 1, 2, 3]).len(), 1);
        assert!(max_independent_set(&k4, &[]).is_empty());
    }

    proptest! {
        #[test]
        fn mis_matches_enumeration(n in 1usize..14, pairs in proptest::collection::vec((0usize..14, 0usize..14), 0..40)) {
            let mut g = Graph::with_vertices((0..n).map(|v| v.to_string())).unwrap();
            for (a, b) in pairs {
                let (a, b) = (a % n, b % n);
                if a != b && g.edge_between(a, b).is_none() {
                    g.add_edge_ids(a, b).unwrap();
                }
            }
            let vs: Vec<_> = (0..n).collect();
            let mis = max_independent_set(&g, &vs);
            for (x, &a) in mis.iter().enumerate() {
                for &b in &mis[x + 1..] {
                    prop_assert!(g.edge_between(a, b).is_none());
                }
            }
            prop_assert_eq!(mis.len(), brute_mis(&g, &vs));
        }
    }
}
