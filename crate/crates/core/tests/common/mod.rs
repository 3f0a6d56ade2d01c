//! Test helpers shared by integration tests: a brute-force Hamiltonicity
//! oracle and seeded random graphs.

#![allow(dead_code)]

use otisham::Graph;
use rand::Rng;

/// Hamiltonian cycle by plain permutation backtracking from vertex 0, with
/// no pruning beyond adjacency. Independent of the propagation engine.
pub fn brute_force_cycle(g: &Graph) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    if n < 3 {
        return None;
    }
    let adj = |a: usize, b: usize| g.edge_between(a, b).is_some();
    let mut path = vec![0];
    let mut used = vec![false; n];
    used[0] = true;
    fn extend(path: &mut Vec<usize>, used: &mut [bool], n: usize, adj: &dyn Fn(usize, usize) -> bool) -> bool {
        let last = *path.last().unwrap();
        if path.len() == n {
            return adj(last, path[0]);
        }
        for w in 1..n {
            if !used[w] && adj(last, w) {
                used[w] = true;
                path.push(w);
                if extend(path, used, n, adj) {
                    return true;
                }
                path.pop();
                used[w] = false;
            }
        }
        false
    }
    extend(&mut path, &mut used, n, &adj).then_some(path)
}

/// G(n, p) on vertices "1".."n".
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut g = Graph::with_vertices((1..=n).map(|v| v.to_string())).unwrap();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                g.add_edge_ids(a, b).unwrap();
            }
        }
    }
    g
}

/// Random connected graph: a random spanning tree plus G(n, p) extras.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut g = Graph::with_vertices((1..=n).map(|v| v.to_string())).unwrap();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        g.add_edge_ids(u, v).unwrap();
    }
    for a in 0..n {
        for b in a + 1..n {
            if g.edge_between(a, b).is_none() && rng.gen_bool(p) {
                g.add_edge_ids(a, b).unwrap();
            }
        }
    }
    g
}

/// Small graphs with known answers: (name, graph, hamiltonian).
pub fn fixtures() -> Vec<(String, Graph, bool)> {
    use otisham::topology::{gen_complete, gen_cycle, gen_path};
    use otisham::{gen_bowtie, otis, BowtieParams};
    let mut out = Vec::new();
    for k in 3..=10 {
        out.push((format!("C{k}"), gen_cycle(k).unwrap(), true));
        out.push((format!("K{k}"), gen_complete(k).unwrap(), true));
    }
    for k in 2..=10 {
        out.push((format!("P{k}"), gen_path(k).unwrap(), false));
    }
    for (m, n) in [(3, 3), (3, 4), (4, 4), (3, 5), (3, 6), (4, 5), (5, 5), (4, 6), (3, 7)] {
        let p = BowtieParams::new(m, n).unwrap();
        out.push((format!("BF({m},{n})"), gen_bowtie(p), false));
    }
    let petersen = {
        let mut g = Graph::with_vertices((0..10).map(|v| v.to_string())).unwrap();
        for v in 0..5 {
            g.add_edge_ids(v, (v + 1) % 5).unwrap();
            g.add_edge_ids(v, v + 5).unwrap();
            g.add_edge_ids(5 + v, 5 + (v + 2) % 5).unwrap();
        }
        g
    };
    out.push(("Petersen".into(), petersen, false));
    let k23 = {
        let mut g = Graph::with_vertices(["a", "b", "x", "y", "z"]).unwrap();
        for l in ["a", "b"] {
            for r in ["x", "y", "z"] {
                g.add_edge(l, r).unwrap();
            }
        }
        g
    };
    out.push(("K2,3".into(), k23, false));
    out.push(("OTIS(P3)".into(), otis(&gen_path(3).unwrap()).unwrap(), false));
    out.push(("OTIS(K3)".into(), otis(&gen_complete(3).unwrap()).unwrap(), true));
    out
}
