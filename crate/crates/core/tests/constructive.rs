use std::collections::BTreeSet;

use otisham::constructive::{build_ham_cycle, classify, key_edges, Method, ParamClass};
use otisham::engine::{decide, Budget};
use otisham::{bowtie_otis, is_hamiltonian_cycle, BowtieParams};

fn params(m: usize, n: usize) -> BowtieParams {
    BowtieParams::new(m, n).unwrap()
}

fn cluster(set: &otisham::constructive::KeyEdgeSet, x: usize) -> BTreeSet<(usize, usize)> {
    set.edges
        .iter()
        .filter(|k| k.cluster == x)
        .map(|k| (k.a.min(k.b), k.a.max(k.b)))
        .collect()
}

#[test]
fn seven_seven_matches_golden() {
    let golden: BTreeSet<(usize, usize, usize)> = include_str!("golden/key_edges_7_7.txt")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<usize> = l.split_whitespace().map(|x| x.parse().unwrap()).collect();
            (f[0], f[1], f[2])
        })
        .collect();
    let set = key_edges(params(7, 7)).unwrap();
    let emitted: BTreeSet<_> = set.edges.iter().map(|k| (k.cluster, k.a.min(k.b), k.a.max(k.b))).collect();
    assert_eq!(emitted.len(), set.edges.len());
    let missing: Vec<_> = golden.difference(&emitted).collect();
    let extra: Vec<_> = emitted.difference(&golden).collect();
    assert!(missing.is_empty() && extra.is_empty(), "missing {missing:?}, extra {extra:?}");
}

#[test]
fn seven_seven_cluster_one_rows() {
    let set = key_edges(params(7, 7)).unwrap();
    let c1 = cluster(&set, 1);
    for e in [(2, 3), (4, 5), (6, 7), (7, 13), (7, 8)] {
        assert!(c1.contains(&e), "{e:?}");
    }
}

#[test]
fn three_even_cluster_i() {
    for k in [2, 4, 6] {
        let p = params(3, 2 * k);
        assert_eq!(classify(p), ParamClass::OddEven3);
        let i = p.i();
        let mut want: BTreeSet<_> = [(1, 3), (2, 3)].into();
        want.extend((4..i - 1).step_by(2).map(|a| (a, a + 1)));
        assert_eq!(cluster(&key_edges(p).unwrap(), i), want, "{p:?}");
    }
}

#[test]
fn general_odd_cluster_c() {
    let p = params(5, 9);
    assert_eq!(cluster(&key_edges(p).unwrap(), 5), [(1, 5), (5, 6)].into());
}

#[test]
fn three_five_builds() {
    let p = params(3, 5);
    let c = build_ham_cycle(p).unwrap();
    assert_eq!(c.cycle.len(), 49);
    assert!(is_hamiltonian_cycle(&bowtie_otis(p), c.cycle.order()));
}

#[test]
fn cost_ratio_three_five_to_three_nine() {
    let (a, b) = (build_ham_cycle(params(3, 5)).unwrap(), build_ham_cycle(params(3, 9)).unwrap());
    let step_ratio = b.steps.unwrap() as f64 / a.steps.unwrap() as f64;
    let vertex_ratio = b.cycle.len() as f64 / a.cycle.len() as f64;
    assert!(step_ratio <= 3.0 * vertex_ratio, "{step_ratio} vs {vertex_ratio}");
}

#[test]
fn decider_agrees_on_nine_vertex_bases() {
    for (m, n) in [(3, 7), (5, 5), (4, 6)] {
        let p = params(m, n);
        assert_eq!(p.i(), 9);
        let g = bowtie_otis(p);
        let verdict = decide(&g, None, Budget::default());
        match build_ham_cycle(p) {
            Ok(c) => {
                assert_eq!(c.method, Method::Table);
                assert!(verdict.is_hamiltonian(), "{p:?}");
            }
            Err(_) => assert!(verdict.is_non_hamiltonian(), "{p:?}"),
        }
    }
}

#[test]
fn no_second_edge_disjoint_cycle() {
    // Every bowtie on at most 7 vertices with a Hamiltonian OTIS.
    for (m, n) in [(3, 3), (3, 4), (3, 5)] {
        let p = params(m, n);
        let g = bowtie_otis(p);
        let c = build_ham_cycle(p).unwrap();
        let rest = g.without_edges(&c.cycle.edge_ids(&g));
        assert!(decide(&rest, None, Budget::default()).is_non_hamiltonian(), "{p:?}");
    }
}
