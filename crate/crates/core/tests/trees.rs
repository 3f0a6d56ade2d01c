use otisham::constructive::build_ham_cycle;
use otisham::trees::{build_ists, check_independence, verify_independence};
use otisham::{gen_bowtie, otis, BowtieParams, Graph};
use proptest::prelude::*;

/// Chords of one base cycle `ring`, sampled by `mask`, that leave at least
/// one non-cut vertex of the ring with degree 2.
fn add_chords(base: &mut Graph, ring: &[usize], cut: usize, mask: u64) {
    let k = ring.len();
    let mut bit = 0;
    let spared = ring.iter().copied().find(|&v| v != cut).unwrap();
    for a in 0..k {
        for b in a + 2..k {
            if a == 0 && b == k - 1 {
                continue;
            }
            let (u, v) = (ring[a], ring[b]);
            if u != spared && v != spared && mask >> (bit % 64) & 1 == 1 {
                base.add_edge(&u.to_string(), &v.to_string()).unwrap();
            }
            bit += 1;
        }
    }
}

#[test]
fn bf35_tree_pair_at_the_first_vertex() {
    let p = BowtieParams::new(3, 5).unwrap();
    let built = build_ham_cycle(p).unwrap();
    let pair = build_ists(&built.cycle, "1:1").unwrap();
    let r = check_independence(&pair, &otisham::bowtie_otis(p));
    assert!(r.independent() && r.edge_disjoint);
    assert_eq!((r.t1.edges, r.t2.edges), (48, 48));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn chords_keep_tree_pairs_independent(
        (m, n) in prop_oneof![Just((3, 5)), Just((5, 7)), Just((5, 6))],
        left in any::<u64>(),
        right in any::<u64>(),
        root_pick in any::<prop::sample::Index>(),
    ) {
        let p = BowtieParams::new(m, n).unwrap();
        let built = build_ham_cycle(p).unwrap();
        let (c, i) = (p.c(), p.i());
        let mut base = gen_bowtie(p);
        add_chords(&mut base, &(1..=c).collect::<Vec<_>>(), c, left);
        add_chords(&mut base, &(c..=i).collect::<Vec<_>>(), c, right);
        let augmented = otis(&base).unwrap();
        let root = &built.cycle.order()[root_pick.index(built.cycle.len())];
        let pair = build_ists(&built.cycle, root).unwrap();
        prop_assert!(verify_independence(&pair, &augmented));
    }
}
