//! Table-driven Hamiltonian cycle construction on bowtie-OTIS.
//!
//! For each parameter class a table lists, per cluster, intracluster edges
//! that no Hamiltonian cycle of the construction uses ("key" edges). They
//! are deleted up front and forced-edge propagation decides the rest, in
//! time linear in the number of OTIS vertices.
//!
//! Labels follow the canonical bowtie labelling: left cycle 1..=c, right
//! cycle c..=i. Label arithmetic wraps inside the cycle it lives on, with 0
//! read as c.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{decide, Budget, Contradiction, ContradictionReport, EdgeAssignment, EdgeState, HamVerdict};
use crate::graph::{EdgeId, Graph, HamCycle, VertexId};
use crate::topology::{bowtie_otis, otis_label, BowtieParams, OtisVertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamClass {
    /// BF(3, 2n+1), n > 1.
    OddOdd3N,
    /// BF(2m+1, 2m+1), m > 1.
    OddOddEqual,
    /// BF(2m+1, 2n+1), m > 1, n > 3, n > m.
    OddOddGeneral,
    /// BF(3, 2k).
    OddEven3,
    /// BF(2m+1, 2k), m > 1.
    OddEvenGeneral,
    /// BF(3,3) and BF(5,7): no table, solved by the complete decider.
    SmallFigureCase,
    EvenEven,
}

impl ParamClass {
    pub fn has_table(self) -> bool {
        !matches!(self, ParamClass::SmallFigureCase | ParamClass::EvenEven)
    }
}

impl fmt::Display for ParamClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParamClass::OddOdd3N => "odd_odd_3_n",
            ParamClass::OddOddEqual => "odd_odd_equal",
            ParamClass::OddOddGeneral => "odd_odd_general",
            ParamClass::OddEven3 => "odd_even_3",
            ParamClass::OddEvenGeneral => "odd_even_general",
            ParamClass::SmallFigureCase => "small_figure_case",
            ParamClass::EvenEven => "even_even",
        })
    }
}

pub fn classify(p: BowtieParams) -> ParamClass {
    let (m, n) = (p.m(), p.n());
    match (m % 2 == 1, n % 2 == 1) {
        (false, false) => ParamClass::EvenEven,
        (true, false) if m == 3 => ParamClass::OddEven3,
        (true, false) => ParamClass::OddEvenGeneral,
        (false, true) => unreachable!("normalized parameters put the odd cycle first"),
        (true, true) => match (m, n) {
            (3, 3) | (5, 7) => ParamClass::SmallFigureCase,
            (3, _) => ParamClass::OddOdd3N,
            _ if m == n => ParamClass::OddOddEqual,
            _ => ParamClass::OddOddGeneral,
        },
    }
}

/// One key edge: intracluster edge `(a,b)` of cluster `cluster`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyEdge {
    pub cluster: usize,
    pub a: usize,
    pub b: usize,
    /// Table row that produced the deletion.
    pub rule: String,
}

impl KeyEdge {
    pub fn labels(&self) -> (String, String) {
        (otis_label(self.cluster, self.a), otis_label(self.cluster, self.b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyEdgeSet {
    pub params: BowtieParams,
    pub class: ParamClass,
    pub edges: Vec<KeyEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum TableError {
    #[error("{class} has no key-edge table")]
    NoTable { class: ParamClass },
    #[error("rule {rule}: ({a},{b}) is not an edge of cluster {cluster}")]
    NotAnEdge {
        rule: String,
        cluster: usize,
        a: usize,
        b: usize,
    },
}

struct Table {
    c: usize,
    i: usize,
    edges: Vec<KeyEdge>,
    seen: HashSet<(usize, usize, usize)>,
    error: Option<TableError>,
}

impl Table {
    fn new(p: BowtieParams) -> Self {
        Self {
            c: p.c(),
            i: p.i(),
            edges: Vec::new(),
            seen: HashSet::new(),
            error: None,
        }
    }

    /// Resolves a label expression: in range values are literal, `0` and
    /// below wrap on the left cycle, values past `i` wrap on the right one.
    fn wrap(&self, v: i64) -> usize {
        let (c, i) = (self.c as i64, self.i as i64);
        if v <= 0 {
            (v.rem_euclid(c) + c - 1) as usize % c as usize + 1
        } else if v > i {
            (c + (v - c).rem_euclid(i - c + 1)) as usize
        } else {
            v as usize
        }
    }


    fn adjacent(&self, a: usize, b: usize) -> bool {
        let (c, i) = (self.c, self.i);
        let (lo, hi) = (a.min(b), a.max(b));
        (hi == lo + 1) || (lo == 1 && hi == c) || (lo == c && hi == i)
    }

    fn edge(&mut self, cluster: i64, a: i64, b: i64, rule: &str) {
        let cluster = self.wrap(cluster);
        let (a, b) = (self.wrap(a), self.wrap(b));
        if self.error.is_some() {
            return;
        }
        if a == b || !self.adjacent(a, b) {
            self.error = Some(TableError::NotAnEdge {
                rule: rule.to_string(),
                cluster,
                a,
                b,
            });
            return;
        }
        let key = (cluster, a.min(b), a.max(b));
        if self.seen.insert(key) {
            self.edges.push(KeyEdge {
                cluster,
                a,
                b,
                rule: rule.to_string(),
            });
        }
    }

    /// Alternating pairs `(a,a+1), (a+2,a+3), …` spanning labels
    /// `first..=last`. Inside the cluster's own cycle the pattern steps over
    /// the cluster vertex, so its two edges are never listed. Empty when
    /// `last < first + 1`.
    fn run(&mut self, cluster: i64, first: i64, last: i64, rule: &str) {
        let x = cluster;
        let mut a = first;
        while a < last {
            if a == x {
                a += 1;
                continue;
            }
            if a + 1 == x {
                a += 2;
                continue;
            }
            self.edge(cluster, a, a + 1, rule);
            a += 2;
        }
    }

    /// `(x-2, x-1)` and `(x+1, x+2)` inside the cycle holding `x`.
    fn around(&mut self, x: usize, rule: &str) {
        let (c, i) = (self.c as i64, self.i as i64);
        let xi = x as i64;
        let left = |v: i64| (v - 1).rem_euclid(c) + 1;
        let right = |v: i64| c + (v - c).rem_euclid(i - c + 1);
        // At the cut vertex the run below lies on the left cycle and the
        // run above on the right one.
        let wrap = |on_left: bool, v: i64| if on_left { left(v) } else { right(v) };
        let (down, up) = (x <= self.c, x < self.c);
        self.edge(xi, wrap(down, xi - 2), wrap(down, xi - 1), rule);
        self.edge(xi, wrap(up, xi + 1), wrap(up, xi + 2), rule);
    }

    fn finish(self, p: BowtieParams, class: ParamClass) -> Result<KeyEdgeSet, TableError> {
        match self.error {
            Some(e) => Err(e),
            None => Ok(KeyEdgeSet {
                params: p,
                class,
                edges: self.edges,
            }),
        }
    }
}

fn table_odd_odd_equal(t: &mut Table) {
    let (c, i) = (t.c as i64, t.i as i64);
    let r = "odd_odd_equal";
    // Cluster 1
    t.run(1, 2, c, &format!("{r}/cluster 1/S1"));
    t.run(1, c + 2, i - 1, &format!("{r}/cluster 1/S2"));
    for (a, b) in [(c, i), (c, c - 1), (c, c + 1)] {
        t.edge(1, a, b, &format!("{r}/cluster 1"));
    }
    // Cluster c+1
    t.run(c + 1, 2, c, &format!("{r}/cluster c+1/S1"));
    t.run(c + 1, c + 2, i - 1, &format!("{r}/cluster c+1/S2"));
    for (a, b) in [(c, i), (c, c - 1), (c, 1)] {
        t.edge(c + 1, a, b, &format!("{r}/cluster c+1"));
    }
    // Cluster c-1
    t.run(c - 1, 2, c - 2, &format!("{r}/cluster c-1/S3"));
    for (a, b) in [(c, c + 1), (c, 1)] {
        t.edge(c - 1, a, b, &format!("{r}/cluster c-1"));
    }
    if c + 4 != i {
        t.edge(c - 1, c + 3, c + 4, &format!("{r}/cluster c-1/iff c+4!=i"));
    }
    // Cluster c-2
    t.run(c - 2, 1, c, &format!("{r}/cluster c-2/S4"));
    t.edge(c - 2, c, c + 1, &format!("{r}/cluster c-2"));
    if c + 4 != i {
        t.edge(c - 2, c + 3, c + 4, &format!("{r}/cluster c-2/iff c+4!=i"));
    }
    // Cluster i
    // S5 as printed also lists the left run (2,3),…,(c-3,c-2). Together
    // with (3,4) below it leaves <i,3> one live edge, so only the right run
    // is kept.
    t.run(i, c + 2, i - 1, &format!("{r}/cluster i/S5"));
    for (a, b) in [(c, c + 1), (c, 1)] {
        t.edge(i, a, b, &format!("{r}/cluster i"));
    }
    if c - 1 != 4 {
        t.edge(i, 3, 4, &format!("{r}/cluster i/iff c-1!=4"));
    }
    // Cluster i-1
    t.run(i - 1, c + 1, i - 1, &format!("{r}/cluster i-1/S6"));
    t.edge(i - 1, c, i, &format!("{r}/cluster i-1/S6"));
    t.edge(i - 1, c, 1, &format!("{r}/cluster i-1"));
    if c - 1 != 4 {
        t.edge(i - 1, 3, 4, &format!("{r}/cluster i-1/iff c-1!=4"));
    }
    parity_rows(t, r);
    own_cycle_pattern_left(t, r);
    own_cycle_pattern(t, r);
    all_clusters_but_c(t, r);
}

/// Left-cycle counterpart of [`own_cycle_pattern`].
fn own_cycle_pattern_left(t: &mut Table, r: &str) {
    let c = t.c as i64;
    for x in 1..c {
        for j in (1..c - 1).step_by(2) {
            let a = (x - 1 + j) % c + 1;
            t.edge(x, a, a % c + 1, &format!("{r}/left clusters, own cycle"));
        }
    }
}

/// Rows by cluster parity: even left and odd right clusters drop `(c,1)`
/// and `(c,c+1)`, odd left ones `(c,c-1)` and `(c,c+1)`, even right ones
/// `(c,1)` and `(c,i)`.
fn parity_rows(t: &mut Table, r: &str) {
    let (c, i) = (t.c as i64, t.i as i64);
    for x in (2..c).step_by(2).chain((c + 2..=i).step_by(2)) {
        t.edge(x, c, 1, &format!("{r}/even-left, odd-right clusters"));
        t.edge(x, c, c + 1, &format!("{r}/even-left, odd-right clusters"));
    }
    for x in (1..=c - 2).step_by(2) {
        t.edge(x, c, c - 1, &format!("{r}/odd-left clusters"));
        t.edge(x, c, c + 1, &format!("{r}/odd-left clusters"));
    }
    for x in (c + 1..i).step_by(2) {
        t.edge(x, c, 1, &format!("{r}/even-right clusters"));
        t.edge(x, c, i, &format!("{r}/even-right clusters"));
    }
}

/// The all-clusters rule `(x-2,x-1)`, `(x+1,x+2)`. Cluster c is left out:
/// applied there it contradicts the rest of the table (for c = 3 it takes
/// `(1,2)` and leaves `<3,1>` with one live edge; for m = n propagation
/// closes a short cycle, overfills a vertex, or strands a residual with no
/// Hamiltonian completion).
fn all_clusters_but_c(t: &mut Table, r: &str) {
    let c = t.c;
    for x in (1..=t.i).filter(|&x| x != c) {
        t.around(x, &format!("{r}/all clusters"));
    }
}

fn table_odd_odd_3n(t: &mut Table) {
    let (c, i) = (t.c as i64, t.i as i64);
    let r = "odd_odd_3_n";
    t.run(1, c + 2, i - 1, &format!("{r}/cluster 1/S1"));
    for (a, b) in [(c, i), (c, c - 1), (c, c + 1)] {
        t.edge(1, a, b, &format!("{r}/cluster 1"));
    }
    t.edge(2, c, 1, &format!("{r}/cluster 2"));
    t.edge(2, c, c + 1, &format!("{r}/cluster 2"));
    // Guard kept literally: it never holds, since the class has i >= 7.
    if 7 > i {
        t.edge(2, 6, 7, &format!("{r}/cluster 2/S2 iff 7>i"));
        t.edge(2, i - 3, i - 2, &format!("{r}/cluster 2/S2 iff 7>i"));
    }
    t.edge(3, c, 1, &format!("{r}/cluster 3"));
    t.edge(3, c, c + 1, &format!("{r}/cluster 3"));
    for (a, b) in [(c, 1), (c, c - 1), (c, i), (c + 2, c + 3), (i - 2, i - 1)] {
        t.edge(c + 1, a, b, &format!("{r}/cluster c+1"));
    }
    t.edge(i - 1, c, 1, &format!("{r}/cluster i-1"));
    t.edge(i - 1, c, i, &format!("{r}/cluster i-1"));
    if 5 < i - 4 {
        for (a, b) in [(4, 5), (6, 7), (i - 3, i - 2)] {
            t.edge(i - 1, a, b, &format!("{r}/cluster i-1/S(i-1) iff 5<i-4"));
        }
    }
    // Not printed for this class; these are the equal-class parity rows,
    // which its listed rows agree with, and without which the completion
    // stalls from i = 11 on.
    parity_rows(t, r);
    own_cycle_pattern(t, r);
    all_clusters_but_c(t, r);
}

/// In a right cluster x, the cycle path through the right cycle enters at
/// x and alternates along it: every second edge, starting one past x, is
/// unused.
fn own_cycle_pattern(t: &mut Table, r: &str) {
    let (c, i) = (t.c as i64, t.i as i64);
    let n = i - c + 1;
    for x in c + 1..=i {
        for j in (1..n - 1).step_by(2) {
            let k = (x - c + j) % n;
            t.edge(x, c + k, c + (k + 1) % n, &format!("{r}/right clusters, own cycle"));
        }
    }
}

fn table_odd_odd_general(t: &mut Table) {
    let (c, i) = (t.c as i64, t.i as i64);
    let r = "odd_odd_general";
    for (a, b) in [(c, c - 1), (c, c + 1), (c, i)] {
        t.edge(1, a, b, &format!("{r}/cluster 1"));
    }
    t.run(1, 2, c, &format!("{r}/cluster 1/S1l"));
    t.run(1, c + 2, i - 1, &format!("{r}/cluster 1/S1r"));
    for (a, b) in [(c, 1), (c, i), (c - 2, c - 1)] {
        t.edge(2, a, b, &format!("{r}/cluster 2"));
    }
    if i - 5 >= c + 5 {
        t.run(2, c + 5, i - 4, &format!("{r}/cluster 2/S2"));
    }
    for (a, b) in [(i - 1, i - 2), (c, c - 1), (c, c + 1)] {
        t.edge(3, a, b, &format!("{r}/cluster 3"));
    }
    if i - 5 >= c + 5 {
        t.run(3, c + 5, i - 4, &format!("{r}/cluster 3/S3"));
    }
    for x in 4..=c - 3 {
        for (a, b) in [(c, 1), (c, c + 1), (i - 2, i - 1)] {
            t.edge(x, a, b, &format!("{r}/clusters 4..c-3"));
        }
    }
    for (a, b) in [(c, c - 1), (c, c + 1), (i - 2, i - 1)] {
        t.edge(c - 2, a, b, &format!("{r}/cluster c-2"));
    }
    for (a, b) in [(c, 1), (c, i), (2, 3)] {
        t.edge(c - 1, a, b, &format!("{r}/cluster c-1"));
    }
    t.run(c - 1, c + 4, i - 1, &format!("{r}/cluster c-1/S6"));
    t.edge(c, c, 1, &format!("{r}/cluster c"));
    t.edge(c, c, c + 1, &format!("{r}/cluster c"));
    for (a, b) in [(c, 1), (c, c - 1), (c, i), (c + 2, c + 3), (i - 2, i - 1)] {
        t.edge(c + 1, a, b, &format!("{r}/cluster c+1"));
    }
    for (a, b) in [(c, c - 1), (c, c + 1), (i - 1, i)] {
        t.edge(c + 2, a, b, &format!("{r}/cluster c+2"));
    }
    for (a, b) in [(c, 1), (c, c + 1), (i - 1, i)] {
        t.edge(c + 3, a, b, &format!("{r}/cluster c+3"));
    }
    for (a, b) in [(c, c - 1), (c, 1), (i - 1, i)] {
        t.edge(c + 4, a, b, &format!("{r}/cluster c+4"));
    }
    for x in c + 5..=i - 4 {
        if i - 5 >= c + 5 {
            t.edge(x, 2, 3, &format!("{r}/clusters c+5..i-4"));
        }
        for (a, b) in [(c, 1), (c, c - 1), (i, i - 1)] {
            t.edge(x, a, b, &format!("{r}/clusters c+5..i-4"));
        }
    }
    for (a, b) in [(c, 1), (c, c - 1), (i - 1, i)] {
        t.edge(i - 3, a, b, &format!("{r}/cluster i-3"));
    }
    t.run(i - 2, 3, c - 1, &format!("{r}/cluster i-2/S(i-2)"));
    for (a, b) in [(c, 1), (c, c + 1), (i, i - 1)] {
        t.edge(i - 2, a, b, &format!("{r}/cluster i-2"));
    }
    t.run(i - 1, 3, c - 1, &format!("{r}/cluster i-1/S(i-1)l"));
    t.edge(i - 1, c, 1, &format!("{r}/cluster i-1"));
    t.edge(i - 1, c, i, &format!("{r}/cluster i-1"));
    t.run(i - 1, c + 1, i - 2, &format!("{r}/cluster i-1/S(i-1)r"));
    for (a, b) in [(1, 2), (c, c - 1), (c, c + 1)] {
        t.edge(i, a, b, &format!("{r}/cluster i"));
    }
    t.run(i, c + 2, i - 1, &format!("{r}/cluster i/Si"));
    for x in 1..t.c {
        t.around(x, &format!("{r}/clusters 1..c-1"));
    }
}

fn table_odd_even_3(t: &mut Table) {
    let i = t.i as i64;
    let r = "odd_even_3";
    for (a, b) in [(3, 2), (3, 4), (3, i)] {
        t.edge(1, a, b, &format!("{r}/cluster 1"));
    }
    t.edge(2, 3, 1, &format!("{r}/cluster 2"));
    t.edge(2, 3, 4, &format!("{r}/cluster 2"));
    t.run(2, 5, i, &format!("{r}/cluster 2/S2"));
    t.edge(3, 3, 1, &format!("{r}/cluster 3"));
    t.edge(3, 3, 4, &format!("{r}/cluster 3"));
    for (a, b) in [(3, 1), (3, 2), (3, i)] {
        t.edge(4, a, b, &format!("{r}/cluster 4"));
    }
    for x in 5..i {
        t.edge(x, 3, 2, &format!("{r}/clusters 5..i-1"));
        t.edge(x, 3, i, &format!("{r}/clusters 5..i-1"));
    }
    t.edge(i, 3, 1, &format!("{r}/cluster i"));
    t.edge(i, 3, 2, &format!("{r}/cluster i"));
    t.run(i, 4, i - 1, &format!("{r}/cluster i/Si"));
}

fn table_odd_even_general(t: &mut Table) {
    let (c, i) = (t.c as i64, t.i as i64);
    let r = "odd_even_general";
    for (a, b) in [(c, c - 1), (c, c + 1), (c, i)] {
        t.edge(1, a, b, &format!("{r}/cluster 1"));
    }
    t.run(1, 2, c, &format!("{r}/cluster 1/S1"));
    for (a, b) in [(c, 1), (c, c + 1), (c - 2, c - 1)] {
        t.edge(2, a, b, &format!("{r}/cluster 2"));
    }
    if i >= c + 3 {
        t.run(2, c + 2, i - 2, &format!("{r}/cluster 2/S2"));
    }
    t.edge(3, c, c - 1, &format!("{r}/cluster 3"));
    t.edge(3, c, c + 1, &format!("{r}/cluster 3"));
    if i >= c + 3 {
        t.run(3, c + 2, i - 2, &format!("{r}/cluster 3/S3"));
    }
    if 4 < c - 1 {
        for x in 3..=c - 3 {
            t.edge(x, i - 1, i, &format!("{r}/clusters 3..c-3/iff 4<c-1"));
        }
    }
    if 4 < c - 3 {
        for x in 4..=c - 3 {
            t.edge(x, c, 1, &format!("{r}/clusters 4..c-3/iff 4<c-3"));
            t.edge(x, c, c + 1, &format!("{r}/clusters 4..c-3/iff 4<c-3"));
        }
    }
    t.edge(c - 2, c, c - 1, &format!("{r}/cluster c-2"));
    t.edge(c - 2, c, c + 1, &format!("{r}/cluster c-2"));
    for (a, b) in [(c, 1), (c, i), (2, 3)] {
        t.edge(c - 1, a, b, &format!("{r}/cluster c-1"));
    }
    t.run(c - 1, c + 1, i - 1, &format!("{r}/cluster c-1/S(c-1)"));
    t.edge(c, c, 1, &format!("{r}/cluster c"));
    t.edge(c, c, c + 1, &format!("{r}/cluster c"));
    for (a, b) in [(c, 1), (c, c - 1), (c, i)] {
        t.edge(c + 1, a, b, &format!("{r}/cluster c+1"));
    }
    t.run(c + 1, 2, c - 2, &format!("{r}/cluster c+1/S(c+1)"));
    for x in c + 2..=i - 2 {
        t.edge(x, c, c - 1, &format!("{r}/clusters c+2..i-2"));
        t.edge(x, c, i, &format!("{r}/clusters c+2..i-2"));
        if c + 3 < i {
            t.edge(x, 2, 3, &format!("{r}/clusters c+2..i-2/iff c+3<i"));
        }
    }
    t.edge(i - 1, c, c - 1, &format!("{r}/cluster i-1"));
    t.edge(i - 1, c, i, &format!("{r}/cluster i-1"));
    if 4 < c - 1 {
        t.run(i - 1, 3, c - 3, &format!("{r}/cluster i-1/S(i-1) iff 4<c-1"));
    }
    t.edge(i, c, 1, &format!("{r}/cluster i"));
    t.edge(i, c, c - 1, &format!("{r}/cluster i"));
    t.run(i, 3, c - 3, &format!("{r}/cluster i/Sil"));
    t.run(i, c + 1, i - 1, &format!("{r}/cluster i/Sir"));
    for x in 1..t.c {
        t.around(x, &format!("{r}/clusters 1..c-1"));
    }
}

pub fn key_edges(p: BowtieParams) -> Result<KeyEdgeSet, TableError> {
    let class = classify(p);
    let mut t = Table::new(p);
    match class {
        ParamClass::OddOddEqual => table_odd_odd_equal(&mut t),
        ParamClass::OddOdd3N => table_odd_odd_3n(&mut t),
        ParamClass::OddOddGeneral => table_odd_odd_general(&mut t),
        ParamClass::OddEven3 => table_odd_even_3(&mut t),
        ParamClass::OddEvenGeneral => table_odd_even_general(&mut t),
        ParamClass::SmallFigureCase | ParamClass::EvenEven => return Err(TableError::NoTable { class }),
    }
    t.finish(p, class)
}

fn transpose_edge(graph: &Graph, v: VertexId) -> Option<EdgeId> {
    let addr = OtisVertex::parse(graph.label(v))?;
    if addr.is_diagonal() {
        return None;
    }
    let w = graph.id(&OtisVertex::new(addr.processor, addr.cluster).label())?;
    graph.edge_between(v, w)
}

/// Edge ids of the key edges inside OTIS(BF(m,n)) as built by
/// [`bowtie_otis`].
pub fn key_edge_ids(graph: &Graph, set: &KeyEdgeSet) -> Vec<EdgeId> {
    set.edges
        .iter()
        .map(|k| {
            let (a, b) = k.labels();
            let (u, v) = (graph.id(&a).expect("table vertex"), graph.id(&b).expect("table vertex"));
            graph.edge_between(u, v).expect("table edges are checked against the base")
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FailureReport {
    /// No construction exists for this class (even-even bowties).
    UnsupportedClass { class: ParamClass },
    /// A table row names a non-edge.
    Table { error: TableError },
    /// Propagation from the key edges hit a contradiction.
    Contradiction { contradiction: ContradictionReport, steps: u64 },
    /// Propagation stopped with edges left undecided and neither the
    /// completion pass nor the residual search (verdict `residual`) closed a
    /// cycle.
    Undecided {
        first_undecided: (String, String),
        undecided: usize,
        residual: String,
        steps: u64,
    },
    /// The complete decider did not produce a cycle for a figure-only case.
    Oracle { verdict: String },
}

impl FailureReport {
    /// The decider ran out of budget, so the failure says nothing about
    /// the instance.
    pub fn is_inconclusive(&self) -> bool {
        match self {
            FailureReport::Oracle { verdict } => verdict == "inconclusive",
            FailureReport::Undecided { residual, .. } => residual == "inconclusive",
            _ => false,
        }
    }
}

impl fmt::Display for FailureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureReport::UnsupportedClass { class } => write!(f, "unsupported class {class}"),
            FailureReport::Table { error } => write!(f, "key-edge table: {error}"),
            FailureReport::Contradiction { contradiction, .. } => write!(
                f,
                "propagation contradiction {} at {}",
                contradiction.kind,
                contradiction.witness.join(" ")
            ),
            FailureReport::Undecided {
                first_undecided,
                undecided,
                residual,
                ..
            } => write!(
                f,
                "{undecided} edges left undecided, first {}-{}; residual search {residual}",
                first_undecided.0, first_undecided.1
            ),
            FailureReport::Oracle { verdict } => write!(f, "decider returned {verdict}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Key edges, propagation and the intercluster completion pass.
    Table,
    /// The completion pass failed; the decider finished from the
    /// propagated key-edge state.
    TableSearch,
    /// Complete decider from scratch (figure-only cases).
    Oracle,
}

#[derive(Debug, Clone)]
pub struct Construction {
    pub params: BowtieParams,
    pub class: ParamClass,
    pub method: Method,
    pub cycle: HamCycle,
    /// Propagation steps, including failed trials and any residual search.
    /// `None` on the oracle path.
    pub steps: Option<u64>,
    pub key_edges: usize,
}

/// Builds a verified Hamiltonian cycle of OTIS(BF(m,n)).
pub fn build_ham_cycle(p: BowtieParams) -> Result<Construction, FailureReport> {
    let graph = bowtie_otis(p);
    build_on(&graph, p, Budget::default())
}

/// Same as [`build_ham_cycle`] on a prebuilt `bowtie_otis(p)`; `budget`
/// bounds the decider on the oracle and residual-search paths.
pub fn build_on(graph: &Graph, p: BowtieParams, budget: Budget) -> Result<Construction, FailureReport> {
    let class = classify(p);
    match class {
        ParamClass::EvenEven => Err(FailureReport::UnsupportedClass { class }),
        ParamClass::SmallFigureCase => match decide(graph, None, budget) {
            HamVerdict::Hamiltonian { cycle, .. } => Ok(Construction {
                params: p,
                class,
                method: Method::Oracle,
                cycle,
                steps: None,
                key_edges: 0,
            }),
            other => Err(FailureReport::Oracle {
                verdict: other.name().to_string(),
            }),
        },
        _ => build_from_table(graph, p, class, budget),
    }
}

fn build_from_table(
    graph: &Graph,
    p: BowtieParams,
    class: ParamClass,
    budget: Budget,
) -> Result<Construction, FailureReport> {
    let set = key_edges(p).map_err(|error| FailureReport::Table { error })?;
    let deleted = key_edge_ids(graph, &set);
    let fail = |c: Contradiction, steps| FailureReport::Contradiction {
        contradiction: c.report(graph),
        steps,
    };
    let mut seeded = EdgeAssignment::seeded(graph, &[], &deleted).map_err(|c| fail(c, 0))?;
    if let Err(c) = seeded.propagate(graph) {
        return Err(fail(c, seeded.steps()));
    }
    let done = |cycle, method, steps| Construction {
        params: p,
        class,
        method,
        cycle,
        steps: Some(steps),
        key_edges: deleted.len(),
    };
    let (a, wasted) = complete(graph, &seeded);
    if let Some(cycle) = a.as_ref().and_then(|a| a.cycle(graph)) {
        return Ok(done(cycle, Method::Table, wasted + a.map_or(0, |a| a.steps())));
    }
    // Residual search: the propagated key-edge state is handed to the
    // complete decider.
    let spent = seeded.steps() + wasted;
    match decide(graph, Some(seeded.clone()), budget) {
        HamVerdict::Hamiltonian { cycle, stats } => Ok(done(cycle, Method::TableSearch, spent + stats.steps)),
        other => {
            let e = seeded.first_undecided().expect("incomplete assignment has an undecided edge");
            let (u, v) = graph.endpoints(e);
            Err(FailureReport::Undecided {
                first_undecided: (graph.label(u).to_string(), graph.label(v).to_string()),
                undecided: seeded.undecided_count(),
                residual: other.name().to_string(),
                steps: spent + other.stats().steps,
            })
        }
    }
}

/// Settles what propagation leaves open. Each vertex still short of two
/// cycle edges, in vertex order, gets its intercluster edge deleted and
/// propagated; if that contradicts, the edge is forced instead. Returns the
/// completed assignment, if any, and the steps spent on discarded trials.
fn complete(graph: &Graph, seeded: &EdgeAssignment) -> (Option<EdgeAssignment>, u64) {
    let mut a = seeded.clone();
    let mut wasted = 0;
    for v in 0..graph.vertex_count() {
        if a.forced_count(v) == 2 {
            continue;
        }
        let Some(e) = transpose_edge(graph, v) else { continue };
        if a.state(e) != EdgeState::Undecided {
            continue;
        }
        let mut trial = a.clone();
        trial.delete(graph, e);
        if trial.propagate(graph).is_ok() {
            a = trial;
            continue;
        }
        wasted += trial.steps() - a.steps();
        if a.force(graph, e).and_then(|()| a.propagate(graph)).is_err() {
            return (None, wasted + a.steps());
        }
    }
    let complete = a.undecided_count() == 0;
    if complete {
        (Some(a), wasted)
    } else {
        let steps = a.steps();
        (None, wasted + steps)
    }
}

/// Propagation steps spent by the table construction; `None` for classes
/// without a table or when the construction fails.
pub fn construction_cost(p: BowtieParams) -> Option<u64> {
    build_ham_cycle(p).ok().and_then(|c| c.steps)
}
