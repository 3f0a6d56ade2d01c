//! Constructive sweep: build, verify and derive trees for every bowtie-OTIS
//! up to a base size.

use rayon::prelude::*;
use serde::Serialize;

use otisham::constructive::{build_on, classify, FailureReport, Method, ParamClass};
use otisham::engine::Budget;
use otisham::trees::{build_ists, check_independence};
use otisham::{bowtie_otis, is_hamiltonian_cycle, BowtieParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Unsupported,
    Inconclusive,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepItem {
    pub m: usize,
    pub n: usize,
    pub class: ParamClass,
    pub vertices: usize,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    /// Roots at which the two spanning trees were checked.
    pub roots: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub max_base: usize,
    pub items: Vec<SweepItem>,
    pub pass: usize,
    pub unsupported: usize,
    pub inconclusive: usize,
    pub fail: usize,
}

/// Normalized parameter pairs with `m + n - 1 <= max_base`, each once.
pub fn sweep_params(max_base: usize) -> Vec<BowtieParams> {
    let mut out: Vec<BowtieParams> = Vec::new();
    for m in 3..max_base {
        for n in m..=max_base + 1 - m {
            let p = BowtieParams::new(m, n).expect("m, n >= 3");
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

/// Sweep roots: first vertex, the cut-vertex diagonal `<c,c>`, last vertex.
pub fn sweep_roots(p: BowtieParams) -> [String; 3] {
    let (c, i) = (p.c(), p.i());
    ["1:1".to_string(), format!("{c}:{c}"), format!("{i}:{i}")]
}

pub fn run_one(p: BowtieParams, budget: Budget) -> SweepItem {
    let graph = bowtie_otis(p);
    let mut item = SweepItem {
        m: p.m(),
        n: p.n(),
        class: classify(p),
        vertices: graph.vertex_count(),
        outcome: Outcome::Fail,
        method: None,
        steps: None,
        roots: Vec::new(),
        detail: None,
    };
    let built = match build_on(&graph, p, budget) {
        Ok(b) => b,
        Err(FailureReport::UnsupportedClass { .. }) => {
            item.outcome = Outcome::Unsupported;
            return item;
        }
        Err(e) => {
            item.outcome = if e.is_inconclusive() { Outcome::Inconclusive } else { Outcome::Fail };
            item.detail = Some(e.to_string());
            return item;
        }
    };
    item.method = Some(built.method);
    item.steps = built.steps;
    if !is_hamiltonian_cycle(&graph, built.cycle.order()) {
        item.detail = Some("cycle fails verification".to_string());
        return item;
    }
    for root in sweep_roots(p) {
        let report = build_ists(&built.cycle, &root).map(|pair| check_independence(&pair, &graph));
        match report {
            Ok(r) if r.independent() && r.t1.edges + 1 == item.vertices && r.t2.edges + 1 == item.vertices => {
                item.roots.push(root)
            }
            Ok(r) => {
                item.detail = Some(format!("trees at {root} not independent: {r:?}"));
                return item;
            }
            Err(e) => {
                item.detail = Some(e.to_string());
                return item;
            }
        }
    }
    item.outcome = Outcome::Pass;
    item
}

/// Runs every pair of [`sweep_params`]; items keep parameter order whatever
/// the thread count.
pub fn sweep(max_base: usize, budget: Budget) -> SweepSummary {
    let items: Vec<SweepItem> = sweep_params(max_base)
        .into_par_iter()
        .map(|p| run_one(p, budget))
        .collect();
    let count = |o: Outcome| items.iter().filter(|it| it.outcome == o).count();
    SweepSummary {
        max_base,
        pass: count(Outcome::Pass),
        unsupported: count(Outcome::Unsupported),
        inconclusive: count(Outcome::Inconclusive),
        fail: count(Outcome::Fail),
        items,
    }
}
