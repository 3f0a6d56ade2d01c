//! Regenerates OTIS(BF(4,4)) and OTIS(BF(4,6)) and checks the expected
//! counts, the degree census and both non-Hamiltonian verdicts.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use otisham::engine::{counting_refutation, decide, Budget, CountingOutcome};
use otisham::{BowtieParams, Graph};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub actual: Value,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reproduction {
    pub checks: Vec<Check>,
    /// Degree -> vertex count, per instance.
    pub census: BTreeMap<String, BTreeMap<usize, usize>>,
    pub degree_five_bf44: Vec<String>,
}

impl Reproduction {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.ok)
    }
}

fn census(g: &Graph) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for v in 0..g.vertex_count() {
        *out.entry(g.degree_of(v)).or_insert(0) += 1;
    }
    out
}

struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, name: &str, expected: impl Serialize, actual: impl Serialize) {
        let (expected, actual) = (json!(expected), json!(actual));
        self.0.push(Check {
            name: name.to_string(),
            ok: expected == actual,
            expected,
            actual,
        });
    }
}

/// Runs the reproduction against `generate`, normally
/// [`otisham::bowtie_otis`]; tests substitute a faulty generator.
pub fn reproduce_with(generate: &dyn Fn(BowtieParams) -> Graph, budget: Budget) -> Reproduction {
    let mut checks = Checks(Vec::new());
    let mut censuses = BTreeMap::new();

    let g44 = generate(BowtieParams::new(4, 4).expect("valid"));
    checks.add("bf44.vertices", 49, g44.vertex_count());
    checks.add("bf44.edges", 77, g44.edge_count());
    let cert = match counting_refutation(&g44) {
        CountingOutcome::Refuted(c) => Some(c),
        CountingOutcome::Inconclusive { .. } => None,
    };
    checks.add("bf44.counting.refuted", true, cert.is_some());
    checks.add("bf44.counting.budget", 28, cert.as_ref().map(|c| c.budget));
    checks.add("bf44.counting.high_degree", 20, cert.as_ref().map(|c| c.high_degree_contribution));
    checks.add("bf44.counting.independent_set", 9, cert.as_ref().map(|c| c.independent_contribution));
    checks.add("bf44.counting.bound", 29, cert.as_ref().map(|c| c.bound));
    let c44 = census(&g44);
    checks.add("bf44.census", BTreeMap::from([(2, 6), (3, 36), (4, 1), (5, 6)]), &c44);
    let five: Vec<String> = (0..g44.vertex_count())
        .filter(|&v| g44.degree_of(v) == 5)
        .map(|v| g44.label(v).to_string())
        .collect();
    checks.add("bf44.degree_five", ["1:4", "2:4", "3:4", "5:4", "6:4", "7:4"], &five);
    checks.add("bf44.verdict", "non_hamiltonian", decide(&g44, None, budget).name());
    censuses.insert("bf44".to_string(), c44);

    let g46 = generate(BowtieParams::new(4, 6).expect("valid"));
    checks.add("bf46.vertices", 81, g46.vertex_count());
    checks.add("bf46.edges", 126, g46.edge_count());
    checks.add(
        "bf46.counting.refuted",
        false,
        matches!(counting_refutation(&g46), CountingOutcome::Refuted(_)),
    );
    let c46 = census(&g46);
    checks.add("bf46.census", BTreeMap::from([(2, 8), (3, 64), (4, 1), (5, 8)]), &c46);
    checks.add("bf46.verdict", "non_hamiltonian", decide(&g46, None, budget).name());
    censuses.insert("bf46".to_string(), c46);

    Reproduction {
        checks: checks.0,
        census: censuses,
        degree_five_bf44: five,
    }
}

pub fn reproduce(budget: Budget) -> Reproduction {
    reproduce_with(&otisham::bowtie_otis, budget)
}
