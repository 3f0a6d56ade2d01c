//! Interchange formats: the edge-list text format, DOT export and the
//! cycle certificate JSON.
//!
//! Edge list: a `V <count>` header, then one `u v` pair per line. A line
//! holding a single label declares a vertex without edges; it is only
//! written for isolated vertices. Vertices are numbered in order of first
//! appearance. Blank lines and lines starting with `#` are skipped.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::FormatError;
use crate::graph::{check_hamiltonian_cycle, Graph};
use crate::topology::OtisVertex;

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("V {}\n", g.vertex_count());
    for v in 0..g.vertex_count() {
        if g.degree_of(v) == 0 {
            let _ = writeln!(out, "{}", g.label(v));
        }
    }
    for &(a, b) in g.edges() {
        let _ = writeln!(out, "{} {}", g.label(a), g.label(b));
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<Graph, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line, header) = lines.next().ok_or(FormatError::Syntax {
        line: 1,
        msg: "missing `V <count>` header".into(),
    })?;
    let count = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["V", n] => n.parse::<usize>().map_err(|_| FormatError::Syntax {
            line,
            msg: format!("bad vertex count {n:?}"),
        })?,
        _ => {
            return Err(FormatError::Syntax {
                line,
                msg: "expected `V <count>` header".into(),
            })
        }
    };
    let mut g = Graph::new();
    let ensure = |g: &mut Graph, label: &str, line: usize| -> Result<usize, FormatError> {
        match g.id(label) {
            Some(v) => Ok(v),
            None => g
                .add_vertex(label)
                .map_err(|source| FormatError::Graph { line, source }),
        }
    };
    for (line, l) in lines {
        match l.split_whitespace().collect::<Vec<_>>().as_slice() {
            [a] => {
                ensure(&mut g, a, line)?;
            }
            [a, b] => {
                let u = ensure(&mut g, a, line)?;
                let v = ensure(&mut g, b, line)?;
                g.add_edge_ids(u, v)
                    .map_err(|source| FormatError::Graph { line, source })?;
            }
            _ => {
                return Err(FormatError::Syntax {
                    line,
                    msg: format!("expected `u v`, got {l:?}"),
                })
            }
        }
    }
    if g.vertex_count() != count {
        return Err(FormatError::Invalid(format!(
            "header declares {count} vertices, body mentions {}",
            g.vertex_count()
        )));
    }
    Ok(g)
}

/// Order-insensitive rendering used for hashing: sorted labels, then sorted
/// edges with sorted endpoints.
pub fn canonical_form(g: &Graph) -> String {
    let labels: BTreeSet<&str> = g.labels().iter().map(String::as_str).collect();
    let edges: BTreeSet<(&str, &str)> = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (g.label(a), g.label(b));
            if x <= y {
                (x, y)
            } else {
                (y, x)
            }
        })
        .collect();
    let mut out = String::new();
    for l in labels {
        let _ = writeln!(out, "{l}");
    }
    out.push('\n');
    for (a, b) in edges {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT rendering. When every label is an OTIS address `g:u`, vertices are
/// grouped into one `cluster_g` subgraph per cluster.
pub fn to_dot(g: &Graph, highlight: Option<&[usize]>) -> String {
    let mut out = String::from("graph G {\n");
    let addrs: Option<Vec<OtisVertex>> = g.labels().iter().map(|l| OtisVertex::parse(l)).collect();
    match addrs {
        Some(addrs) if !addrs.is_empty() => {
            let mut clusters: Vec<&str> = Vec::new();
            for a in &addrs {
                if !clusters.contains(&a.cluster.as_str()) {
                    clusters.push(&a.cluster);
                }
            }
            for c in clusters {
                let _ = writeln!(out, "  subgraph {} {{", dot_id(&format!("cluster_{c}")));
                let _ = writeln!(out, "    label={};", dot_id(c));
                for (v, a) in addrs.iter().enumerate() {
                    if a.cluster == c {
                        let _ = writeln!(out, "    {};", dot_id(g.label(v)));
                    }
                }
                out.push_str("  }\n");
            }
        }
        _ => {
            for l in g.labels() {
                let _ = writeln!(out, "  {};", dot_id(l));
            }
        }
    }
    let mut marked = vec![false; g.edge_count()];
    for &e in highlight.unwrap_or(&[]) {
        marked[e] = true;
    }
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        let style = if marked[e] { " [color=red, penwidth=2]" } else { "" };
        let _ = writeln!(out, "  {} -- {}{};", dot_id(g.label(a)), dot_id(g.label(b)), style);
    }
    out.push_str("}\n");
    out
}

/// `{"graph_hash": ..., "order": [...], "verified": ...}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCertificate {
    pub graph_hash: String,
    pub order: Vec<String>,
    pub verified: bool,
}

impl CycleCertificate {
    /// Builds a certificate, running the verifier against `g`.
    pub fn for_graph<S: AsRef<str>>(g: &Graph, order: &[S]) -> Self {
        Self {
            graph_hash: g.content_hash(),
            order: order.iter().map(|s| s.as_ref().to_string()).collect(),
            verified: check_hamiltonian_cycle(g, order).is_ok(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{bowtie_otis, gen_cycle, BowtieParams};
    use proptest::prelude::*;

    #[test]
    fn edge_list_shape() {
        let text = to_edge_list(&gen_cycle(3).unwrap());
        assert_eq!(text, "V 3\n1 2\n2 3\n3 1\n");
    }

    #[test]
    fn otis_edge_list_preserves_vertex_order() {
        let g = bowtie_otis(BowtieParams::new(3, 4).unwrap());
        assert_eq!(parse_edge_list(&to_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn isolated_vertices_survive() {
        let mut g = Graph::with_vertices(["a", "b", "c"]).unwrap();
        g.add_edge("a", "c").unwrap();
        let back = parse_edge_list(&to_edge_list(&g)).unwrap();
        assert_eq!(back.vertex_count(), 3);
        assert_eq!(back.content_hash(), g.content_hash());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_edge_list(""), Err(FormatError::Syntax { .. })));
        assert!(matches!(parse_edge_list("E 3\n"), Err(FormatError::Syntax { .. })));
        assert!(matches!(parse_edge_list("V x\n"), Err(FormatError::Syntax { .. })));
        assert!(matches!(
            parse_edge_list("V 2\na b c\n"),
            Err(FormatError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("V 1\na a\n"),
            Err(FormatError::Graph { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("V 2\na b\nb a\n"),
            Err(FormatError::Graph { line: 3, .. })
        ));
        assert!(matches!(parse_edge_list("V 3\na b\n"), Err(FormatError::Invalid(_))));
    }

    #[test]
    fn dot_groups_clusters() {
        let g = crate::topology::otis(&crate::topology::gen_path(2).unwrap()).unwrap();
        let dot = to_dot(&g, None);
        assert!(dot.contains("subgraph \"cluster_1\""));
        assert!(dot.contains("subgraph \"cluster_2\""));
        assert!(dot.contains("\"1:2\" -- \"2:1\";"));
        let plain = to_dot(&gen_cycle(3).unwrap(), Some(&[0]));
        assert!(!plain.contains("subgraph"));
        assert!(plain.contains("\"1\" -- \"2\" [color=red, penwidth=2];"));
    }

    #[test]
    fn certificate_json() {
        let g = gen_cycle(4).unwrap();
        let cert = CycleCertificate::for_graph(&g, &["1", "2", "3", "4"]);
        assert!(cert.verified);
        let back = CycleCertificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        assert!(!CycleCertificate::for_graph(&g, &["1", "3", "2", "4"]).verified);
    }

    proptest! {
        #[test]
        fn edge_list_roundtrip(n in 1usize..12, pairs in proptest::collection::vec((0usize..12, 0usize..12), 0..30)) {
            let mut g = Graph::with_vertices((0..n).map(|v| format!("v{v}"))).unwrap();
            for (a, b) in pairs {
                let (a, b) = (a % n, b % n);
                if a != b && g.edge_between(a, b).is_none() {
                    g.add_edge_ids(a, b).unwrap();
                }
            }
            let back = parse_edge_list(&to_edge_list(&g)).unwrap();
            prop_assert_eq!(back.vertex_count(), g.vertex_count());
            prop_assert_eq!(back.edge_count(), g.edge_count());
            prop_assert_eq!(canonical_form(&back), canonical_form(&g));
        }
    }
}
