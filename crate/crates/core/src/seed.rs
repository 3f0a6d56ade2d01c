//! JSON seeds for the decider: `{"forced": [[a, b], ...], "deleted": [...]}`
//! with edges named by their endpoint labels. Both keys are optional.

use serde::{Deserialize, Serialize};

use crate::engine::{Contradiction, EdgeAssignment};
use crate::error::FormatError;
use crate::graph::{EdgeId, Graph};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Seed {
    #[serde(default)]
    pub forced: Vec<(String, String)>,
    #[serde(default)]
    pub deleted: Vec<(String, String)>,
}

impl Seed {
    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("seed serializes")
    }

    /// Edge ids of the forced and deleted lists.
    pub fn resolve(&self, graph: &Graph) -> Result<(Vec<EdgeId>, Vec<EdgeId>), FormatError> {
        let ids = |edges: &[(String, String)]| -> Result<Vec<EdgeId>, FormatError> {
            edges.iter().map(|(a, b)| edge_id(graph, a, b)).collect()
        };
        Ok((ids(&self.forced)?, ids(&self.deleted)?))
    }

    /// The seeded assignment, before propagation. The inner error is a
    /// contradiction inside the seed itself.
    pub fn assignment(&self, graph: &Graph) -> Result<Result<EdgeAssignment, Contradiction>, FormatError> {
        let (forced, deleted) = self.resolve(graph)?;
        Ok(EdgeAssignment::seeded(graph, &forced, &deleted))
    }
}

fn edge_id(graph: &Graph, a: &str, b: &str) -> Result<EdgeId, FormatError> {
    let id = |l: &str| graph.id(l).ok_or_else(|| FormatError::Invalid(format!("seed names unknown vertex {l}")));
    let (u, v) = (id(a)?, id(b)?);
    graph
        .edge_between(u, v)
        .ok_or_else(|| FormatError::Invalid(format!("seed names non-edge {a}-{b}")))
}
