//! The JSON interchange shape for graphs.
//!
//! ```json
//! {"vertices": ["a", "r"],
//!  "edges": [{"id": "e", "ends": [{"v": "a", "sign": "+"}, {"v": "r", "sign": "-"}]}]}
//! ```

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{BidirectedGraph, Edge, EdgeId, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
}

/// A schema violation, located by field path (e.g. `edges[2].ends[0].v`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentError {
    pub field: String,
    pub message: String,
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for DocumentError {}

impl GraphDocument {
    pub fn validate(&self) -> Result<(), DocumentError> {
        let mut vertices = BTreeSet::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if !vertices.insert(v) {
                return Err(DocumentError {
                    field: format!("vertices[{i}]"),
                    message: format!("duplicate vertex `{v}`"),
                });
            }
        }
        let mut ids: BTreeSet<&EdgeId> = BTreeSet::new();
        for (i, e) in self.edges.iter().enumerate() {
            if !ids.insert(&e.id) {
                return Err(DocumentError {
                    field: format!("edges[{i}].id"),
                    message: format!("duplicate edge id `{}`", e.id),
                });
            }
            for (j, end) in e.ends.iter().enumerate() {
                if !vertices.contains(&end.vertex) {
                    return Err(DocumentError {
                        field: format!("edges[{i}].ends[{j}].v"),
                        message: format!("undeclared vertex `{}`", end.vertex),
                    });
                }
            }
        }
        Ok(())
    }
}

impl TryFrom<GraphDocument> for BidirectedGraph {
    type Error = DocumentError;

    fn try_from(doc: GraphDocument) -> Result<Self, Self::Error> {
        doc.validate()?;
        let mut g = BidirectedGraph::new();
        for v in doc.vertices {
            g.add_vertex(v);
        }
        for e in doc.edges {
            g.add_edge(e).map_err(|err| DocumentError {
                field: "edges".into(),
                message: err.to_string(),
            })?;
        }
        Ok(g)
    }
}

impl From<BidirectedGraph> for GraphDocument {
    fn from(g: BidirectedGraph) -> Self {
        GraphDocument::from(&g)
    }
}

impl From<&BidirectedGraph> for GraphDocument {
    fn from(g: &BidirectedGraph) -> Self {
        GraphDocument {
            vertices: g.vertices().cloned().collect(),
            edges: g.edges().cloned().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let g = BidirectedGraph::from_compact("a r | e(+a,-r)").unwrap();
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(
            json,
            r#"{"vertices":["a","r"],"edges":[{"id":"e","ends":[{"v":"a","sign":"+"},{"v":"r","sign":"-"}]}]}"#
        );
        let back: BidirectedGraph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn rejects_unknown_vertex_and_duplicates() {
        let bad = r#"{"vertices":["a"],"edges":[{"id":"e","ends":[{"v":"a","sign":"+"},{"v":"b","sign":"-"}]}]}"#;
        let err = serde_json::from_str::<BidirectedGraph>(bad).unwrap_err();
        assert!(err.to_string().contains("edges[0].ends[1].v"), "{err}");

        let dup = r#"{"vertices":["a"],"edges":[
            {"id":"e","ends":[{"v":"a","sign":"+"},{"v":"a","sign":"-"}]},
            {"id":"e","ends":[{"v":"a","sign":"+"},{"v":"a","sign":"+"}]}]}"#;
        let err = serde_json::from_str::<BidirectedGraph>(dup).unwrap_err();
        assert!(err.to_string().contains("duplicate edge id"), "{err}");
    }

    #[test]
    fn rejects_wrong_end_count_and_bad_sign() {
        let three = r#"{"vertices":["a"],"edges":[{"id":"e","ends":[{"v":"a","sign":"+"},{"v":"a","sign":"+"},{"v":"a","sign":"+"}]}]}"#;
        assert!(serde_json::from_str::<BidirectedGraph>(three).is_err());
        let sign = r#"{"vertices":["a"],"edges":[{"id":"e","ends":[{"v":"a","sign":"*"},{"v":"a","sign":"+"}]}]}"#;
        assert!(serde_json::from_str::<BidirectedGraph>(sign).is_err());
    }
}
