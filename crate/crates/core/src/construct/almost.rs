//! Almost strong radials as rule trees: a strong radial hung from the root
//! by one edge, extra edges signed `alpha` at the root, and gluing at the root.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BidirectedGraph, Edge, Sign, VertexId};
use crate::radials::{recognize, ClassLabel};

use super::program::{extract_strong, replay_program, EarProgram};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum AlmostStrongTree {
    /// `edge` joins the root (signed `-alpha`) to the root of `core`, a
    /// strong program for the sign `edge` carries at that end.
    Base { edge: Edge, core: EarProgram },
    /// `edge` is signed `alpha` at the root; its other end is on `child`.
    AddRootEdge { edge: Edge, child: Box<AlmostStrongTree> },
    /// Children sharing only the root.
    Glue { children: Vec<AlmostStrongTree> },
}

impl AlmostStrongTree {
    pub fn node_count(&self) -> usize {
        match self {
            AlmostStrongTree::Base { .. } => 1,
            AlmostStrongTree::AddRootEdge { child, .. } => 1 + child.node_count(),
            AlmostStrongTree::Glue { children } => 1 + children.iter().map(Self::node_count).sum::<usize>(),
        }
    }
}

pub fn replay_almost_strong(root: &VertexId, alpha: Sign, tree: &AlmostStrongTree) -> Result<BidirectedGraph> {
    let mut counter = 0;
    replay_node(root, alpha, tree, &mut counter)
}

/// Nodes are numbered in pre-order for error reports.
fn replay_node(r: &VertexId, alpha: Sign, tree: &AlmostStrongTree, counter: &mut usize) -> Result<BidirectedGraph> {
    let index = *counter;
    *counter += 1;
    match tree {
        AlmostStrongTree::Base { edge, core } => {
            let fail = |reason: String| Error::Replay {
                rule: "base",
                index,
                reason,
            };
            let (Some(beta), Some(_)) = (core.alpha, &core.initial) else {
                return Err(fail("the core is not a strong program".into()));
            };
            let mut g = replay_program(core).map_err(|e| fail(format!("core: {e}")))?;
            if g.has_vertex(r) {
                return Err(fail(format!("the core already contains {r}")));
            }
            let ok = !edge.is_loop()
                && edge.has_sign_at(r, -alpha)
                && edge.opposite(r).is_some_and(|end| end.vertex == core.root && end.sign == beta);
            if !ok {
                return Err(fail(format!(
                    "edge {edge} must join {r} (signed {}) to {} (signed {beta})",
                    -alpha, core.root
                )));
            }
            g.add_vertex(r.clone());
            g.add_edge(edge.clone()).map_err(|e| fail(e.to_string()))?;
            Ok(g)
        }
        AlmostStrongTree::AddRootEdge { edge, child } => {
            let mut g = replay_node(r, alpha, child, counter)?;
            let fail = |reason: String| Error::Replay {
                rule: "add_root_edge",
                index,
                reason,
            };
            if !edge.has_sign_at(r, alpha) {
                return Err(fail(format!("edge {edge} is not signed {alpha} at {r}")));
            }
            g.add_edge(edge.clone()).map_err(|e| fail(e.to_string()))?;
            Ok(g)
        }
        AlmostStrongTree::Glue { children } => {
            let mut parts = Vec::with_capacity(children.len());
            for child in children {
                parts.push(replay_node(r, alpha, child, counter)?);
            }
            let fail = |reason: String| Error::Replay {
                rule: "glue",
                index,
                reason,
            };
            if parts.len() < 2 {
                return Err(fail("gluing needs at least two parts".into()));
            }
            let mut g = BidirectedGraph::single(r.clone());
            for part in &parts {
                let shared: BTreeSet<_> = g.vertex_set().intersection(part.vertex_set()).collect();
                if shared.len() != 1 {
                    return Err(fail(format!("parts share {} vertices besides the root", shared.len() - 1)));
                }
                if let Some(e) = part.edge_ids().find(|id| g.has_edge(id)) {
                    return Err(fail(format!("edge id `{e}` occurs in two parts")));
                }
                g = g.union(part).map_err(|e| fail(e.to_string()))?;
            }
            Ok(g)
        }
    }
}

pub fn decompose_almost_strong(g: &BidirectedGraph, r: &VertexId, alpha: Sign) -> Result<AlmostStrongTree> {
    if !recognize(g, r, alpha, ClassLabel::AlmostStrongRadial)? {
        return Err(Error::NotMember {
            class: ClassLabel::AlmostStrongRadial,
            root: r.clone(),
        });
    }
    if g.vertex_count() == 1 {
        return Err(Error::TrivialAlmostStrong);
    }
    decompose(g, r, alpha)
}

fn decompose(g: &BidirectedGraph, r: &VertexId, alpha: Sign) -> Result<AlmostStrongTree> {
    let blocks = g.blocks_over(r)?;
    if blocks.len() > 1 {
        let children = blocks
            .iter()
            .map(|b| decompose(b, r, alpha))
            .collect::<Result<Vec<_>>>()?;
        return Ok(AlmostStrongTree::Glue { children });
    }
    // incident_edges lists edges in id order, so the least one ends up outermost
    if let Some(e) = g.incident_edges(r).find(|e| e.has_sign_at(r, alpha)) {
        let rest = g.remove_edges([&e.id])?;
        return Ok(AlmostStrongTree::AddRootEdge {
            edge: e.clone(),
            child: Box::new(decompose(&rest, r, alpha)?),
        });
    }
    let at_root: Vec<&Edge> = g.incident_edges(r).collect();
    let [e] = at_root.as_slice() else {
        return Err(Error::Invariant(format!(
            "a single block with {} edges at {r}, all signed {}, instead of exactly one",
            at_root.len(),
            -alpha
        )));
    };
    let end = e
        .opposite(r)
        .ok_or_else(|| Error::Invariant(format!("loop `{}` at {r} signed {}", e.id, -alpha)))?;
    let core = extract_strong(&g.remove_vertex(r)?, &end.vertex, end.sign)?;
    Ok(AlmostStrongTree::Base {
        edge: (*e).clone(),
        core,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    use Sign::Minus;

    fn graph(s: &str) -> BidirectedGraph {
        BidirectedGraph::from_compact(s).unwrap()
    }

    fn g3() -> BidirectedGraph {
        graph("r x y | f1(+x,-y) f2(+y,+x) g(+r,-x)")
    }

    fn r() -> VertexId {
        VertexId::from("r")
    }

    #[test]
    fn g3_is_a_base() {
        let tree = decompose_almost_strong(&g3(), &r(), Minus).unwrap();
        match &tree {
            AlmostStrongTree::Base { edge, core } => {
                assert_eq!(edge.id.as_str(), "g");
                assert_eq!(core.root.as_str(), "x");
                assert!(core.ears.is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(replay_almost_strong(&r(), Minus, &tree).unwrap(), g3());
    }

    #[test]
    fn extra_root_edge_wraps_the_base() {
        let g = graph("r x y | f1(+x,-y) f2(+y,+x) g(+r,-x) h(-r,+y)");
        assert!(recognize(&g, &r(), Minus, ClassLabel::AlmostStrongRadial).unwrap());
        let tree = decompose_almost_strong(&g, &r(), Minus).unwrap();
        assert!(matches!(&tree, AlmostStrongTree::AddRootEdge { edge, child }
            if edge.id.as_str() == "h" && matches!(**child, AlmostStrongTree::Base { .. })));
        assert_eq!(replay_almost_strong(&r(), Minus, &tree).unwrap(), g);
    }

    #[test]
    fn two_copies_glue() {
        let g = graph("r x y u w | f1(+x,-y) f2(+y,+x) g(+r,-x) k1(+u,-w) k2(+w,+u) k(+r,-u)");
        let tree = decompose_almost_strong(&g, &r(), Minus).unwrap();
        match &tree {
            AlmostStrongTree::Glue { children } => {
                assert_eq!(children.len(), 2);
                assert!(children.iter().all(|c| matches!(c, AlmostStrongTree::Base { .. })));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(tree.node_count(), 3);
        assert_eq!(replay_almost_strong(&r(), Minus, &tree).unwrap(), g);
    }

    #[test]
    fn single_vertex_is_rejected() {
        assert_eq!(
            decompose_almost_strong(&BidirectedGraph::single("r"), &r(), Minus),
            Err(Error::TrivialAlmostStrong)
        );
    }

    #[test]
    fn replay_checks_root_signs() {
        let tree = decompose_almost_strong(&g3(), &r(), Minus).unwrap();
        assert!(matches!(
            replay_almost_strong(&r(), Sign::Plus, &tree),
            Err(Error::Replay { rule: "base", index: 0, .. })
        ));
        let glue = AlmostStrongTree::Glue {
            children: vec![tree.clone(), tree],
        };
        assert!(matches!(
            replay_almost_strong(&r(), Minus, &glue),
            Err(Error::Replay { rule: "glue", index: 0, .. })
        ));
    }
}
