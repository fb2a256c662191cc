//! Linear and sublinear radials: a digraphic core plus `(alpha,alpha)`-edges.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::digraphic::{is_flowgraph, require_digraphic, scc_poset};
use crate::error::{Error, Result};
use crate::graph::{BidirectedGraph, Edge, EdgeId, Sign, VertexId};

/// Why a graph fails the structural description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// A `(-alpha,-alpha)`-edge.
    OppositeEdge(EdgeId),
    LoopAtRoot(EdgeId),
    /// A `(+,-)`-edge signed `alpha` at the root: an arc leaving the root.
    ArcFromRoot(EdgeId),
    /// A sink component of the core with no edge to the root signed `alpha`
    /// at its side.
    UncontactedComponent(Vec<VertexId>),
    /// The root's component is not the maximum of the core's decomposition.
    NotFlowgraph,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::OppositeEdge(e) => write!(f, "edge `{e}` is signed opposite to alpha at both ends"),
            Obstruction::LoopAtRoot(e) => write!(f, "loop `{e}` at the root"),
            Obstruction::ArcFromRoot(e) => write!(f, "arc `{e}` leaves the root"),
            Obstruction::UncontactedComponent(c) => {
                let names: Vec<&str> = c.iter().map(VertexId::as_str).collect();
                write!(f, "component {{{}}} has no edge to the root", names.join(", "))
            }
            Obstruction::NotFlowgraph => f.write_str("the root's component is not the maximum"),
        }
    }
}

/// Outcome of a structural recognizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<T> {
    Member(T),
    Refuted(Obstruction),
}

impl<T> Verdict<T> {
    pub fn is_member(&self) -> bool {
        matches!(self, Verdict::Member(_))
    }

    pub fn member(self) -> Option<T> {
        match self {
            Verdict::Member(t) => Some(t),
            Verdict::Refuted(_) => None,
        }
    }
}

/// A digraphic graph `base` avoiding the root, `contacts` joining it to the
/// root (signed `alpha` on the base side, at least one per sink component),
/// and extra `(alpha,alpha)`-edges that are not loops at the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearCore {
    pub root: VertexId,
    pub alpha: Sign,
    pub base: BidirectedGraph,
    pub contacts: Vec<Edge>,
    pub added: Vec<Edge>,
}

/// An `alpha`-flowgraph with root `root` plus extra `(alpha,alpha)`-edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SublinearCore {
    pub root: VertexId,
    pub alpha: Sign,
    pub base: BidirectedGraph,
    pub added: Vec<Edge>,
}

fn add_all(g: &mut BidirectedGraph, edges: &[Edge], rule: &'static str, check: impl Fn(&Edge) -> std::result::Result<(), String>) -> Result<()> {
    for (index, e) in edges.iter().enumerate() {
        let fail = |reason: String| Error::Replay { rule, index, reason };
        check(e).map_err(fail)?;
        g.add_edge(e.clone()).map_err(|err| fail(err.to_string()))?;
    }
    Ok(())
}

fn require_added(e: &Edge, alpha: Sign, r: &VertexId) -> std::result::Result<(), String> {
    if !e.is_homogeneous(alpha) {
        return Err(format!("edge {e} is not a ({alpha},{alpha})-edge"));
    }
    if e.is_loop() && e.touches(r) {
        return Err(format!("edge {e} is a loop at the root"));
    }
    Ok(())
}

pub fn replay_linear(c: &LinearCore) -> Result<BidirectedGraph> {
    let fail = |reason: String| Error::Replay {
        rule: "base",
        index: 0,
        reason,
    };
    let (r, alpha) = (&c.root, c.alpha);
    require_digraphic(&c.base).map_err(|e| fail(e.to_string()))?;
    if c.base.has_vertex(r) {
        return Err(fail(format!("the base contains the root {r}")));
    }
    let mut g = c.base.clone();
    g.add_vertex(r.clone());
    add_all(&mut g, &c.contacts, "contact", |e| {
        let far = e.opposite(r).filter(|_| !e.is_loop() && e.touches(r));
        match far {
            Some(end) if c.base.has_vertex(&end.vertex) && end.sign == alpha => Ok(()),
            _ => Err(format!("edge {e} does not join the base (signed {alpha}) to {r}")),
        }
    })?;
    let poset = scc_poset(&c.base, alpha)?;
    let contacted: BTreeSet<&VertexId> = c.contacts.iter().filter_map(|e| e.opposite(r)).map(|end| &end.vertex).collect();
    for m in poset.maximal() {
        if !poset.components[m].iter().any(|v| contacted.contains(v)) {
            return Err(fail(Obstruction::UncontactedComponent(poset.components[m].clone()).to_string()));
        }
    }
    add_all(&mut g, &c.added, "added", |e| require_added(e, alpha, r))?;
    Ok(g)
}

pub fn replay_sublinear(c: &SublinearCore) -> Result<BidirectedGraph> {
    let fail = |reason: String| Error::Replay {
        rule: "base",
        index: 0,
        reason,
    };
    let ok = is_flowgraph(&c.base, &c.root, c.alpha).map_err(|e| fail(e.to_string()))?;
    if !ok {
        return Err(fail(Obstruction::NotFlowgraph.to_string()));
    }
    let mut g = c.base.clone();
    add_all(&mut g, &c.added, "added", |e| {
        if e.is_homogeneous(c.alpha) {
            Ok(())
        } else {
            Err(format!("edge {e} is not a ({0},{0})-edge", c.alpha))
        }
    })?;
    Ok(g)
}

fn split_homogeneous(g: &BidirectedGraph, alpha: Sign) -> std::result::Result<(BidirectedGraph, Vec<Edge>), Obstruction> {
    if let Some(e) = g.edges().find(|e| e.is_homogeneous(-alpha)) {
        return Err(Obstruction::OppositeEdge(e.id.clone()));
    }
    let added: Vec<Edge> = g.edges().filter(|e| e.is_homogeneous(alpha)).cloned().collect();
    let rest = g
        .remove_edges(added.iter().map(|e| &e.id))
        .expect("edges of g");
    Ok((rest, added))
}

/// Structural recognizer for linear `alpha`-semiradials with root `r`.
pub fn decompose_linear(g: &BidirectedGraph, r: &VertexId, alpha: Sign) -> Result<Verdict<LinearCore>> {
    g.require_vertex(r)?;
    let (rest, mut added) = match split_homogeneous(g, alpha) {
        Ok(split) => split,
        Err(o) => return Ok(Verdict::Refuted(o)),
    };
    if let Some(e) = g.loops_at(r).next() {
        return Ok(Verdict::Refuted(Obstruction::LoopAtRoot(e.id.clone())));
    }
    if let Some(e) = rest.incident_edges(r).find(|e| e.has_sign_at(r, alpha)) {
        return Ok(Verdict::Refuted(Obstruction::ArcFromRoot(e.id.clone())));
    }
    let mut contacts: Vec<Edge> = rest.incident_edges(r).cloned().collect();
    let base = rest.remove_vertex(r)?;
    let poset = scc_poset(&base, alpha)?;
    for m in poset.maximal() {
        let comp = &poset.components[m];
        let joins = |e: &Edge| e.opposite(r).is_some_and(|end| comp.binary_search(&end.vertex).is_ok());
        if contacts.iter().any(joins) {
            continue;
        }
        // the least (alpha,alpha)-edge into the component becomes a contact
        let Some(i) = added.iter().position(|e| !e.is_loop() && joins(e)) else {
            return Ok(Verdict::Refuted(Obstruction::UncontactedComponent(comp.clone())));
        };
        contacts.push(added.remove(i));
    }
    contacts.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(Verdict::Member(LinearCore {
        root: r.clone(),
        alpha,
        base,
        contacts,
        added,
    }))
}

/// Structural recognizer for sublinear `alpha`-radials with root `r`.
pub fn decompose_sublinear(g: &BidirectedGraph, r: &VertexId, alpha: Sign) -> Result<Verdict<SublinearCore>> {
    g.require_vertex(r)?;
    let (base, added) = match split_homogeneous(g, alpha) {
        Ok(split) => split,
        Err(o) => return Ok(Verdict::Refuted(o)),
    };
    if !is_flowgraph(&base, r, alpha)? {
        return Ok(Verdict::Refuted(Obstruction::NotFlowgraph));
    }
    Ok(Verdict::Member(SublinearCore {
        root: r.clone(),
        alpha,
        base,
        added,
    }))
}
