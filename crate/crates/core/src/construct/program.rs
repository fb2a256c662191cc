//! Ear programs: absolute semiradials grow from the bare root by diears;
//! strong radials start from a closed ditrail over the root instead.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BidirectedGraph, Edge, Sign, VertexId};
use crate::radials::{recognize_with, ClassLabel};
use crate::reach::{Oracle, SignConstraint};
use crate::walk::{validate_diwalk, Walk};

use super::diear::{find_diear_unchecked, validate_diear, DiEar, EarMode};

/// One ear together with the records of the edges it introduces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EarStep {
    pub walk: Walk,
    pub edges: Vec<Edge>,
}

impl EarStep {
    fn from_walk(g: &BidirectedGraph, walk: Walk) -> Self {
        let edges = walk
            .edge_set()
            .iter()
            .map(|id| g.edge(id).expect("walk of g").clone())
            .collect();
        EarStep { walk, edges }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EarProgram {
    pub root: VertexId,
    /// Set for strong programs: the sign the result is a radial for.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Sign>,
    /// For strong programs, a closed `(-alpha,-alpha)`-ditrail over the root.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<EarStep>,
    pub ears: Vec<EarStep>,
}

/// `h` plus the step's edges, after checking they are new and exactly the
/// edges the walk uses.
fn attach(h: &BidirectedGraph, step: &EarStep) -> std::result::Result<BidirectedGraph, String> {
    let mut next = h.clone();
    for e in &step.edges {
        if h.has_edge(&e.id) {
            return Err(format!("edge `{}` is already present", e.id));
        }
        next.add_edge_with_vertices(e.clone()).map_err(|err| err.to_string())?;
    }
    let declared: std::collections::BTreeSet<_> = step.edges.iter().map(|e| e.id.clone()).collect();
    if declared != step.walk.edge_set() {
        return Err("declared edges differ from the edges of the walk".into());
    }
    Ok(next)
}

pub fn replay_program(p: &EarProgram) -> Result<BidirectedGraph> {
    let mut h = BidirectedGraph::single(p.root.clone());
    match (&p.initial, p.alpha) {
        (Some(step), Some(alpha)) => {
            let fail = |reason: String| Error::Replay {
                rule: "initial",
                index: 0,
                reason,
            };
            let next = attach(&h, step).map_err(fail)?;
            let ear = validate_diear(&next, &h, &step.walk, EarMode::Subgraph).map_err(fail)?;
            let info = validate_diwalk(&next, &step.walk)?;
            if step.walk.start() != &p.root
                || !step.walk.is_closed()
                || !info.is_ditrail
                || !info.classifies(Some(-alpha), Some(-alpha))
            {
                return Err(fail(format!(
                    "{} is not a closed ({},{})-ditrail over {}",
                    ear.walk, -alpha, -alpha, p.root
                )));
            }
            h = next;
        }
        (Some(_), None) => {
            return Err(Error::Replay {
                rule: "initial",
                index: 0,
                reason: "an initial ear needs a sign".into(),
            })
        }
        (None, _) => {}
    }
    for (index, step) in p.ears.iter().enumerate() {
        let fail = |reason: String| Error::Replay {
            rule: "ear",
            index,
            reason,
        };
        let next = attach(&h, step).map_err(fail)?;
        validate_diear(&next, &h, &step.walk, EarMode::Subgraph).map_err(fail)?;
        h = next;
    }
    Ok(h)
}

/// Adds ears found by [`find_diear_unchecked`] until `h` is all of `o`'s graph.
fn grow(o: &Oracle<'_>, mut h: BidirectedGraph, r: &VertexId) -> Result<Vec<EarStep>> {
    let g = o.graph();
    let mut ears = Vec::new();
    while h != *g {
        let DiEar { walk, .. } = find_diear_unchecked(o, &h, r)?;
        let step = EarStep::from_walk(g, walk);
        h = attach(&h, &step).map_err(Error::Invariant)?;
        ears.push(step);
    }
    Ok(ears)
}

pub fn extract_absolute(g: &BidirectedGraph, r: &VertexId) -> Result<EarProgram> {
    let o = Oracle::new(g);
    if !recognize_with(&o, r, Sign::Plus, ClassLabel::AbsoluteSemiradial)? {
        return Err(Error::NotMember {
            class: ClassLabel::AbsoluteSemiradial,
            root: r.clone(),
        });
    }
    Ok(EarProgram {
        root: r.clone(),
        alpha: None,
        initial: None,
        ears: grow(&o, BidirectedGraph::single(r.clone()), r)?,
    })
}

pub fn extract_strong(g: &BidirectedGraph, r: &VertexId, alpha: Sign) -> Result<EarProgram> {
    let o = Oracle::new(g);
    if !recognize_with(&o, r, alpha, ClassLabel::StrongRadial)? {
        return Err(Error::NotMember {
            class: ClassLabel::StrongRadial,
            root: r.clone(),
        });
    }
    let closed = o
        .closed_ditrail(r, SignConstraint::new(-alpha, -alpha))?
        .ok_or_else(|| Error::Invariant(format!("strong radial without a closed ditrail over {r}")))?;
    let initial = EarStep::from_walk(g, closed.walk);
    let h = attach(&BidirectedGraph::single(r.clone()), &initial).map_err(Error::Invariant)?;
    Ok(EarProgram {
        root: r.clone(),
        alpha: Some(alpha),
        ears: grow(&o, h, r)?,
        initial: Some(initial),
    })
}
