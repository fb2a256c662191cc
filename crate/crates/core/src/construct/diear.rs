//! Directed ears attached to a subgraph, and the search that finds one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BidirectedGraph, EdgeId, Sign, Slot, VertexId};
use crate::radials::{recognize_with, ClassLabel};
use crate::reach::{Oracle, SignConstraint};
use crate::walk::{validate_diwalk, Walk};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EarKind {
    Simple,
    Scoop,
}

/// Which edges an ear must avoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EarMode {
    /// The edges of the reference subgraph.
    #[default]
    Subgraph,
    /// Every edge of the host graph with both ends in the reference vertex set.
    Induced,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiEar {
    pub walk: Walk,
    pub kind: EarKind,
    /// The repeated edge of a scoop.
    pub grip: Option<EdgeId>,
}

impl DiEar {
    /// For a scoop, the sign of its end vertex over the grip.
    pub fn scoop_sign(&self, g: &BidirectedGraph) -> Option<Sign> {
        let grip = g.edge(self.grip.as_ref()?)?;
        grip.sign_at(self.walk.start())
    }
}

/// Classifies `w`, a walk of `g`, as a diear relative to `reference`.
pub fn validate_diear(
    g: &BidirectedGraph,
    reference: &BidirectedGraph,
    w: &Walk,
    mode: EarMode,
) -> std::result::Result<DiEar, String> {
    let x = reference.vertex_set();
    for end in [w.start(), w.end()] {
        if !x.contains(end) {
            return Err(format!("end `{end}` is outside the reference set"));
        }
    }
    if w.is_trivial() {
        return Err("an ear needs at least one edge".into());
    }
    let info = validate_diwalk(g, w).map_err(|e| e.to_string())?;
    for id in w.edge_ids() {
        let forbidden = match mode {
            EarMode::Subgraph => reference.has_edge(id),
            EarMode::Induced => g
                .edge(id)
                .is_some_and(|e| e.ends.iter().all(|end| x.contains(&end.vertex))),
        };
        if forbidden {
            return Err(format!("edge `{id}` belongs to the reference"));
        }
    }
    if info.is_ditrail {
        return Ok(DiEar {
            walk: w.clone(),
            kind: EarKind::Simple,
            grip: None,
        });
    }
    if !info.is_diwalk {
        return Err(format!("{w} is not a diwalk"));
    }

    // scoop: (v, e, w3, ..., w_{k-2}, e, v) with k >= 7
    let steps = w.steps();
    let n = steps.len();
    if n < 3 || !w.is_closed() {
        return Err(format!("{w} is neither a ditrail nor a scoop"));
    }
    let (first, last) = (&steps[0], &steps[n - 1]);
    if first.edge != last.edge || first.entry != last.entry.other() {
        return Err(format!("{w} does not return along its first edge"));
    }
    let grip = first.edge.clone();
    let in_cut = g
        .edge(&grip)
        .is_some_and(|e| !e.is_loop() && e.ends.iter().filter(|end| x.contains(&end.vertex)).count() == 1);
    if !in_cut {
        return Err(format!("grip `{grip}` does not leave the reference set"));
    }
    let interior = w.subwalk(1, n - 1);
    let inner = validate_diwalk(g, &interior).map_err(|e| e.to_string())?;
    if !interior.is_closed() || !inner.is_ditrail || interior.contains_edge(&grip) {
        return Err(format!("{interior} is not a closed ditrail avoiding the grip"));
    }
    Ok(DiEar {
        walk: w.clone(),
        kind: EarKind::Scoop,
        grip: Some(grip),
    })
}

/// A diear relative to `h` inside `g`, where both are absolute semiradials
/// with root `r` and `h` is a proper subgraph of `g` (all checked).
pub fn find_diear(g: &BidirectedGraph, h: &BidirectedGraph, r: &VertexId) -> Result<DiEar> {
    if !h.is_subgraph_of(g) {
        return Err(Error::Precondition("the reference is not a subgraph".into()));
    }
    if h == g {
        return Err(Error::Precondition("the reference is the whole graph".into()));
    }
    let o = Oracle::new(g);
    for oracle in [&o, &Oracle::new(h)] {
        if !recognize_with(oracle, r, Sign::Plus, ClassLabel::AbsoluteSemiradial)? {
            return Err(Error::NotMember {
                class: ClassLabel::AbsoluteSemiradial,
                root: r.clone(),
            });
        }
    }
    find_diear_unchecked(&o, h, r)
}

/// [`find_diear`] without the membership checks; `o` is an oracle on the
/// host graph.
///
/// With `e = xy` the least edge leaving `h` (`x` inside, `y` outside, `y`
/// signed `c` over `e`), follow a `-c`-ditrail `P` from `y` to `r`. Each
/// time `P` comes back to `y`:
///
/// - arriving with `-c`, the closed piece since the last departure from `y`
///   closes into a scoop with grip `e`;
/// - arriving with `c`, it must leave again with `-c`, so the rest of `P` is
///   again a `-c`-ditrail from `y` and the scan restarts there.
///
/// Otherwise the scan reaches `h` first and `(x, e, y)` plus the scanned
/// piece is a simple ear. `P` cannot leave `y` along `e` (wrong sign) and
/// reaching `x` ends the scan, so `e` never occurs in the scanned piece.
pub fn find_diear_unchecked(o: &Oracle<'_>, h: &BidirectedGraph, r: &VertexId) -> Result<DiEar> {
    let g = o.graph();
    let inside = h.vertex_set();
    let as_ear = |walk: Walk| {
        validate_diear(g, h, &walk, EarMode::Subgraph)
            .map_err(|reason| Error::Invariant(format!("constructed ear {walk} is invalid: {reason}")))
    };

    if inside.len() == g.vertex_count() {
        let e = g
            .edges()
            .find(|e| !h.has_edge(&e.id))
            .ok_or_else(|| Error::Precondition("the reference is the whole graph".into()))?;
        let mut walk = Walk::trivial(e.ends[0].vertex.clone());
        walk.push(e.id.clone(), Slot::First, e.ends[1].vertex.clone());
        return as_ear(walk);
    }

    let cut = g.cut(inside)?;
    let e = g.edge(cut.iter().next().ok_or(Error::Disconnected)?).expect("cut edge");
    let slot_x = if inside.contains(&e.ends[0].vertex) {
        Slot::First
    } else {
        Slot::Second
    };
    let x = &e.end(slot_x).vertex;
    let y = &e.end(slot_x.other()).vertex;
    let c = e.end(slot_x.other()).sign;
    let p = o
        .ditrail(y, r, SignConstraint::starting(-c))?
        .ok_or_else(|| Error::Precondition(format!("no {}-ditrail from {y} to {r}", -c)))?
        .walk;

    let mut opening = Walk::trivial(x.clone());
    opening.push(e.id.clone(), slot_x, y.clone());
    let arrivals: Vec<Sign> = p.steps().iter().map(|s| g.edge(&s.edge).expect("edge").end(s.entry.other()).sign).collect();
    let mut from = 0;
    for i in 1..p.vertices().len() {
        let v = &p.vertices()[i];
        if inside.contains(v) {
            return as_ear(opening.concat(&p.subwalk(from, i))?);
        }
        if v == y {
            if arrivals[i - 1] == -c {
                let closing = opening.reverse();
                return as_ear(opening.concat(&p.subwalk(from, i))?.concat(&closing)?);
            }
            from = i;
        }
    }
    Err(Error::Invariant(format!("ditrail {p} never reaches the subgraph")))
}

/// A scoop relative to `r` gripped by the least edge at `r` signed `-alpha`
/// there, meeting `r` only at its ends. Exists whenever `g` is an almost
/// strong `alpha`-radial with more than one vertex.
pub fn root_scoop(o: &Oracle<'_>, r: &VertexId, alpha: Sign) -> Result<DiEar> {
    let g = o.graph();
    let e = g
        .incident_edges(r)
        .find(|e| !e.is_loop() && e.sign_at(r) == Some(-alpha))
        .ok_or_else(|| Error::Precondition(format!("no edge at {r} signed {}", -alpha)))?;
    let x = &e.opposite(r).expect("non-loop").vertex;
    let beta = e.opposite(r).expect("non-loop").sign;
    let p = o
        .ditrail_meeting_target_once(x, r, SignConstraint::new(-beta, -alpha))?
        .ok_or_else(|| Error::Precondition(format!("no ({},{})-ditrail from {x} to {r}", -beta, -alpha)))?
        .walk;
    let n = p.edge_count();
    if p.steps()[n - 1].edge != e.id {
        return Err(Error::Invariant(format!("{p} does not end with `{}`", e.id)));
    }
    let slot_r = e.slot_at(r).expect("incident");
    let mut open = Walk::trivial(r.clone());
    open.push(e.id.clone(), slot_r, x.clone());
    let walk = open.concat(&p.subwalk(0, n - 1))?.concat(&p.subwalk(n - 1, n))?;
    validate_diear(g, &BidirectedGraph::single(r.clone()), &walk, EarMode::Subgraph)
        .map_err(|reason| Error::Invariant(format!("{walk} is not a scoop: {reason}")))
}
