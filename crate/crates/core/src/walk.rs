//! Walks and the sign-aware diwalk / ditrail / dipath classification.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BidirectedGraph, EdgeId, Sign, Slot, VertexId};

/// One edge occurrence of a walk. `entry` is the slot at the preceding
/// vertex; the walk leaves through the other slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Traversal {
    pub edge: EdgeId,
    pub entry: Slot,
}

/// An alternating vertex/edge sequence `(v1, e2, v3, ..., vk)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "WalkRepr", into = "WalkRepr")]
pub struct Walk {
    vertices: Vec<VertexId>,
    steps: Vec<Traversal>,
}

#[derive(Serialize, Deserialize)]
struct WalkRepr {
    terms: Vec<String>,
    entries: Vec<u8>,
}

impl TryFrom<WalkRepr> for Walk {
    type Error = String;

    fn try_from(repr: WalkRepr) -> std::result::Result<Self, String> {
        if repr.terms.len().is_multiple_of(2) {
            return Err("a walk has an odd number of terms".into());
        }
        let edges = repr.terms.len() / 2;
        if repr.entries.len() != edges {
            return Err(format!(
                "expected {edges} entry slots, found {}",
                repr.entries.len()
            ));
        }
        let mut terms = repr.terms.into_iter();
        let mut walk = Walk::trivial(terms.next().expect("odd length"));
        for &slot in &repr.entries {
            let edge = terms.next().expect("edge term");
            let to = terms.next().expect("vertex term");
            let entry = Slot::from_index(slot as usize)
                .ok_or_else(|| format!("entry slot must be 0 or 1, found {slot}"))?;
            walk.push(edge, entry, to);
        }
        Ok(walk)
    }
}

impl From<Walk> for WalkRepr {
    fn from(w: Walk) -> Self {
        WalkRepr {
            terms: w.terms().map(str::to_owned).collect(),
            entries: w.steps.iter().map(|s| s.entry.index() as u8).collect(),
        }
    }
}

impl Walk {
    pub fn trivial(v: impl Into<VertexId>) -> Self {
        Walk {
            vertices: vec![v.into()],
            steps: Vec::new(),
        }
    }

    pub fn push(&mut self, edge: impl Into<EdgeId>, entry: Slot, to: impl Into<VertexId>) {
        self.steps.push(Traversal {
            edge: edge.into(),
            entry,
        });
        self.vertices.push(to.into());
    }

    /// Builds a walk from an alternating id sequence, reading entry slots
    /// off the graph. A mixed loop is entered through the slot that keeps
    /// the walk directed, or the first slot when it opens the walk.
    pub fn from_terms<S: AsRef<str>>(g: &BidirectedGraph, terms: &[S]) -> Result<Self> {
        if terms.len().is_multiple_of(2) {
            return Err(Error::MalformedWalk {
                position: terms.len(),
                reason: "a walk has an odd number of terms".into(),
            });
        }
        let first = VertexId::from(terms[0].as_ref());
        g.require_vertex(&first)?;
        let mut walk = Walk::trivial(first);
        let mut arrival: Option<Sign> = None;
        for (i, pair) in terms[1..].chunks(2).enumerate() {
            let position = 2 * i + 2;
            let id = EdgeId::from(pair[0].as_ref());
            let to = VertexId::from(pair[1].as_ref());
            let edge = g.require_edge(&id)?;
            g.require_vertex(&to)?;
            let from = walk.end();
            let entry = if edge.is_loop() {
                if edge.is_mixed() {
                    match arrival {
                        Some(a) if edge.ends[0].sign == a => Slot::Second,
                        _ => Slot::First,
                    }
                } else {
                    Slot::First
                }
            } else {
                edge.slot_at(from).ok_or_else(|| Error::MalformedWalk {
                    position,
                    reason: format!("edge `{id}` is not incident to `{from}`"),
                })?
            };
            if edge.end(entry.other()).vertex != to {
                return Err(Error::MalformedWalk {
                    position,
                    reason: format!("edge `{id}` does not join `{from}` and `{to}`"),
                });
            }
            arrival = Some(edge.end(entry.other()).sign);
            walk.push(id, entry, to);
        }
        Ok(walk)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn steps(&self) -> &[Traversal] {
        &self.steps
    }

    pub fn start(&self) -> &VertexId {
        &self.vertices[0]
    }

    pub fn end(&self) -> &VertexId {
        self.vertices.last().expect("walks are nonempty")
    }

    pub fn edge_count(&self) -> usize {
        self.steps.len()
    }

    /// Number of terms `k`.
    pub fn term_count(&self) -> usize {
        self.vertices.len() + self.steps.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.start() == self.end()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = &EdgeId> + '_ {
        self.steps.iter().map(|s| &s.edge)
    }

    pub fn edge_set(&self) -> BTreeSet<EdgeId> {
        self.edge_ids().cloned().collect()
    }

    pub fn contains_edge(&self, id: &EdgeId) -> bool {
        self.steps.iter().any(|s| &s.edge == id)
    }

    /// Terms in order, as id strings.
    pub fn terms(&self) -> impl Iterator<Item = &str> + '_ {
        let mut out = Vec::with_capacity(self.term_count());
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                out.push(self.steps[i - 1].edge.as_str());
            }
            out.push(v.as_str());
        }
        out.into_iter()
    }

    pub fn reverse(&self) -> Walk {
        Walk {
            vertices: self.vertices.iter().rev().cloned().collect(),
            steps: self
                .steps
                .iter()
                .rev()
                .map(|s| Traversal {
                    edge: s.edge.clone(),
                    entry: s.entry.other(),
                })
                .collect(),
        }
    }

    pub fn concat(&self, other: &Walk) -> Result<Walk> {
        if self.end() != other.start() {
            return Err(Error::ConcatMismatch {
                left: self.end().clone(),
                right: other.start().clone(),
            });
        }
        let mut out = self.clone();
        out.vertices.extend(other.vertices[1..].iter().cloned());
        out.steps.extend(other.steps.iter().cloned());
        Ok(out)
    }

    /// The subwalk between vertex positions `from..=to` (0-based over
    /// vertex terms).
    pub fn subwalk(&self, from: usize, to: usize) -> Walk {
        assert!(from <= to && to < self.vertices.len(), "subwalk out of range");
        Walk {
            vertices: self.vertices[from..=to].to_vec(),
            steps: self.steps[from..to].to_vec(),
        }
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<&str> = self.terms().collect();
        write!(f, "({})", terms.join(", "))
    }
}

/// Sign of a walk at one of its ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EndSign {
    /// The one-vertex walk, which counts as both `(+,-)` and `(-,+)`.
    Trivial,
    Signed(Sign),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiwalkInfo {
    pub is_diwalk: bool,
    pub is_ditrail: bool,
    pub is_dipath: bool,
    pub start_sign: EndSign,
    pub end_sign: EndSign,
}

impl DiwalkInfo {
    /// Whether the walk is a diwalk whose end signs meet the given
    /// constraints (`None` = unconstrained).
    pub fn classifies(&self, start: Option<Sign>, end: Option<Sign>) -> bool {
        if !self.is_diwalk {
            return false;
        }
        match (self.start_sign, self.end_sign) {
            (EndSign::Signed(s), EndSign::Signed(t)) => {
                start.is_none_or(|x| x == s) && end.is_none_or(|x| x == t)
            }
            _ => trivial_classifies(start, end),
        }
    }
}

/// Whether the trivial ditrail is an `(start, end)`-ditrail.
pub fn trivial_classifies(start: Option<Sign>, end: Option<Sign>) -> bool {
    [(Sign::Plus, Sign::Minus), (Sign::Minus, Sign::Plus)]
        .iter()
        .any(|&(s, t)| start.is_none_or(|x| x == s) && end.is_none_or(|x| x == t))
}

/// Per-step (departure, arrival) signs after checking that every step
/// joins its flanking vertices through the recorded slots.
pub(crate) fn step_signs(g: &BidirectedGraph, w: &Walk) -> Result<Vec<(Sign, Sign)>> {
    for v in w.vertices() {
        g.require_vertex(v)?;
    }
    let mut out = Vec::with_capacity(w.edge_count());
    for (i, step) in w.steps().iter().enumerate() {
        let position = 2 * i + 2;
        let edge = g.require_edge(&step.edge)?;
        let (from, to) = (&w.vertices()[i], &w.vertices()[i + 1]);
        let entry = edge.end(step.entry);
        let exit = edge.end(step.entry.other());
        if &entry.vertex != from || &exit.vertex != to {
            return Err(Error::MalformedWalk {
                position,
                reason: format!(
                    "edge `{}` entered through slot {} does not lead from `{from}` to `{to}`",
                    step.edge,
                    step.entry.index()
                ),
            });
        }
        out.push((entry.sign, exit.sign));
    }
    Ok(out)
}

/// Classifies `w` against `g`: at every intermediate vertex term the
/// arrival and departure signs must differ. Entry slots fix the signs used
/// at mixed loops.
pub fn validate_diwalk(g: &BidirectedGraph, w: &Walk) -> Result<DiwalkInfo> {
    let signs = step_signs(g, w)?;
    let is_diwalk = signs.windows(2).all(|pair| pair[0].1 != pair[1].0);
    let distinct_edges = w.edge_set().len() == w.edge_count();
    let distinct_vertices = w.vertices().iter().collect::<BTreeSet<_>>().len() == w.vertices().len();
    let is_ditrail = is_diwalk && distinct_edges;
    let (start_sign, end_sign) = match (signs.first(), signs.last()) {
        (Some(first), Some(last)) => (EndSign::Signed(first.0), EndSign::Signed(last.1)),
        _ => (EndSign::Trivial, EndSign::Trivial),
    };
    Ok(DiwalkInfo {
        is_diwalk,
        is_ditrail,
        is_dipath: is_ditrail && distinct_vertices,
        start_sign,
        end_sign,
    })
}
