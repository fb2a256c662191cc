//! The bidirected multigraph model.
//!
//! Every edge has two end slots, each carrying a vertex and a [`Sign`]. Loops
//! put both slots on the same vertex; the mixed `(+,-)`-loop is the one edge
//! whose traversal direction matters at a single vertex, which is why walks
//! record the slot they enter an edge through (see [`crate::walk`]).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::document::GraphDocument;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for Sign {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "+" | "plus" | "p" => Ok(Sign::Plus),
            "-" | "minus" | "m" => Ok(Sign::Minus),
            other => Err(format!("expected `+` or `-`, found `{other}`")),
        }
    }
}

macro_rules! string_id {
    ($name:ident) => {
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                $name(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(s)
            }
        }

        impl std::borrow::Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

string_id!(VertexId);
string_id!(EdgeId);

/// One of the two end slots of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    First,
    Second,
}

impl Slot {
    pub fn index(self) -> usize {
        match self {
            Slot::First => 0,
            Slot::Second => 1,
        }
    }

    pub fn other(self) -> Slot {
        match self {
            Slot::First => Slot::Second,
            Slot::Second => Slot::First,
        }
    }

    pub fn from_index(i: usize) -> Option<Slot> {
        match i {
            0 => Some(Slot::First),
            1 => Some(Slot::Second),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct End {
    #[serde(rename = "v")]
    pub vertex: VertexId,
    pub sign: Sign,
}

impl End {
    pub fn new(vertex: impl Into<VertexId>, sign: Sign) -> Self {
        End {
            vertex: vertex.into(),
            sign,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    /// `(+,+)` or `(-,-)`.
    Homogeneous(Sign),
    /// `(+,-)`.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeClass {
    pub kind: EdgeKind,
    pub is_loop: bool,
}

impl EdgeClass {
    pub fn is_mixed_loop(&self) -> bool {
        self.is_loop && self.kind == EdgeKind::Mixed
    }

    pub fn is_homogeneous(&self, sign: Sign) -> bool {
        self.kind == EdgeKind::Homogeneous(sign)
    }
}

impl fmt::Display for EdgeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            EdgeKind::Homogeneous(s) => write!(f, "({s},{s})")?,
            EdgeKind::Mixed => write!(f, "(+,-)")?,
        }
        if self.is_loop {
            write!(f, "-loop")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub ends: [End; 2],
}

impl Edge {
    pub fn new(id: impl Into<EdgeId>, first: End, second: End) -> Self {
        Edge {
            id: id.into(),
            ends: [first, second],
        }
    }

    pub fn end(&self, slot: Slot) -> &End {
        &self.ends[slot.index()]
    }

    pub fn is_loop(&self) -> bool {
        self.ends[0].vertex == self.ends[1].vertex
    }

    pub fn class(&self) -> EdgeClass {
        let kind = if self.ends[0].sign == self.ends[1].sign {
            EdgeKind::Homogeneous(self.ends[0].sign)
        } else {
            EdgeKind::Mixed
        };
        EdgeClass {
            kind,
            is_loop: self.is_loop(),
        }
    }

    pub fn is_mixed(&self) -> bool {
        self.ends[0].sign != self.ends[1].sign
    }

    pub fn is_homogeneous(&self, sign: Sign) -> bool {
        self.ends[0].sign == sign && self.ends[1].sign == sign
    }

    pub fn touches(&self, v: &VertexId) -> bool {
        self.ends.iter().any(|e| &e.vertex == v)
    }

    /// Whether some end at `v` carries `sign`.
    pub fn has_sign_at(&self, v: &VertexId, sign: Sign) -> bool {
        self.ends.iter().any(|e| &e.vertex == v && e.sign == sign)
    }

    /// Sign at `v` for a non-loop edge.
    pub fn sign_at(&self, v: &VertexId) -> Option<Sign> {
        if self.is_loop() {
            return None;
        }
        self.ends.iter().find(|e| &e.vertex == v).map(|e| e.sign)
    }

    /// For a non-loop edge, the end not at `v`.
    pub fn opposite(&self, v: &VertexId) -> Option<&End> {
        if self.is_loop() {
            return None;
        }
        match (&self.ends[0], &self.ends[1]) {
            (a, b) if &a.vertex == v => Some(b),
            (a, b) if &b.vertex == v => Some(a),
            _ => None,
        }
    }

    /// The slot whose vertex is `v`; for loops this is the first slot.
    pub fn slot_at(&self, v: &VertexId) -> Option<Slot> {
        if &self.ends[0].vertex == v {
            Some(Slot::First)
        } else if &self.ends[1].vertex == v {
            Some(Slot::Second)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = &self.ends;
        write!(f, "{}({}{},{}{})", self.id, a.sign, a.vertex, b.sign, b.vertex)
    }
}

/// A finite bidirected multigraph with string identifiers.
///
/// Iteration is always in lexicographic identifier order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphDocument", into = "GraphDocument")]
pub struct BidirectedGraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, Edge>,
}

impl BidirectedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(v: impl Into<VertexId>) -> Self {
        let mut g = Self::new();
        g.add_vertex(v);
        g
    }

    pub fn from_parts(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self> {
        let mut g = Self::new();
        for v in vertices {
            g.add_vertex(v);
        }
        for e in edges {
            g.add_edge(e)?;
        }
        Ok(g)
    }

    /// Parses the compact notation `r a b | ab(-a,-b) ar(+a,+r)`.
    ///
    /// Vertices named in edges are added implicitly.
    pub fn from_compact(text: &str) -> Result<Self> {
        let bad = |reason: String| Error::Precondition(format!("compact graph: {reason}"));
        let (vertex_part, edge_part) = match text.split_once('|') {
            Some((v, e)) => (v, e),
            None => (text, ""),
        };
        let mut g = Self::new();
        for v in vertex_part.split_whitespace() {
            g.add_vertex(v);
        }
        for token in edge_part.split_whitespace() {
            let (id, rest) = token
                .split_once('(')
                .ok_or_else(|| bad(format!("missing `(` in `{token}`")))?;
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| bad(format!("missing `)` in `{token}`")))?;
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| bad(format!("missing `,` in `{token}`")))?;
            let parse_end = |s: &str| -> Result<End> {
                let mut chars = s.chars();
                let sign = chars
                    .next()
                    .map(|c| c.to_string())
                    .ok_or_else(|| bad(format!("empty end in `{token}`")))?
                    .parse::<Sign>()
                    .map_err(bad)?;
                let vertex = chars.as_str();
                if vertex.is_empty() {
                    return Err(bad(format!("end without vertex in `{token}`")));
                }
                Ok(End::new(vertex, sign))
            };
            let (a, b) = (parse_end(a)?, parse_end(b)?);
            g.add_vertex(a.vertex.clone());
            g.add_vertex(b.vertex.clone());
            g.add_edge(Edge::new(id, a, b))?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: impl Into<VertexId>) -> bool {
        self.vertices.insert(v.into())
    }

    pub fn add_edge(&mut self, edge: Edge) -> Result<()> {
        for end in &edge.ends {
            if !self.vertices.contains(&end.vertex) {
                return Err(Error::UnknownVertex(end.vertex.clone()));
            }
        }
        if self.edges.contains_key(&edge.id) {
            return Err(Error::DuplicateEdge(edge.id));
        }
        self.edges.insert(edge.id.clone(), edge);
        Ok(())
    }

    /// Adds the edge together with any missing end vertices.
    pub fn add_edge_with_vertices(&mut self, edge: Edge) -> Result<()> {
        for end in &edge.ends {
            self.vertices.insert(end.vertex.clone());
        }
        self.add_edge(edge)
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = &VertexId> + '_ {
        self.vertices.iter()
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &Edge> + '_ {
        self.edges.values()
    }

    pub fn edge_ids(&self) -> impl ExactSizeIterator<Item = &EdgeId> + '_ {
        self.edges.keys()
    }

    pub fn edge(&self, id: &EdgeId) -> Option<&Edge> {
        self.edges.get(id)
    }

    pub fn has_vertex(&self, v: &VertexId) -> bool {
        self.vertices.contains(v)
    }

    pub fn has_edge(&self, id: &EdgeId) -> bool {
        self.edges.contains_key(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn require_vertex(&self, v: &VertexId) -> Result<()> {
        if self.has_vertex(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.clone()))
        }
    }

    pub fn require_edge(&self, id: &EdgeId) -> Result<&Edge> {
        self.edges.get(id).ok_or_else(|| Error::UnknownEdge(id.clone()))
    }

    pub fn incident_edges<'a>(&'a self, v: &'a VertexId) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.values().filter(move |e| e.touches(v))
    }

    pub fn loops_at<'a>(&'a self, v: &'a VertexId) -> impl Iterator<Item = &'a Edge> + 'a {
        self.incident_edges(v).filter(|e| e.is_loop())
    }

    pub fn classify_edge(&self, id: &EdgeId) -> Result<EdgeClass> {
        self.require_edge(id).map(Edge::class)
    }

    /// Edges with exactly one end in `set`. Loops never qualify.
    pub fn cut(&self, set: &BTreeSet<VertexId>) -> Result<BTreeSet<EdgeId>> {
        if let Some(v) = set.iter().find(|v| !self.has_vertex(v)) {
            return Err(Error::UnknownVertex(v.clone()));
        }
        Ok(self
            .edges
            .values()
            .filter(|e| set.contains(&e.ends[0].vertex) != set.contains(&e.ends[1].vertex))
            .map(|e| e.id.clone())
            .collect())
    }

    pub fn induced(&self, set: &BTreeSet<VertexId>) -> Result<Self> {
        if let Some(v) = set.iter().find(|v| !self.has_vertex(v)) {
            return Err(Error::UnknownVertex(v.clone()));
        }
        Ok(BidirectedGraph {
            vertices: set.clone(),
            edges: self
                .edges
                .iter()
                .filter(|(_, e)| e.ends.iter().all(|end| set.contains(&end.vertex)))
                .map(|(k, e)| (k.clone(), e.clone()))
                .collect(),
        })
    }

    /// `G - v`.
    pub fn remove_vertex(&self, v: &VertexId) -> Result<Self> {
        self.require_vertex(v)?;
        let rest: BTreeSet<VertexId> = self.vertices.iter().filter(|u| *u != v).cloned().collect();
        self.induced(&rest)
    }

    pub fn remove_edges<'a>(&self, ids: impl IntoIterator<Item = &'a EdgeId>) -> Result<Self> {
        let mut g = self.clone();
        for id in ids {
            if g.edges.remove(id).is_none() {
                return Err(Error::UnknownEdge(id.clone()));
            }
        }
        Ok(g)
    }

    /// `G1 + G2`. Shared edge ids must denote the same edge.
    pub fn union(&self, other: &Self) -> Result<Self> {
        let mut g = self.clone();
        g.vertices.extend(other.vertices.iter().cloned());
        for (id, e) in &other.edges {
            match g.edges.get(id) {
                Some(existing) if existing != e => return Err(Error::ConflictingEdge(id.clone())),
                Some(_) => {}
                None => {
                    g.edges.insert(id.clone(), e.clone());
                }
            }
        }
        Ok(g)
    }

    pub fn is_subgraph_of(&self, other: &Self) -> bool {
        self.vertices.is_subset(&other.vertices)
            && self
                .edges
                .iter()
                .all(|(id, e)| other.edges.get(id) == Some(e))
    }

    /// Connected components of the underlying undirected graph, each sorted,
    /// listed in order of their least vertex.
    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut neighbours: BTreeMap<&VertexId, Vec<&VertexId>> =
            self.vertices.iter().map(|v| (v, Vec::new())).collect();
        for e in self.edges.values() {
            let (a, b) = (&e.ends[0].vertex, &e.ends[1].vertex);
            if a != b {
                neighbours.get_mut(a).expect("end vertex").push(b);
                neighbours.get_mut(b).expect("end vertex").push(a);
            }
        }
        let mut seen: BTreeSet<&VertexId> = BTreeSet::new();
        let mut out = Vec::new();
        for start in &self.vertices {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                comp.insert(v.clone());
                for &w in &neighbours[v] {
                    if seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Blocks of `G` over `v`: one induced subgraph `G[V(C) + v]` per
    /// component `C` of `G - v`, ordered by least vertex of `C`.
    ///
    /// Loops at `v` lie in no `G - v` component; they go to the first block.
    /// With zero or one component the whole graph is the only block.
    pub fn blocks_over(&self, v: &VertexId) -> Result<Vec<Self>> {
        self.require_vertex(v)?;
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let comps = self.remove_vertex(v)?.components();
        if comps.len() <= 1 {
            return Ok(vec![self.clone()]);
        }
        let mut blocks = Vec::with_capacity(comps.len());
        for (i, mut comp) in comps.into_iter().enumerate() {
            comp.insert(v.clone());
            let mut block = self.induced(&comp)?;
            if i > 0 {
                let loops: Vec<EdgeId> = block.loops_at(v).map(|e| e.id.clone()).collect();
                for id in loops {
                    block.edges.remove(&id);
                }
            }
            blocks.push(block);
        }
        Ok(blocks)
    }

    /// An edge id not yet used, derived from `base`.
    pub fn fresh_edge_id(&self, base: &str) -> EdgeId {
        if !self.edges.contains_key(base) {
            return EdgeId::new(base);
        }
        (1..)
            .map(|i| format!("{base}#{i}"))
            .find(|cand| !self.edges.contains_key(cand.as_str()))
            .map(EdgeId::new)
            .expect("unbounded search")
    }
}

impl fmt::Display for BidirectedGraph {
    /// Compact notation accepted by [`BidirectedGraph::from_compact`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<&str> = self.vertices.iter().map(VertexId::as_str).collect();
        write!(f, "{} |", vs.join(" "))?;
        for e in self.edges.values() {
            write!(f, " {e}")?;
        }
        Ok(())
    }
}
