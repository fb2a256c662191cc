//! Ditrail reachability by exhaustive trail search.
//!
//! The search walks states `(vertex, arrival sign, used edges)` depth first,
//! leaving each vertex only through an unused end whose sign differs from
//! the arrival sign. Children are ordered by edge id and then entry slot, so
//! witnesses are reproducible. States already explored without success are
//! remembered and skipped; the set of completions of a state depends only on
//! the state itself.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{BidirectedGraph, EdgeId, Sign, Slot, VertexId};
use crate::walk::{trivial_classifies, Walk};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Required signs at the two ends of a ditrail; `None` means either.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SignConstraint {
    pub start: Option<Sign>,
    pub end: Option<Sign>,
}

impl SignConstraint {
    pub fn new(start: Sign, end: Sign) -> Self {
        SignConstraint {
            start: Some(start),
            end: Some(end),
        }
    }

    pub fn any() -> Self {
        Self::default()
    }

    /// An `s`-ditrail: first sign fixed, last sign free.
    pub fn starting(s: Sign) -> Self {
        SignConstraint {
            start: Some(s),
            end: None,
        }
    }

    pub fn admits_trivial(&self) -> bool {
        trivial_classifies(self.start, self.end)
    }
}

impl fmt::Display for SignConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |s: Option<Sign>| s.map_or('*', Sign::symbol);
        write!(f, "({},{})", show(self.start), show(self.end))
    }
}

/// A ditrail found by the oracle together with the signs that classify it.
/// For the trivial walk these are the classification that met the query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DitrailWitness {
    pub walk: Walk,
    pub start_sign: Sign,
    pub end_sign: Sign,
}

impl DitrailWitness {
    pub fn is_trivial(&self) -> bool {
        self.walk.is_trivial()
    }

    fn trivial(v: VertexId, c: SignConstraint) -> Self {
        let (start_sign, end_sign) = [(Sign::Plus, Sign::Minus), (Sign::Minus, Sign::Plus)]
            .into_iter()
            .find(|&(s, t)| c.start.is_none_or(|x| x == s) && c.end.is_none_or(|x| x == t))
            .expect("caller checked admits_trivial");
        DitrailWitness {
            walk: Walk::trivial(v),
            start_sign,
            end_sign,
        }
    }
}

impl fmt::Display for DitrailWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})-ditrail {}", self.start_sign, self.end_sign, self.walk)
    }
}

/// Growable bitset over edge indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub(crate) struct EdgeSet(Vec<u64>);

impl EdgeSet {
    pub(crate) fn with_capacity(n: usize) -> Self {
        EdgeSet(vec![0; n.div_ceil(64).max(1)])
    }

    pub(crate) fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub(crate) fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
}

#[derive(Debug, Clone, Copy)]
struct Incidence {
    edge: usize,
    entry: Slot,
    depart: Sign,
    arrive: Sign,
    to: usize,
}

/// Integer-indexed adjacency built once per graph.
#[derive(Debug, Clone)]
struct GraphIndex {
    vertex_ids: Vec<VertexId>,
    vertex_pos: BTreeMap<VertexId, usize>,
    edge_ids: Vec<EdgeId>,
    adj: Vec<Vec<Incidence>>,
}

impl GraphIndex {
    fn new(g: &BidirectedGraph) -> Self {
        let vertex_ids: Vec<VertexId> = g.vertices().cloned().collect();
        let vertex_pos: BTreeMap<VertexId, usize> =
            vertex_ids.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let mut adj = vec![Vec::new(); vertex_ids.len()];
        let mut edge_ids = Vec::with_capacity(g.edge_count());
        for (ei, e) in g.edges().enumerate() {
            edge_ids.push(e.id.clone());
            // a homogeneous loop is the same traversal through either slot
            let slots: &[Slot] = if e.is_loop() && !e.is_mixed() {
                &[Slot::First]
            } else {
                &[Slot::First, Slot::Second]
            };
            for &entry in slots {
                let (a, b) = (e.end(entry), e.end(entry.other()));
                adj[vertex_pos[&a.vertex]].push(Incidence {
                    edge: ei,
                    entry,
                    depart: a.sign,
                    arrive: b.sign,
                    to: vertex_pos[&b.vertex],
                });
            }
        }
        for list in &mut adj {
            list.sort_by_key(|inc| (inc.edge, inc.entry));
        }
        GraphIndex {
            vertex_ids,
            vertex_pos,
            edge_ids,
            adj,
        }
    }

    fn pos(&self, v: &VertexId) -> Result<usize> {
        self.vertex_pos
            .get(v)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(v.clone()))
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct TrailQuery {
    /// Skip the trivial walk even when it classifies.
    nontrivial: bool,
    /// The target may appear only as the final term.
    target_once: bool,
}

/// Ditrail oracle over one graph. Queries are independent; each gets the
/// full state budget.
#[derive(Debug, Clone)]
pub struct Oracle<'g> {
    graph: &'g BidirectedGraph,
    index: GraphIndex,
    budget: u64,
}

impl<'g> Oracle<'g> {
    pub fn new(graph: &'g BidirectedGraph) -> Self {
        Oracle {
            graph,
            index: GraphIndex::new(graph),
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn graph(&self) -> &'g BidirectedGraph {
        self.graph
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Some ditrail from `x` to `r` meeting `c`, the trivial one included.
    pub fn ditrail(
        &self,
        x: &VertexId,
        r: &VertexId,
        c: SignConstraint,
    ) -> Result<Option<DitrailWitness>> {
        self.first(x, r, c, TrailQuery::default())
    }

    /// Like [`Oracle::ditrail`] but never the trivial walk.
    pub fn nontrivial_ditrail(
        &self,
        x: &VertexId,
        r: &VertexId,
        c: SignConstraint,
    ) -> Result<Option<DitrailWitness>> {
        self.first(
            x,
            r,
            c,
            TrailQuery {
                nontrivial: true,
                ..Default::default()
            },
        )
    }

    /// A nontrivial closed ditrail over `r` meeting `c`.
    pub fn closed_ditrail(&self, r: &VertexId, c: SignConstraint) -> Result<Option<DitrailWitness>> {
        self.nontrivial_ditrail(r, r, c)
    }

    /// A ditrail from `x` to `r` in which `r` is only the last term.
    pub fn ditrail_meeting_target_once(
        &self,
        x: &VertexId,
        r: &VertexId,
        c: SignConstraint,
    ) -> Result<Option<DitrailWitness>> {
        self.first(
            x,
            r,
            c,
            TrailQuery {
                nontrivial: x == r,
                target_once: true,
            },
        )
    }

    /// Up to `limit` ditrails from `x` to `r` meeting `c`, in lexicographic
    /// order of their edge-id sequences.
    pub fn ditrails(
        &self,
        x: &VertexId,
        r: &VertexId,
        c: SignConstraint,
        limit: usize,
    ) -> Result<Vec<DitrailWitness>> {
        let mut out = Vec::new();
        if limit == 0 {
            return Ok(out);
        }
        self.search(x, r, c, TrailQuery::default(), &mut |w| {
            out.push(w);
            out.len() < limit
        })?;
        Ok(out)
    }

    fn first(
        &self,
        x: &VertexId,
        r: &VertexId,
        c: SignConstraint,
        q: TrailQuery,
    ) -> Result<Option<DitrailWitness>> {
        let mut found = None;
        self.search(x, r, c, q, &mut |w| {
            found = Some(w);
            false
        })?;
        Ok(found)
    }

    fn search(
        &self,
        x: &VertexId,
        r: &VertexId,
        c: SignConstraint,
        q: TrailQuery,
        emit: &mut dyn FnMut(DitrailWitness) -> bool,
    ) -> Result<()> {
        let xs = self.index.pos(x)?;
        let rs = self.index.pos(r)?;
        if xs == rs && !q.nontrivial && c.admits_trivial() && !emit(DitrailWitness::trivial(x.clone(), c)) {
            return Ok(());
        }
        let mut dfs = Dfs {
            index: &self.index,
            start_vertex: xs,
            target: rs,
            constraint: c,
            target_once: q.target_once,
            budget: self.budget,
            expanded: 0,
            dead: HashSet::new(),
            used: EdgeSet::with_capacity(self.index.edge_ids.len()),
            path: Vec::new(),
            emit,
        };
        dfs.visit(xs, None)?;
        Ok(())
    }
}

struct Dfs<'a, 'e> {
    index: &'a GraphIndex,
    start_vertex: usize,
    target: usize,
    constraint: SignConstraint,
    target_once: bool,
    budget: u64,
    expanded: u64,
    dead: HashSet<(usize, Option<Sign>, EdgeSet)>,
    used: EdgeSet,
    path: Vec<Incidence>,
    emit: &'e mut dyn FnMut(DitrailWitness) -> bool,
}

enum Outcome {
    Nothing,
    Emitted,
    Stop,
}

impl Dfs<'_, '_> {
    fn visit(&mut self, v: usize, arrival: Option<Sign>) -> Result<Outcome> {
        self.expanded += 1;
        if self.expanded > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        let key = (v, arrival, self.used.clone());
        if self.dead.contains(&key) {
            return Ok(Outcome::Nothing);
        }
        let mut emitted = false;
        if let Some(a) = arrival {
            if v == self.target && self.constraint.end.is_none_or(|e| e == a) {
                emitted = true;
                let w = self.witness();
                if !(self.emit)(w) {
                    return Ok(Outcome::Stop);
                }
            }
            if self.target_once && v == self.target {
                return Ok(if emitted { Outcome::Emitted } else { Outcome::Nothing });
            }
        }
        let index = self.index;
        for inc in &index.adj[v] {
            if self.used.contains(inc.edge) {
                continue;
            }
            match arrival {
                Some(a) if inc.depart == a => continue,
                None if self.constraint.start.is_some_and(|s| s != inc.depart) => continue,
                _ => {}
            }
            self.used.insert(inc.edge);
            self.path.push(*inc);
            let out = self.visit(inc.to, Some(inc.arrive));
            self.path.pop();
            self.used.remove(inc.edge);
            match out? {
                Outcome::Stop => return Ok(Outcome::Stop),
                Outcome::Emitted => emitted = true,
                Outcome::Nothing => {}
            }
        }
        if !emitted {
            self.dead.insert(key);
        }
        Ok(if emitted { Outcome::Emitted } else { Outcome::Nothing })
    }

    fn witness(&self) -> DitrailWitness {
        let ids = &self.index.vertex_ids;
        let mut walk = Walk::trivial(ids[self.start_vertex].clone());
        for inc in &self.path {
            walk.push(self.index.edge_ids[inc.edge].clone(), inc.entry, ids[inc.to].clone());
        }
        DitrailWitness {
            walk,
            start_sign: self.path.first().expect("nontrivial").depart,
            end_sign: self.path.last().expect("nontrivial").arrive,
        }
    }
}

pub fn exists_ditrail(
    g: &BidirectedGraph,
    x: &VertexId,
    r: &VertexId,
    c: SignConstraint,
) -> Result<Option<DitrailWitness>> {
    Oracle::new(g).ditrail(x, r, c)
}

pub fn exists_closed_ditrail(
    g: &BidirectedGraph,
    r: &VertexId,
    c: SignConstraint,
) -> Result<Option<DitrailWitness>> {
    Oracle::new(g).closed_ditrail(r, c)
}

pub fn enumerate_ditrails(
    g: &BidirectedGraph,
    x: &VertexId,
    r: &VertexId,
    c: SignConstraint,
    limit: usize,
) -> Result<Vec<DitrailWitness>> {
    Oracle::new(g).ditrails(x, r, c, limit)
}

/// Diwalk reachability, edges may repeat: a breadth-first closure over
/// `(vertex, arrival sign)`. Every ditrail is a diwalk, so this is a
/// necessary condition for [`exists_ditrail`] only.
pub fn diwalk_reachable(
    g: &BidirectedGraph,
    x: &VertexId,
    r: &VertexId,
    c: SignConstraint,
) -> Result<bool> {
    let index = GraphIndex::new(g);
    let xs = index.pos(x)?;
    let rs = index.pos(r)?;
    if xs == rs && c.admits_trivial() {
        return Ok(true);
    }
    let sign_bit = |s: Sign| match s {
        Sign::Plus => 0,
        Sign::Minus => 1,
    };
    let mut seen = vec![[false; 2]; index.vertex_ids.len()];
    let mut queue = VecDeque::new();
    for inc in &index.adj[xs] {
        if c.start.is_none_or(|s| s == inc.depart) && !seen[inc.to][sign_bit(inc.arrive)] {
            seen[inc.to][sign_bit(inc.arrive)] = true;
            queue.push_back((inc.to, inc.arrive));
        }
    }
    while let Some((v, a)) = queue.pop_front() {
        if v == rs && c.end.is_none_or(|e| e == a) {
            return Ok(true);
        }
        for inc in &index.adj[v] {
            if inc.depart != a && !seen[inc.to][sign_bit(inc.arrive)] {
                seen[inc.to][sign_bit(inc.arrive)] = true;
                queue.push_back((inc.to, inc.arrive));
            }
        }
    }
    Ok(false)
}
