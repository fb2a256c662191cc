//! Digraphic bidirected graphs, where every edge is a `(+,-)`-edge.
//!
//! Read with a sign `alpha`, each edge is an arc from its `alpha` end to its
//! `-alpha` end. Strong components do not depend on `alpha`; the order
//! between them is reversed when `alpha` flips.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BidirectedGraph, Edge, EdgeId, End, Sign, Slot, VertexId};
use crate::walk::{validate_diwalk, Walk};

pub fn is_digraphic(g: &BidirectedGraph) -> bool {
    g.edges().all(Edge::is_mixed)
}

pub fn require_digraphic(g: &BidirectedGraph) -> Result<()> {
    match g.edges().find(|e| !e.is_mixed()) {
        Some(e) => Err(Error::NotDigraphic(e.id.clone())),
        None => Ok(()),
    }
}

/// Tail and head of a mixed edge read with sign `alpha`.
fn arc_ends(e: &Edge, alpha: Sign) -> (&VertexId, &VertexId, Slot) {
    let tail = if e.ends[0].sign == alpha {
        Slot::First
    } else {
        Slot::Second
    };
    (&e.end(tail).vertex, &e.end(tail.other()).vertex, tail)
}

/// Strong component decomposition of an `alpha`-digraphic graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SccPoset {
    pub alpha: Sign,
    /// Sorted vertex lists, ordered by least vertex.
    pub components: Vec<Vec<VertexId>>,
    /// The reflexive, transitive order as index pairs `(i, j)`: `i` precedes `j`.
    #[serde(skip)]
    pub order: BTreeSet<(usize, usize)>,
}

impl SccPoset {
    pub fn component_of(&self, v: &VertexId) -> Option<usize> {
        self.components.iter().position(|c| c.binary_search(v).is_ok())
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.order.contains(&(i, j))
    }

    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        self.order.iter().copied().filter(|(i, j)| i != j).collect()
    }

    /// Components with nothing strictly above them.
    pub fn maximal(&self) -> Vec<usize> {
        (0..self.components.len())
            .filter(|&i| !self.order.iter().any(|&(a, b)| a == i && b != i))
            .collect()
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.components.len()).find(|&m| (0..self.components.len()).all(|i| self.leq(i, m)))
    }
}

/// Tarjan's algorithm over integer adjacency; components in completion order.
fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        adj: &'a [Vec<usize>],
        counter: usize,
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        out: Vec<Vec<usize>>,
    }

    fn connect(s: &mut State<'_>, v: usize) {
        s.index[v] = Some(s.counter);
        s.low[v] = s.counter;
        s.counter += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for i in 0..s.adj[v].len() {
            let w = s.adj[v][i];
            match s.index[w] {
                None => {
                    connect(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                Some(_) => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = s.stack.pop().expect("stack holds v");
                s.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            s.out.push(comp);
        }
    }

    let n = adj.len();
    let mut s = State {
        adj,
        counter: 0,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        out: Vec::new(),
    };
    for v in 0..n {
        if s.index[v].is_none() {
            connect(&mut s, v);
        }
    }
    s.out
}

pub fn scc_poset(g: &BidirectedGraph, alpha: Sign) -> Result<SccPoset> {
    require_digraphic(g)?;
    let ids: Vec<&VertexId> = g.vertices().collect();
    let pos: BTreeMap<&VertexId, usize> = ids.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut adj = vec![Vec::new(); ids.len()];
    for e in g.edges() {
        let (t, h, _) = arc_ends(e, alpha);
        adj[pos[t]].push(pos[h]);
    }

    let mut components: Vec<Vec<VertexId>> = tarjan(&adj)
        .into_iter()
        .map(|c| {
            let mut vs: Vec<VertexId> = c.into_iter().map(|i| ids[i].clone()).collect();
            vs.sort();
            vs
        })
        .collect();
    components.sort();

    let mut comp_of = vec![0; ids.len()];
    for (ci, comp) in components.iter().enumerate() {
        for v in comp {
            comp_of[pos[v]] = ci;
        }
    }
    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); components.len()];
    for (v, outs) in adj.iter().enumerate() {
        for &w in outs {
            if comp_of[v] != comp_of[w] {
                succ[comp_of[v]].insert(comp_of[w]);
            }
        }
    }
    let mut order = BTreeSet::new();
    for start in 0..components.len() {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            for &d in &succ[c] {
                if seen.insert(d) {
                    stack.push(d);
                }
            }
        }
        order.extend(seen.into_iter().map(|d| (start, d)));
    }
    Ok(SccPoset {
        alpha,
        components,
        order,
    })
}

pub fn is_strongly_connected(g: &BidirectedGraph) -> Result<bool> {
    Ok(scc_poset(g, Sign::Plus)?.components.len() <= 1)
}

/// Whether `g` read with `alpha` is a flowgraph with root `r`: the strong
/// component of `r` is the maximum of the decomposition.
pub fn is_flowgraph(g: &BidirectedGraph, r: &VertexId, alpha: Sign) -> Result<bool> {
    g.require_vertex(r)?;
    let poset = scc_poset(g, alpha)?;
    Ok(poset.maximum() == poset.component_of(r))
}

/// An extra arc for [`realize_poset`], read with the same sign as the order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtraArc {
    pub id: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
}

/// Builds a digraphic graph whose `alpha`-decomposition is the given pieces
/// under the given order: one arc per covering pair between the least
/// vertices of the two pieces, then the extra arcs.
///
/// `order` holds pairs `(i, j)` meaning piece `i` precedes piece `j`;
/// reflexive pairs may be omitted.
pub fn realize_poset(
    pieces: &[BidirectedGraph],
    order: &BTreeSet<(usize, usize)>,
    extra: &[ExtraArc],
    alpha: Sign,
) -> Result<BidirectedGraph> {
    let n = pieces.len();
    let mut g = BidirectedGraph::new();
    let mut owner: BTreeMap<&VertexId, usize> = BTreeMap::new();
    for (i, piece) in pieces.iter().enumerate() {
        require_digraphic(piece)?;
        if piece.vertex_count() == 0 {
            return Err(Error::InvalidOrder(format!("piece {i} is empty")));
        }
        if !is_strongly_connected(piece)? {
            return Err(Error::NotStronglyConnected);
        }
        for v in piece.vertices() {
            if owner.insert(v, i).is_some() {
                return Err(Error::OverlappingPieces(v.clone()));
            }
        }
        g = g.union(piece)?;
    }

    let strict: BTreeSet<(usize, usize)> = order.iter().copied().filter(|(i, j)| i != j).collect();
    for &(i, j) in &strict {
        if i >= n || j >= n {
            return Err(Error::InvalidOrder(format!("pair ({i}, {j}) names a missing piece")));
        }
        if strict.contains(&(j, i)) {
            return Err(Error::InvalidOrder(format!("pieces {i} and {j} precede each other")));
        }
        for &(k, l) in &strict {
            if k == j && l != i && !strict.contains(&(i, l)) {
                return Err(Error::InvalidOrder(format!(
                    "not transitive: ({i}, {j}) and ({j}, {l}) without ({i}, {l})"
                )));
            }
        }
    }

    let least = |i: usize| pieces[i].vertices().next().expect("nonempty").clone();
    let arc = |g: &BidirectedGraph, id: EdgeId, tail: VertexId, head: VertexId| -> Result<Edge> {
        if g.has_edge(&id) {
            return Err(Error::DuplicateEdge(id));
        }
        Ok(Edge::new(id, End::new(tail, alpha), End::new(head, -alpha)))
    };
    for &(i, j) in &strict {
        let covering = !(0..n).any(|k| strict.contains(&(i, k)) && strict.contains(&(k, j)));
        if covering {
            let id = g.fresh_edge_id(&format!("cover{i}_{j}"));
            let e = arc(&g, id, least(i), least(j))?;
            g.add_edge(e)?;
        }
    }
    for x in extra {
        let (ti, hi) = match (owner.get(&x.tail), owner.get(&x.head)) {
            (Some(&t), Some(&h)) => (t, h),
            _ => {
                return Err(Error::InvalidArc(format!(
                    "arc `{}` has an end outside every piece",
                    x.id
                )))
            }
        };
        if ti != hi && !strict.contains(&(ti, hi)) {
            return Err(Error::InvalidArc(format!(
                "arc `{}` goes from piece {ti} to piece {hi}, which does not follow it",
                x.id
            )));
        }
        let e = arc(&g, x.id.clone(), x.tail.clone(), x.head.clone())?;
        g.add_edge(e)?;
    }
    Ok(g)
}

/// One ear of a strongly connected digraphic graph: a (possibly closed)
/// ditrail over fresh edges whose ends lie on the graph built so far.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphEar {
    pub walk: Walk,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EarProgramD {
    pub base: VertexId,
    pub ears: Vec<DigraphEar>,
}

pub fn strong_ears_build(p: &EarProgramD) -> Result<BidirectedGraph> {
    let mut g = BidirectedGraph::single(p.base.clone());
    for (index, ear) in p.ears.iter().enumerate() {
        let fail = |reason: String| Error::Replay {
            rule: "strong-ear",
            index,
            reason,
        };
        for end in [ear.walk.start(), ear.walk.end()] {
            if !g.has_vertex(end) {
                return Err(fail(format!("end `{end}` is not on the graph built so far")));
            }
        }
        let mut next = g.clone();
        for e in &ear.edges {
            if !e.is_mixed() {
                return Err(fail(format!("edge `{}` is not a (+,-)-edge", e.id)));
            }
            if g.has_edge(&e.id) {
                return Err(fail(format!("edge `{}` is already present", e.id)));
            }
            next.add_edge_with_vertices(e.clone()).map_err(|err| fail(err.to_string()))?;
        }
        let declared: BTreeSet<&EdgeId> = ear.edges.iter().map(|e| &e.id).collect();
        let used: BTreeSet<&EdgeId> = ear.walk.edge_ids().collect();
        if declared != used || ear.walk.is_trivial() {
            return Err(fail("walk edges differ from the declared new edges".into()));
        }
        let info = validate_diwalk(&next, &ear.walk).map_err(|err| fail(err.to_string()))?;
        if !info.is_ditrail {
            return Err(fail(format!("{} is not a ditrail", ear.walk)));
        }
        g = next;
    }
    Ok(g)
}

/// Greedy ear decomposition of a strongly connected digraphic graph.
///
/// Starting from the least vertex, repeatedly take the least edge not yet
/// used whose `+` end is on the current graph, and close it back onto the
/// graph along a shortest path of unused arcs.
pub fn strong_ears_extract(g: &BidirectedGraph) -> Result<EarProgramD> {
    require_digraphic(g)?;
    let Some(base) = g.vertices().next().cloned() else {
        return Err(Error::Precondition("empty graph".into()));
    };
    if !is_strongly_connected(g)? {
        return Err(Error::NotStronglyConnected);
    }
    let alpha = Sign::Plus;
    let mut vertices = BTreeSet::from([base.clone()]);
    let mut used: BTreeSet<EdgeId> = BTreeSet::new();
    let mut ears = Vec::new();
    while used.len() < g.edge_count() {
        let first = g
            .edges()
            .find(|e| !used.contains(&e.id) && vertices.contains(arc_ends(e, alpha).0))
            .ok_or_else(|| Error::Invariant("no arc leaves the partial graph".into()))?;
        let (tail, head, slot) = arc_ends(first, alpha);
        let mut walk = Walk::trivial(tail.clone());
        walk.push(first.id.clone(), slot, head.clone());
        if !vertices.contains(head) {
            // breadth-first back to the partial graph through fresh vertices
            let mut pred: BTreeMap<&VertexId, (&Edge, Slot, &VertexId)> = BTreeMap::new();
            let mut queue = VecDeque::from([head]);
            let mut seen = BTreeSet::from([head]);
            let mut hit = None;
            while let Some(v) = queue.pop_front() {
                for e in g.edges() {
                    if used.contains(&e.id) || e.id == first.id {
                        continue;
                    }
                    let (t, h, s) = arc_ends(e, alpha);
                    if t != v || seen.contains(h) {
                        continue;
                    }
                    pred.insert(h, (e, s, v));
                    if vertices.contains(h) {
                        hit = Some(h);
                        break;
                    }
                    seen.insert(h);
                    queue.push_back(h);
                }
                if hit.is_some() {
                    break;
                }
            }
            let mut at = hit.ok_or(Error::NotStronglyConnected)?;
            let mut back = Vec::new();
            while at != head {
                let (e, s, from) = pred[at];
                back.push((e, s, at));
                at = from;
            }
            for (e, s, to) in back.into_iter().rev() {
                walk.push(e.id.clone(), s, to.clone());
            }
        }
        let edges: Vec<Edge> = walk
            .edge_set()
            .iter()
            .map(|id| g.edge(id).expect("edge of g").clone())
            .collect();
        for e in &edges {
            used.insert(e.id.clone());
            vertices.extend(e.ends.iter().map(|end| end.vertex.clone()));
        }
        ears.push(DigraphEar { walk, edges });
    }
    Ok(EarProgramD { base, ears })
}
