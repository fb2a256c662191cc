//! Shared fixtures: the exhaustive small-graph family and a brute-force
//! ditrail enumerator that shares no code with the oracle's search.

#![allow(dead_code)]

use std::collections::BTreeSet;

use bidigraph::walk::Walk;
use bidigraph::{validate_diwalk, BidirectedGraph, Edge, End, Sign, Slot, VertexId};

use Sign::{Minus, Plus};

/// Every edge shape on `{r, a, b}`: the three vertex pairs with all four
/// sign patterns, and loops at each vertex with `(+,+)`, `(-,-)`, `(+,-)`.
pub fn edge_shapes() -> Vec<(&'static str, Sign, &'static str, Sign)> {
    let mut shapes = Vec::new();
    for (u, v) in [("r", "a"), ("r", "b"), ("a", "b")] {
        for s in Sign::BOTH {
            for t in Sign::BOTH {
                shapes.push((u, s, v, t));
            }
        }
    }
    for v in ["a", "b", "r"] {
        for (s, t) in [(Plus, Plus), (Minus, Minus), (Plus, Minus)] {
            shapes.push((v, s, v, t));
        }
    }
    shapes
}

/// All graphs on `{r, a, b}` whose edges form a multiset of at most three
/// shapes from [`edge_shapes`].
pub fn small_graphs() -> Vec<BidirectedGraph> {
    let shapes = edge_shapes();
    let n = shapes.len();
    let mut choices: Vec<Vec<usize>> = vec![vec![]];
    for i in 0..n {
        choices.push(vec![i]);
        for j in i..n {
            choices.push(vec![i, j]);
            for k in j..n {
                choices.push(vec![i, j, k]);
            }
        }
    }
    choices
        .into_iter()
        .map(|picked| {
            let mut g = BidirectedGraph::from_compact("r a b").expect("vertices");
            for (idx, &s) in picked.iter().enumerate() {
                let (u, su, v, sv) = shapes[s];
                g.add_edge(Edge::new(format!("e{idx}"), End::new(u, su), End::new(v, sv)))
                    .expect("fresh edge");
            }
            g
        })
        .collect()
}

/// `(from, to, start sign, end sign, nontrivial)` for every ditrail of `g`,
/// by trying every sequence of distinct edges in every direction.
pub fn brute_force_ditrails(g: &BidirectedGraph) -> BTreeSet<(VertexId, VertexId, Sign, Sign, bool)> {
    let mut out = BTreeSet::new();
    for v in g.vertices() {
        out.insert((v.clone(), v.clone(), Plus, Minus, false));
        out.insert((v.clone(), v.clone(), Minus, Plus, false));
    }
    let edges: Vec<&Edge> = g.edges().collect();
    let mut stack: Vec<(Walk, Vec<bool>)> = Vec::new();
    for (i, e) in edges.iter().enumerate() {
        for slot in [Slot::First, Slot::Second] {
            let mut w = Walk::trivial(e.end(slot).vertex.clone());
            w.push(e.id.clone(), slot, e.end(slot.other()).vertex.clone());
            let mut used = vec![false; edges.len()];
            used[i] = true;
            stack.push((w, used));
        }
    }
    while let Some((w, used)) = stack.pop() {
        let info = validate_diwalk(g, &w).expect("well-formed");
        if !info.is_ditrail {
            // every extension of a non-ditrail is a non-ditrail
            continue;
        }
        let sign = |s| match s {
            bidigraph::EndSign::Signed(s) => s,
            bidigraph::EndSign::Trivial => unreachable!("nontrivial walk"),
        };
        out.insert((w.start().clone(), w.end().clone(), sign(info.start_sign), sign(info.end_sign), true));
        for (i, e) in edges.iter().enumerate() {
            if used[i] {
                continue;
            }
            for slot in [Slot::First, Slot::Second] {
                if &e.end(slot).vertex != w.end() {
                    continue;
                }
                let mut next = w.clone();
                next.push(e.id.clone(), slot, e.end(slot.other()).vertex.clone());
                let mut now = used.clone();
                now[i] = true;
                stack.push((next, now));
            }
        }
    }
    out
}
