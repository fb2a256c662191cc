//! Seeded certificate generation. Every generator follows the construction
//! rules of its class only, so replay never fails; sizes are upper bounds.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraphic::{realize_poset, scc_poset, strong_ears_build, DigraphEar, EarProgramD, ExtraArc};
use crate::error::{Error, Result};
use crate::graph::{BidirectedGraph, Edge, EdgeId, End, Sign, Slot, VertexId};
use crate::radials::ClassLabel;
use crate::walk::Walk;

use super::almost::{replay_almost_strong, AlmostStrongTree};
use super::linear::{LinearCore, SublinearCore};
use super::program::{EarProgram, EarStep};
use super::Certificate;

/// Hands out fresh names `v0, v1, ...` and `e0, e1, ...`, skipping the root.
#[derive(Debug, Clone)]
pub struct Namer {
    root: VertexId,
    vertices: usize,
    edges: usize,
}

impl Namer {
    pub fn new(root: VertexId) -> Self {
        Namer {
            root,
            vertices: 0,
            edges: 0,
        }
    }

    pub fn vertex(&mut self) -> VertexId {
        loop {
            let v = VertexId::new(format!("v{}", self.vertices));
            self.vertices += 1;
            if v != self.root {
                return v;
            }
        }
    }

    pub fn edge(&mut self) -> EdgeId {
        let e = EdgeId::new(format!("e{}", self.edges));
        self.edges += 1;
        e
    }
}

pub fn random_sign(rng: &mut impl Rng) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn pick<'a, T>(rng: &mut impl Rng, items: &'a [T]) -> &'a T {
    items.choose(rng).expect("nonempty")
}

/// Remaining new vertices and edges.
#[derive(Debug, Clone, Copy)]
struct Budget {
    vertices: usize,
    edges: usize,
}

/// A walk `from -> fresh interior -> to` over new edges, departing with
/// `depart` and arriving with `arrive`; interior signs alternate legally.
fn fresh_ditrail(
    rng: &mut impl Rng,
    names: &mut Namer,
    from: &VertexId,
    to: &VertexId,
    interior: usize,
    depart: Sign,
    arrive: Sign,
) -> EarStep {
    let mut walk = Walk::trivial(from.clone());
    let mut edges = Vec::new();
    let (mut at, mut out) = (from.clone(), depart);
    for i in 0..=interior {
        let (next, sign_in) = if i == interior {
            (to.clone(), arrive)
        } else {
            (names.vertex(), random_sign(rng))
        };
        let e = Edge::new(names.edge(), End::new(at.clone(), out), End::new(next.clone(), sign_in));
        walk.push(e.id.clone(), Slot::First, next.clone());
        edges.push(e);
        at = next;
        out = -sign_in;
    }
    EarStep { walk, edges }
}

/// A random diear relative to `h` within the budget, or `None` when no
/// edge is left.
fn random_ear(rng: &mut impl Rng, names: &mut Namer, h: &BidirectedGraph, budget: &mut Budget) -> Option<EarStep> {
    if budget.edges == 0 {
        return None;
    }
    let vs: Vec<VertexId> = h.vertices().cloned().collect();
    let can_scoop = budget.vertices >= 1 && budget.edges >= 2;
    if can_scoop && rng.gen_bool(0.3) {
        let m = rng.gen_range(0..=(budget.vertices - 1).min(budget.edges - 2));
        let v = pick(rng, &vs).clone();
        let y = names.vertex();
        let gamma = random_sign(rng);
        let grip = Edge::new(names.edge(), End::new(v.clone(), random_sign(rng)), End::new(y.clone(), gamma));
        let inner = fresh_ditrail(rng, names, &y, &y, m, -gamma, -gamma);
        let mut walk = Walk::trivial(v.clone());
        walk.push(grip.id.clone(), Slot::First, y.clone());
        let mut walk = walk.concat(&inner.walk).expect("meets at y");
        walk.push(grip.id.clone(), Slot::Second, v);
        let mut edges = inner.edges;
        edges.push(grip);
        budget.vertices -= m + 1;
        budget.edges -= m + 2;
        return Some(EarStep { walk, edges });
    }
    let k = rng.gen_range(0..=budget.vertices.min(budget.edges - 1));
    let (u, w) = (pick(rng, &vs).clone(), pick(rng, &vs).clone());
    let (depart, arrive) = (random_sign(rng), random_sign(rng));
    let step = fresh_ditrail(rng, names, &u, &w, k, depart, arrive);
    budget.vertices -= k;
    budget.edges -= k + 1;
    Some(step)
}

/// Attaches random ears to `h` until roughly `target` edges are spent.
fn random_ears(rng: &mut impl Rng, names: &mut Namer, mut h: BidirectedGraph, budget: &mut Budget, target: usize) -> Vec<EarStep> {
    let mut ears = Vec::new();
    let stop_at = budget.edges.saturating_sub(target);
    while budget.edges > stop_at {
        let Some(step) = random_ear(rng, names, &h, budget) else {
            break;
        };
        for e in &step.edges {
            h.add_edge_with_vertices(e.clone()).expect("fresh edge");
        }
        ears.push(step);
    }
    ears
}

fn random_strong(rng: &mut impl Rng, names: &mut Namer, root: &VertexId, alpha: Sign, budget: &mut Budget) -> Result<EarProgram> {
    if budget.edges == 0 {
        return Err(Error::UnsatisfiableSize("a strong radial needs at least one edge".into()));
    }
    let k = rng.gen_range(0..=budget.vertices.min(budget.edges - 1));
    let initial = fresh_ditrail(rng, names, root, root, k, -alpha, -alpha);
    budget.vertices -= k;
    budget.edges -= k + 1;
    let mut h = BidirectedGraph::single(root.clone());
    for e in &initial.edges {
        h.add_edge_with_vertices(e.clone())?;
    }
    let target = rng.gen_range(0..=budget.edges);
    let ears = random_ears(rng, names, h, budget, target);
    Ok(EarProgram {
        root: root.clone(),
        alpha: Some(alpha),
        initial: Some(initial),
        ears,
    })
}

/// A strongly connected digraphic graph on `size` vertices (the first one
/// `base`), grown by arc ears; spends from `pool`, which must hold at least
/// `size` edges when `size >= 2`.
pub fn random_strong_piece(rng: &mut impl Rng, names: &mut Namer, base: VertexId, size: usize, pool: &mut usize) -> Result<BidirectedGraph> {
    let arc = |names: &mut Namer, t: &VertexId, h: &VertexId| {
        Edge::new(names.edge(), End::new(t.clone(), Sign::Plus), End::new(h.clone(), Sign::Minus))
    };
    let mut ears = Vec::new();
    let mut current = vec![base.clone()];
    let mut fresh = size - 1;
    if fresh > 0 {
        *pool -= fresh + 1;
    }
    while fresh > 0 {
        let mut k = rng.gen_range(1..=fresh);
        if k < fresh {
            if *pool == 0 {
                k = fresh;
            } else {
                *pool -= 1;
            }
        }
        let (u, w) = (pick(rng, &current).clone(), pick(rng, &current).clone());
        let mut walk = Walk::trivial(u.clone());
        let mut edges = Vec::new();
        let mut at = u;
        for i in 0..=k {
            let next = if i == k { w.clone() } else { names.vertex() };
            let e = arc(names, &at, &next);
            walk.push(e.id.clone(), Slot::First, next.clone());
            edges.push(e);
            if i < k {
                current.push(next.clone());
            }
            at = next;
        }
        ears.push(DigraphEar { walk, edges });
        fresh -= k;
    }
    while *pool > 0 && rng.gen_bool(0.25) {
        let (u, w) = (pick(rng, &current).clone(), pick(rng, &current).clone());
        let e = arc(names, &u, &w);
        let mut walk = Walk::trivial(u);
        walk.push(e.id.clone(), Slot::First, w);
        ears.push(DigraphEar { walk, edges: vec![e] });
        *pool -= 1;
    }
    strong_ears_build(&EarProgramD { base, ears })
}

/// A random partial order on `0..n` compatible with the index order,
/// as its reflexive-free transitive closure.
pub fn random_partial_order(rng: &mut impl Rng, n: usize, density: f64) -> BTreeSet<(usize, usize)> {
    let mut order = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                order.insert((i, j));
            }
        }
    }
    transitive_closure(n, order)
}

fn transitive_closure(n: usize, mut order: BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if order.contains(&(i, k)) && order.contains(&(k, j)) && i != j {
                    order.insert((i, j));
                }
            }
        }
    }
    order
}

fn covering_count(n: usize, order: &BTreeSet<(usize, usize)>) -> usize {
    order
        .iter()
        .filter(|&&(i, j)| !(0..n).any(|k| order.contains(&(i, k)) && order.contains(&(k, j))))
        .count()
}

/// Splits `n` vertices into strongly connected pieces, the first one based
/// at `first` when given.
fn random_pieces(rng: &mut impl Rng, names: &mut Namer, n: usize, first: Option<VertexId>, pool: &mut usize) -> Result<Vec<BidirectedGraph>> {
    let mut pieces = Vec::new();
    let mut remaining = n;
    let mut first = first;
    while remaining > 0 {
        let mut size = rng.gen_range(1..=remaining);
        if size >= 2 && *pool < size {
            size = 1;
        }
        let base = first.take().unwrap_or_else(|| names.vertex());
        pieces.push(random_strong_piece(rng, names, base, size, pool)?);
        remaining -= size;
    }
    Ok(pieces)
}

/// Realizes `order` on `pieces` plus random extra arcs, falling back to
/// `fallback` when the covering arcs do not fit in `pool`.
fn realize_random(
    rng: &mut impl Rng,
    names: &mut Namer,
    pieces: &[BidirectedGraph],
    order: BTreeSet<(usize, usize)>,
    fallback: BTreeSet<(usize, usize)>,
    alpha: Sign,
    pool: &mut usize,
) -> Result<BidirectedGraph> {
    let n = pieces.len();
    let order = if covering_count(n, &order) <= *pool { order } else { fallback };
    *pool -= covering_count(n, &order);
    let mut extra = Vec::new();
    let mut allowed: Vec<(usize, usize)> = order.iter().copied().collect();
    allowed.extend((0..n).map(|i| (i, i)));
    while *pool > 0 && n > 0 && rng.gen_bool(0.3) {
        let &(i, j) = pick(rng, &allowed);
        let tail = pick(rng, &pieces[i].vertices().cloned().collect::<Vec<_>>()).clone();
        let head = pick(rng, &pieces[j].vertices().cloned().collect::<Vec<_>>()).clone();
        extra.push(ExtraArc {
            id: names.edge(),
            tail,
            head,
        });
        *pool -= 1;
    }
    realize_poset(pieces, &order, &extra, alpha)
}

fn homogeneous(names: &mut Namer, u: &VertexId, v: &VertexId, s: Sign) -> Edge {
    Edge::new(names.edge(), End::new(u.clone(), s), End::new(v.clone(), s))
}

/// An edge signed `alpha` at `u` and randomly at the root.
fn contact(rng: &mut impl Rng, names: &mut Namer, u: &VertexId, r: &VertexId, alpha: Sign) -> Edge {
    Edge::new(names.edge(), End::new(u.clone(), alpha), End::new(r.clone(), random_sign(rng)))
}

fn random_linear(rng: &mut impl Rng, names: &mut Namer, r: &VertexId, alpha: Sign, max_v: usize, max_e: usize) -> Result<LinearCore> {
    let n = rng.gen_range(0..=(max_v - 1).min(max_e));
    let mut pool = max_e - n;
    let pieces = random_pieces(rng, names, n, None, &mut pool)?;
    let order = random_partial_order(rng, pieces.len(), 0.35);
    let base = realize_random(rng, names, &pieces, order, BTreeSet::new(), alpha, &mut pool)?;
    let mut left = pool + n;

    let poset = scc_poset(&base, alpha)?;
    let mut contacts = Vec::new();
    for m in poset.maximal() {
        let u = pick(rng, &poset.components[m]).clone();
        contacts.push(contact(rng, names, &u, r, alpha));
        left -= 1;
    }
    let dv: Vec<VertexId> = base.vertices().cloned().collect();
    let mut added = Vec::new();
    if !dv.is_empty() {
        let mut all = dv.clone();
        all.push(r.clone());
        for _ in 0..rng.gen_range(0..=left) {
            let u = pick(rng, &dv).clone();
            if rng.gen_bool(0.3) {
                contacts.push(contact(rng, names, &u, r, alpha));
            } else {
                let v = pick(rng, &all).clone();
                added.push(homogeneous(names, &u, &v, alpha));
            }
        }
    }
    Ok(LinearCore {
        root: r.clone(),
        alpha,
        base,
        contacts,
        added,
    })
}

fn random_sublinear(rng: &mut impl Rng, names: &mut Namer, r: &VertexId, alpha: Sign, max_v: usize, max_e: usize) -> Result<SublinearCore> {
    let n = rng.gen_range(1..=max_v.min(max_e + 1));
    let mut pool = max_e - (n - 1);
    let pieces = random_pieces(rng, names, n, Some(r.clone()), &mut pool)?;
    let p = pieces.len();
    // piece 0 holds the root and must end up above everything else
    let fallback: BTreeSet<_> = (1..p).map(|i| (i, 0)).collect();
    let mut order: BTreeSet<_> = random_partial_order(rng, p, 0.35)
        .into_iter()
        .filter(|&(i, j)| i != 0 && j != 0)
        .collect();
    order.extend(fallback.iter().copied());
    let order = transitive_closure(p, order);
    // the fallback needs p - 1 <= n - 1 covering arcs, which were held back
    let mut pool = pool + (n - 1);
    let base = realize_random(rng, names, &pieces, order, fallback, alpha, &mut pool)?;
    let vs: Vec<VertexId> = base.vertices().cloned().collect();
    let added = (0..rng.gen_range(0..=pool))
        .map(|_| {
            let (u, v) = (pick(rng, &vs).clone(), pick(rng, &vs).clone());
            homogeneous(names, &u, &v, alpha)
        })
        .collect();
    Ok(SublinearCore {
        root: r.clone(),
        alpha,
        base,
        added,
    })
}

fn random_almost_strong(rng: &mut impl Rng, names: &mut Namer, r: &VertexId, alpha: Sign, max_v: usize, max_e: usize) -> Result<AlmostStrongTree> {
    if max_v < 2 || max_e < 2 {
        return Err(Error::UnsatisfiableSize(
            "an almost strong radial outside the trivial case needs two vertices and two edges".into(),
        ));
    }
    let blocks = rng.gen_range(1..=(max_v - 1).min(max_e / 2).min(3));
    // every block needs one vertex and two edges; hand out the rest at random
    let mut shares = vec![Budget { vertices: 1, edges: 2 }; blocks];
    for _ in 0..(max_v - 1 - blocks) {
        let i = rng.gen_range(0..blocks);
        shares[i].vertices += 1;
    }
    let spare_edges = max_e - 2 * blocks;
    let top_edges = rng.gen_range(0..=spare_edges);
    for _ in 0..(spare_edges - top_edges) {
        let i = rng.gen_range(0..blocks);
        shares[i].edges += 1;
    }

    let mut children = Vec::new();
    for share in shares {
        let r2 = names.vertex();
        let beta = random_sign(rng);
        let mut core_budget = Budget {
            vertices: share.vertices - 1,
            edges: rng.gen_range(1..=share.edges - 1),
        };
        let root_edges = share.edges - 1 - core_budget.edges;
        let core = random_strong(rng, names, &r2, beta, &mut core_budget)?;
        let edge = Edge::new(names.edge(), End::new(r.clone(), -alpha), End::new(r2, beta));
        let mut tree = AlmostStrongTree::Base { edge, core };
        tree = add_root_edges(rng, names, r, alpha, tree, root_edges + core_budget.edges)?;
        children.push(tree);
    }
    let tree = if children.len() == 1 {
        children.pop().expect("one child")
    } else {
        AlmostStrongTree::Glue { children }
    };
    add_root_edges(rng, names, r, alpha, tree, top_edges)
}

/// Wraps `tree` in up to `count` random edges signed `alpha` at the root.
fn add_root_edges(rng: &mut impl Rng, names: &mut Namer, r: &VertexId, alpha: Sign, mut tree: AlmostStrongTree, count: usize) -> Result<AlmostStrongTree> {
    let vs: Vec<VertexId> = replay_almost_strong(r, alpha, &tree)?.vertices().cloned().collect();
    for _ in 0..rng.gen_range(0..=count) {
        let v = pick(rng, &vs).clone();
        let edge = Edge::new(names.edge(), End::new(r.clone(), alpha), End::new(v, random_sign(rng)));
        tree = AlmostStrongTree::AddRootEdge {
            edge,
            child: Box::new(tree),
        };
    }
    Ok(tree)
}

/// A random certificate for `class` with at most `max_vertices` vertices
/// and `max_edges` edges, determined by `seed`.
pub fn random_program(
    class: ClassLabel,
    root: &VertexId,
    alpha: Sign,
    seed: u64,
    (max_vertices, max_edges): (usize, usize),
) -> Result<Certificate> {
    if max_vertices == 0 {
        return Err(Error::UnsatisfiableSize("the root needs one vertex".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut names = Namer::new(root.clone());
    let mut budget = Budget {
        vertices: max_vertices - 1,
        edges: max_edges,
    };
    let cert = match class {
        ClassLabel::AbsoluteSemiradial => {
            let target = rng.gen_range(max_edges / 2..=max_edges);
            let ears = random_ears(&mut rng, &mut names, BidirectedGraph::single(root.clone()), &mut budget, target);
            Certificate::Absolute(EarProgram {
                root: root.clone(),
                alpha: None,
                initial: None,
                ears,
            })
        }
        ClassLabel::StrongRadial => Certificate::Strong(random_strong(&mut rng, &mut names, root, alpha, &mut budget)?),
        ClassLabel::AlmostStrongRadial => Certificate::AlmostStrong {
            root: root.clone(),
            alpha,
            tree: random_almost_strong(&mut rng, &mut names, root, alpha, max_vertices, max_edges)?,
        },
        ClassLabel::LinearSemiradial => {
            Certificate::Linear(random_linear(&mut rng, &mut names, root, alpha, max_vertices, max_edges)?)
        }
        ClassLabel::SublinearRadial => {
            Certificate::Sublinear(random_sublinear(&mut rng, &mut names, root, alpha, max_vertices, max_edges)?)
        }
        other => return Err(Error::Uncharacterized(other)),
    };
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::construct::replay;
    use crate::radials::recognize;

    fn r() -> VertexId {
        VertexId::from("r")
    }

    #[test]
    fn namer_skips_the_root() {
        let mut names = Namer::new("v1".into());
        let got: Vec<String> = (0..3).map(|_| names.vertex().to_string()).collect();
        assert_eq!(got, ["v0", "v2", "v3"]);
    }

    #[test]
    fn generated_certificates_replay_into_members() {
        for class in ClassLabel::CHARACTERIZED {
            for seed in 0..40 {
                let alpha = if seed % 2 == 0 { Sign::Plus } else { Sign::Minus };
                let cert = random_program(class, &r(), alpha, seed, (6, 9)).unwrap();
                let g = replay(&cert).unwrap_or_else(|e| panic!("{class} seed {seed}: {e}"));
                assert!(g.vertex_count() <= 6 && g.edge_count() <= 9, "{class} seed {seed}: {g}");
                assert!(recognize(&g, &r(), alpha, class).unwrap(), "{class} seed {seed}: {g}");
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        for class in ClassLabel::CHARACTERIZED {
            let a = random_program(class, &r(), Sign::Minus, 42, (6, 10)).unwrap();
            let b = random_program(class, &r(), Sign::Minus, 42, (6, 10)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn size_limits() {
        let empty = random_program(ClassLabel::AbsoluteSemiradial, &r(), Sign::Plus, 3, (1, 0)).unwrap();
        assert_eq!(replay(&empty).unwrap(), BidirectedGraph::single("r"));
        assert!(matches!(
            random_program(ClassLabel::StrongRadial, &r(), Sign::Plus, 3, (1, 0)),
            Err(Error::UnsatisfiableSize(_))
        ));
        assert!(matches!(
            random_program(ClassLabel::AlmostStrongRadial, &r(), Sign::Plus, 3, (1, 5)),
            Err(Error::UnsatisfiableSize(_))
        ));
        assert!(matches!(
            random_program(ClassLabel::Radial, &r(), Sign::Plus, 3, (5, 5)),
            Err(Error::Uncharacterized(ClassLabel::Radial))
        ));
    }
}
