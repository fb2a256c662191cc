//! Definitional recognizers for the radial classes, evaluated literally
//! through the ditrail oracle, and the bridge to factor-critical graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BidirectedGraph, Edge, EdgeId, End, Sign, VertexId};
use crate::reach::{DitrailWitness, Oracle, SignConstraint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassLabel {
    Semiradial,
    Radial,
    AbsoluteSemiradial,
    StrongRadial,
    AlmostStrongRadial,
    LinearSemiradial,
    SublinearRadial,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 7] = [
        ClassLabel::Semiradial,
        ClassLabel::Radial,
        ClassLabel::AbsoluteSemiradial,
        ClassLabel::StrongRadial,
        ClassLabel::AlmostStrongRadial,
        ClassLabel::LinearSemiradial,
        ClassLabel::SublinearRadial,
    ];

    /// The classes with a constructive characterization (certificates).
    pub const CHARACTERIZED: [ClassLabel; 5] = [
        ClassLabel::AbsoluteSemiradial,
        ClassLabel::StrongRadial,
        ClassLabel::AlmostStrongRadial,
        ClassLabel::LinearSemiradial,
        ClassLabel::SublinearRadial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassLabel::Semiradial => "semiradial",
            ClassLabel::Radial => "radial",
            ClassLabel::AbsoluteSemiradial => "absolute_semiradial",
            ClassLabel::StrongRadial => "strong_radial",
            ClassLabel::AlmostStrongRadial => "almost_strong_radial",
            ClassLabel::LinearSemiradial => "linear_semiradial",
            ClassLabel::SublinearRadial => "sublinear_radial",
        }
    }

    pub fn is_characterized(self) -> bool {
        Self::CHARACTERIZED.contains(&self)
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassLabel {
    type Err = String;

    /// Accepts the full names with `_` or `-`, and the short forms
    /// `absolute`, `strong`, `almost-strong`, `linear`, `sublinear`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let label = match key.as_str() {
            "semiradial" => ClassLabel::Semiradial,
            "radial" => ClassLabel::Radial,
            "absolute" | "absolute_semiradial" => ClassLabel::AbsoluteSemiradial,
            "strong" | "strong_radial" => ClassLabel::StrongRadial,
            "almost_strong" | "almost_strong_radial" => ClassLabel::AlmostStrongRadial,
            "linear" | "linear_semiradial" => ClassLabel::LinearSemiradial,
            "sublinear" | "sublinear_radial" => ClassLabel::SublinearRadial,
            _ => return Err(format!("unknown class `{s}`")),
        };
        Ok(label)
    }
}

/// One concrete reason a graph is outside a class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refutation {
    MissingDitrail {
        from: VertexId,
        to: VertexId,
        constraint: SignConstraint,
    },
    ForbiddenDitrail {
        to: VertexId,
        witness: DitrailWitness,
    },
    LoopAtRoot {
        edge: EdgeId,
    },
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refutation::MissingDitrail {
                from,
                to,
                constraint,
            } => write!(f, "no {constraint}-ditrail from {from} to {to}"),
            Refutation::ForbiddenDitrail { to, witness } => {
                let from = witness.walk.start();
                if witness.walk.is_closed() && !witness.is_trivial() {
                    write!(f, "forbidden closed {witness} over {to}")
                } else {
                    write!(f, "forbidden {witness} from {from} to {to}")
                }
            }
            Refutation::LoopAtRoot { edge } => write!(f, "loop `{edge}` at the root"),
        }
    }
}

fn all_reach(o: &Oracle<'_>, r: &VertexId, c: SignConstraint, skip_root: bool) -> Result<Option<Refutation>> {
    for v in o.graph().vertices() {
        if skip_root && v == r {
            continue;
        }
        if o.ditrail(v, r, c)?.is_none() {
            return Ok(Some(Refutation::MissingDitrail {
                from: v.clone(),
                to: r.clone(),
                constraint: c,
            }));
        }
    }
    Ok(None)
}

fn none_reach(o: &Oracle<'_>, r: &VertexId, c: SignConstraint) -> Result<Option<Refutation>> {
    for x in o.graph().vertices() {
        if let Some(witness) = o.nontrivial_ditrail(x, r, c)? {
            return Ok(Some(Refutation::ForbiddenDitrail {
                to: r.clone(),
                witness,
            }));
        }
    }
    Ok(None)
}

/// Evaluates the class definition; `None` means the graph is a member.
pub fn check_with(o: &Oracle<'_>, r: &VertexId, alpha: Sign, class: ClassLabel) -> Result<Option<Refutation>> {
    o.graph().require_vertex(r)?;
    let radial = SignConstraint::new(alpha, -alpha);
    let opposite = SignConstraint::new(-alpha, -alpha);
    macro_rules! first_of {
        ($($e:expr),+ $(,)?) => {{
            $(if let Some(refutation) = $e { return Ok(Some(refutation)); })+
            Ok(None)
        }};
    }
    match class {
        ClassLabel::Semiradial => all_reach(o, r, SignConstraint::starting(alpha), false),
        ClassLabel::Radial => all_reach(o, r, radial, false),
        ClassLabel::AbsoluteSemiradial => first_of!(
            all_reach(o, r, SignConstraint::starting(Sign::Plus), false)?,
            all_reach(o, r, SignConstraint::starting(Sign::Minus), false)?,
        ),
        ClassLabel::StrongRadial => first_of!(
            all_reach(o, r, radial, false)?,
            all_reach(o, r, opposite, false)?,
        ),
        ClassLabel::AlmostStrongRadial => first_of!(
            all_reach(o, r, radial, false)?,
            all_reach(o, r, opposite, true)?,
            o.closed_ditrail(r, opposite)?.map(|witness| Refutation::ForbiddenDitrail {
                to: r.clone(),
                witness
            }),
        ),
        ClassLabel::LinearSemiradial => first_of!(
            all_reach(o, r, SignConstraint::starting(alpha), false)?,
            o.graph().loops_at(r).next().map(|e| Refutation::LoopAtRoot { edge: e.id.clone() }),
            none_reach(o, r, SignConstraint::starting(-alpha))?,
        ),
        // the trivial ditrail is never (-a,-a), so "nontrivial" changes nothing
        ClassLabel::SublinearRadial => first_of!(all_reach(o, r, radial, false)?, none_reach(o, r, opposite)?),
    }
}

pub fn check(g: &BidirectedGraph, r: &VertexId, alpha: Sign, class: ClassLabel) -> Result<Option<Refutation>> {
    check_with(&Oracle::new(g), r, alpha, class)
}

pub fn recognize_with(o: &Oracle<'_>, r: &VertexId, alpha: Sign, class: ClassLabel) -> Result<bool> {
    Ok(check_with(o, r, alpha, class)?.is_none())
}

pub fn recognize(g: &BidirectedGraph, r: &VertexId, alpha: Sign, class: ClassLabel) -> Result<bool> {
    recognize_with(&Oracle::new(g), r, alpha, class)
}

/// Strong radials as absolute semiradials with a closed `(-alpha,-alpha)`
/// ditrail over the root.
pub fn strong_via_closed_trail(o: &Oracle<'_>, r: &VertexId, alpha: Sign) -> Result<bool> {
    Ok(recognize_with(o, r, alpha, ClassLabel::AbsoluteSemiradial)?
        && o.closed_ditrail(r, SignConstraint::new(-alpha, -alpha))?.is_some())
}

/// Degree targets `b: V -> N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSpec {
    pub b: BTreeMap<VertexId, u32>,
}

impl DegreeSpec {
    pub fn uniform(g: &BidirectedGraph, k: u32) -> Self {
        DegreeSpec {
            b: g.vertices().map(|v| (v.clone(), k)).collect(),
        }
    }

    fn require_total(&self, g: &BidirectedGraph) -> Result<()> {
        match g.vertices().find(|v| !self.b.contains_key(*v)) {
            Some(v) => Err(Error::Precondition(format!("degree map misses vertex `{v}`"))),
            None => Ok(()),
        }
    }

    /// `b` lowered by one at `x`; may go negative.
    pub fn reduced_at(&self, x: &VertexId) -> BTreeMap<VertexId, i64> {
        self.b
            .iter()
            .map(|(v, &k)| (v.clone(), i64::from(k) - i64::from(v == x)))
            .collect()
    }
}

pub const FACTOR_EDGE_LIMIT: usize = 20;

/// Some `F ⊆ E(G)` with `deg_F(v) = target(v)` for all `v` (a loop counts
/// twice), by Gray-code enumeration over all edge subsets.
pub fn find_b_factor(g: &BidirectedGraph, target: &BTreeMap<VertexId, i64>) -> Result<Option<BTreeSet<EdgeId>>> {
    let m = g.edge_count();
    if m > FACTOR_EDGE_LIMIT {
        return Err(Error::FactorSearchTooLarge {
            edges: m,
            limit: FACTOR_EDGE_LIMIT,
        });
    }
    let ids: Vec<&VertexId> = g.vertices().collect();
    let pos: BTreeMap<&VertexId, usize> = ids.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let want: Vec<i64> = ids.iter().map(|v| target.get(*v).copied().unwrap_or(0)).collect();

    let mut available = vec![0i64; ids.len()];
    let edges: Vec<(&Edge, usize, usize)> = g
        .edges()
        .map(|e| (e, pos[&e.ends[0].vertex], pos[&e.ends[1].vertex]))
        .collect();
    for &(_, u, v) in &edges {
        available[u] += 1;
        available[v] += 1;
    }
    let total: i64 = want.iter().sum();
    if want.iter().zip(&available).any(|(&w, &a)| w < 0 || w > a) || total % 2 != 0 {
        return Ok(None);
    }

    let mut degree = vec![0i64; ids.len()];
    let mut wrong = want.iter().filter(|&&w| w != 0).count();
    let mut chosen = vec![false; m];
    let collect = |chosen: &[bool]| -> BTreeSet<EdgeId> {
        edges
            .iter()
            .zip(chosen)
            .filter(|(_, &c)| c)
            .map(|((e, _, _), _)| e.id.clone())
            .collect()
    };
    if wrong == 0 {
        return Ok(Some(BTreeSet::new()));
    }
    for step in 1u64..(1u64 << m) {
        let flip = step.trailing_zeros() as usize;
        chosen[flip] = !chosen[flip];
        let delta = if chosen[flip] { 1 } else { -1 };
        let (_, u, v) = edges[flip];
        for w in [u, v] {
            let before = degree[w] == want[w];
            degree[w] += delta;
            let after = degree[w] == want[w];
            match (before, after) {
                (true, false) => wrong += 1,
                (false, true) => wrong -= 1,
                _ => {}
            }
        }
        if wrong == 0 {
            return Ok(Some(collect(&chosen)));
        }
    }
    Ok(None)
}

/// Whether every vertex `x` admits a factor for `b` lowered by one at `x`.
pub fn is_b_critical(g: &BidirectedGraph, b: &DegreeSpec) -> Result<bool> {
    b.require_total(g)?;
    for x in g.vertices() {
        if find_b_factor(g, &b.reduced_at(x))?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Same vertices and edge ids; edges in `f` become `(-,-)`, others `(+,+)`.
pub fn signed_from_factor(g: &BidirectedGraph, f: &BTreeSet<EdgeId>) -> Result<BidirectedGraph> {
    for id in f {
        g.require_edge(id)?;
    }
    let mut out = BidirectedGraph::new();
    for v in g.vertices() {
        out.add_vertex(v.clone());
    }
    for e in g.edges() {
        let s = if f.contains(&e.id) { Sign::Minus } else { Sign::Plus };
        out.add_edge(Edge::new(
            e.id.clone(),
            End::new(e.ends[0].vertex.clone(), s),
            End::new(e.ends[1].vertex.clone(), s),
        ))?;
    }
    Ok(out)
}

/// Checks on one instance that `b`-criticality coincides with every vertex
/// having a `(-,+)`-ditrail to `r` in the graph signed by a factor for `b`
/// lowered at `r`.
pub fn criticality_crosscheck(g: &BidirectedGraph, b: &DegreeSpec, r: &VertexId) -> Result<bool> {
    g.require_vertex(r)?;
    b.require_total(g)?;
    let f = find_b_factor(g, &b.reduced_at(r))?.ok_or_else(|| Error::NoFactor(r.clone()))?;
    let signed = signed_from_factor(g, &f)?;
    let o = Oracle::new(&signed);
    let mut reach_all = true;
    for x in signed.vertices() {
        if o.ditrail(x, r, SignConstraint::new(Sign::Minus, Sign::Plus))?.is_none() {
            reach_all = false;
            break;
        }
    }
    Ok(is_b_critical(g, b)? == reach_all)
}

#[cfg(test)]
mod tests {
    use super::*;

    use ClassLabel::*;
    use Sign::{Minus, Plus};

    fn graph(s: &str) -> BidirectedGraph {
        BidirectedGraph::from_compact(s).unwrap()
    }

    fn g2() -> BidirectedGraph {
        graph("r a b | ab(-a,-b) ar(+a,+r) br(+b,+r)")
    }

    fn g3() -> BidirectedGraph {
        graph("r x y | f1(+x,-y) f2(+y,+x) g(+r,-x)")
    }

    fn g6() -> BidirectedGraph {
        graph("r a | e(+a,-r) f(+r,-a)")
    }

    fn r() -> VertexId {
        VertexId::from("r")
    }

    #[test]
    fn label_names_round_trip() {
        for c in ClassLabel::ALL {
            assert_eq!(c.name().parse::<ClassLabel>().unwrap(), c);
            assert_eq!(c.name().replace('_', "-").parse::<ClassLabel>().unwrap(), c);
            let json = serde_json::to_string(&c).unwrap();
            assert_eq!(json, format!("\"{}\"", c.name()));
        }
        assert_eq!("almost-strong".parse::<ClassLabel>().unwrap(), AlmostStrongRadial);
        assert_eq!("linear".parse::<ClassLabel>().unwrap(), LinearSemiradial);
        assert!("weak".parse::<ClassLabel>().is_err());
    }

    #[test]
    fn g2_is_strong_minus_radial() {
        assert!(recognize(&g2(), &r(), Minus, StrongRadial).unwrap());
        assert!(recognize(&g2(), &r(), Minus, AbsoluteSemiradial).unwrap());
        assert!(!recognize(&g2(), &r(), Minus, AlmostStrongRadial).unwrap());
        assert!(!recognize(&g2(), &r(), Plus, StrongRadial).unwrap());
    }

    #[test]
    fn g3_is_almost_strong() {
        assert!(recognize(&g3(), &r(), Minus, AlmostStrongRadial).unwrap());
        assert!(!recognize(&g3(), &r(), Minus, StrongRadial).unwrap());
    }

    #[test]
    fn single_vertex_conventions() {
        let g = BidirectedGraph::single("r");
        for alpha in Sign::BOTH {
            assert!(!recognize(&g, &r(), alpha, StrongRadial).unwrap());
            for c in [Semiradial, Radial, AbsoluteSemiradial, AlmostStrongRadial, LinearSemiradial, SublinearRadial] {
                assert!(recognize(&g, &r(), alpha, c).unwrap(), "{c}");
            }
        }
    }

    #[test]
    fn two_cycle_linear_and_sublinear() {
        assert!(recognize(&g6(), &r(), Plus, SublinearRadial).unwrap());
        let refutation = check(&g6(), &r(), Plus, LinearSemiradial).unwrap().unwrap();
        match &refutation {
            Refutation::ForbiddenDitrail { witness, .. } => {
                assert_eq!(witness.start_sign, Minus);
                assert!(!witness.is_trivial());
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn refutation_text() {
        let g = graph("r a b | ab(-a,-b) ar(+a,+r)");
        let refutation = check(&g, &r(), Minus, Radial).unwrap().unwrap();
        assert_eq!(refutation.to_string(), "no (-,+)-ditrail from a to r");
        let looped = graph("r | l(+r,+r)");
        assert_eq!(
            check(&looped, &r(), Plus, LinearSemiradial).unwrap(),
            Some(Refutation::LoopAtRoot { edge: "l".into() })
        );
    }

    #[test]
    fn unknown_root() {
        assert_eq!(
            recognize(&g2(), &VertexId::from("z"), Plus, Radial),
            Err(Error::UnknownVertex("z".into()))
        );
    }

    #[test]
    fn strong_equivalence_on_examples() {
        for g in [g2(), g3(), g6(), BidirectedGraph::single("r")] {
            let o = Oracle::new(&g);
            for alpha in Sign::BOTH {
                assert_eq!(
                    strong_via_closed_trail(&o, &r(), alpha).unwrap(),
                    recognize_with(&o, &r(), alpha, StrongRadial).unwrap()
                );
            }
        }
    }

    fn triangle() -> BidirectedGraph {
        graph("r a b | ab(+a,+b) ar(+a,+r) br(+b,+r)")
    }

    #[test]
    fn factor_critical_examples() {
        let t = triangle();
        assert!(is_b_critical(&t, &DegreeSpec::uniform(&t, 1)).unwrap());
        let edge = graph("u v | uv(+u,+v)");
        assert!(!is_b_critical(&edge, &DegreeSpec::uniform(&edge, 1)).unwrap());
        assert!(!is_b_critical(&t, &DegreeSpec::uniform(&t, 0)).unwrap());
        let square = graph("a b c d | ab(+a,+b) bc(+b,+c) cd(+c,+d) da(+d,+a)");
        assert!(!is_b_critical(&square, &DegreeSpec::uniform(&square, 1)).unwrap());
    }

    #[test]
    fn factor_search_counts_loops_twice() {
        let g = graph("a | l(+a,+a)");
        let two = BTreeMap::from([(VertexId::from("a"), 2)]);
        let one = BTreeMap::from([(VertexId::from("a"), 1)]);
        assert_eq!(find_b_factor(&g, &two).unwrap(), Some(BTreeSet::from(["l".into()])));
        assert_eq!(find_b_factor(&g, &one).unwrap(), None);
    }

    #[test]
    fn signed_from_factor_examples() {
        let t = triangle();
        let f = BTreeSet::from([EdgeId::from("ab")]);
        assert_eq!(signed_from_factor(&t, &f).unwrap(), g2());
        let all_plus = signed_from_factor(&t, &BTreeSet::new()).unwrap();
        assert!(all_plus.edges().all(|e| e.is_homogeneous(Plus)));
        let ids: BTreeSet<EdgeId> = t.edge_ids().cloned().collect();
        assert!(signed_from_factor(&t, &ids).unwrap().edges().all(|e| e.is_homogeneous(Minus)));
        assert!(signed_from_factor(&t, &BTreeSet::from(["zz".into()])).is_err());
    }

    #[test]
    fn crosscheck_examples() {
        let t = triangle();
        assert!(criticality_crosscheck(&t, &DegreeSpec::uniform(&t, 1), &r()).unwrap());
        let path = graph("a r | ar(+a,+r)");
        assert_eq!(
            criticality_crosscheck(&path, &DegreeSpec::uniform(&path, 1), &r()),
            Err(Error::NoFactor(r()))
        );
        let square = graph("r a b c | ra(+r,+a) ab(+a,+b) bc(+b,+c) cr(+c,+r)");
        let b = DegreeSpec::uniform(&square, 1);
        for v in square.vertices() {
            // no vertex of an even cycle is an admissible root
            assert_eq!(criticality_crosscheck(&square, &b, v), Err(Error::NoFactor(v.clone())));
        }
    }
}
