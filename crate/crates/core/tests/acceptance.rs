//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p bidigraph --test acceptance`.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bidigraph::construct::random::{random_partial_order, random_strong_piece, Namer};
use bidigraph::construct::{decompose_linear, decompose_sublinear, extract, random_program, replay};
use bidigraph::digraphic::{realize_poset, scc_poset, strong_ears_build, strong_ears_extract};
use bidigraph::radials::{criticality_crosscheck, recognize_with, strong_via_closed_trail, ClassLabel, DegreeSpec};
use bidigraph::reach::diwalk_reachable;
use bidigraph::{BidirectedGraph, Edge, End, Error, Oracle, Sign, SignConstraint, VertexId};

const SEEDS_PER_CLASS: u64 = 300;
const MAX_VERTICES: usize = 10;
const MAX_EDGES: usize = 14;
const TIME_LIMIT: Duration = Duration::from_secs(600);
const POSET_TRIALS: u64 = 200;
const MAX_POSET_SIZE: usize = 5;
const MAX_PIECE_SIZE: usize = 4;
const EAR_TRIALS: u64 = 200;
const CRITICAL_MAX_VERTICES: usize = 5;

struct Outcome {
    pass: bool,
    detail: String,
}

fn alpha_for(seed: u64) -> Sign {
    if seed.is_multiple_of(2) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn root() -> VertexId {
    VertexId::from("r")
}

/// The generated corpus shared by the first two criteria.
fn corpus() -> Vec<(ClassLabel, u64, Sign, Result<BidirectedGraph, String>)> {
    let mut out = Vec::new();
    for class in ClassLabel::CHARACTERIZED {
        for seed in 0..SEEDS_PER_CLASS {
            let alpha = alpha_for(seed);
            let g = random_program(class, &root(), alpha, seed, (MAX_VERTICES, MAX_EDGES))
                .and_then(|cert| replay(&cert))
                .map_err(|e| e.to_string());
            out.push((class, seed, alpha, g));
        }
    }
    out
}

fn soundness(corpus: &[(ClassLabel, u64, Sign, Result<BidirectedGraph, String>)], started: Instant) -> Outcome {
    let mut failures = Vec::new();
    for (class, seed, alpha, g) in corpus {
        let verdict = match g {
            Err(e) => Err(format!("replay: {e}")),
            Ok(g) if g.vertex_count() > MAX_VERTICES || g.edge_count() > MAX_EDGES => {
                Err(format!("size {}x{} over the limit", g.vertex_count(), g.edge_count()))
            }
            Ok(g) => match recognize_with(&Oracle::new(g), &root(), *alpha, *class) {
                Ok(true) => Ok(()),
                Ok(false) => Err("recognizer rejects the replay".into()),
                Err(e) => Err(e.to_string()),
            },
        };
        if let Err(why) = verdict {
            failures.push(format!("{class} seed {seed}: {why}"));
        }
    }
    let elapsed = started.elapsed();
    Outcome {
        pass: failures.is_empty() && elapsed <= TIME_LIMIT,
        detail: format!(
            "{} certificates, {} failures, {:.1}s (limit {}s){}",
            corpus.len(),
            failures.len(),
            elapsed.as_secs_f64(),
            TIME_LIMIT.as_secs(),
            first(&failures)
        ),
    }
}

fn round_trip(corpus: &[(ClassLabel, u64, Sign, Result<BidirectedGraph, String>)]) -> Outcome {
    let mut failures = Vec::new();
    for (class, seed, alpha, g) in corpus {
        let Ok(g) = g else {
            failures.push(format!("{class} seed {seed}: no graph"));
            continue;
        };
        match extract(g, &root(), *alpha, *class).and_then(|cert| replay(&cert)) {
            Ok(back) if back == *g => {}
            Ok(back) => failures.push(format!("{class} seed {seed}: replay gives {back}, expected {g}")),
            Err(e) => failures.push(format!("{class} seed {seed}: {e}")),
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!("{} graphs, {} failures{}", corpus.len(), failures.len(), first(&failures)),
    }
}

fn structural_agreement() -> Outcome {
    let graphs = common::small_graphs();
    let mut mismatches = Vec::new();
    // per reading: (semiradials checked, disagreements); same for radials
    let mut reading: BTreeMap<&str, [usize; 4]> = BTreeMap::new();
    let mut instances = 0;
    for g in &graphs {
        let o = Oracle::new(g);
        for alpha in Sign::BOTH {
            instances += 1;
            let rec = |class| recognize_with(&o, &root(), alpha, class).expect("small graph");
            let linear = decompose_linear(g, &root(), alpha).expect("root exists").is_member();
            let sublinear = decompose_sublinear(g, &root(), alpha).expect("root exists").is_member();
            let strong = strong_via_closed_trail(&o, &root(), alpha).expect("small graph");
            for (name, structural, definitional) in [
                ("linear", linear, rec(ClassLabel::LinearSemiradial)),
                ("sublinear", sublinear, rec(ClassLabel::SublinearRadial)),
                ("strong", strong, rec(ClassLabel::StrongRadial)),
            ] {
                if structural != definitional {
                    mismatches.push(format!("{name} alpha={alpha} on {g}: structural {structural}, oracle {definitional}"));
                }
            }

            // which sign of homogeneous edge decides sublinearity
            let no_opposite_trail = g
                .vertices()
                .all(|x| o.ditrail(x, &root(), SignConstraint::new(-alpha, -alpha)).expect("small").is_none());
            let semiradial = rec(ClassLabel::Semiradial);
            let radial = rec(ClassLabel::Radial);
            for (label, sign) in [("no (-a,-a)-edge", -alpha), ("no (a,a)-edge", alpha)] {
                let lacks = !g.edges().any(|e| e.is_homogeneous(sign));
                let tally = reading.entry(label).or_default();
                if semiradial {
                    tally[0] += 1;
                    tally[1] += usize::from(lacks != no_opposite_trail);
                }
                if radial {
                    tally[2] += 1;
                    tally[3] += usize::from(lacks != no_opposite_trail);
                }
            }
        }
    }
    for (label, [semi, semi_bad, rad, rad_bad]) in &reading {
        println!(
            "    sublinearity reading \"{label}\": {semi_bad}/{semi} disagreements among semiradials, {rad_bad}/{rad} among radials"
        );
    }
    Outcome {
        pass: mismatches.is_empty(),
        detail: format!(
            "{} graphs x 2 signs = {instances} instances, {} disagreements{}",
            graphs.len(),
            mismatches.len(),
            first(&mismatches)
        ),
    }
}

/// Connected simple graphs on `n` labelled vertices, as edge lists.
fn connected_simple_graphs(n: usize) -> Vec<BidirectedGraph> {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let mut g = BidirectedGraph::new();
        for v in &names {
            g.add_vertex(v.as_str());
        }
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask & (1 << k) != 0 {
                let e = Edge::new(
                    format!("{}{}", names[i], names[j]),
                    End::new(names[i].as_str(), Sign::Plus),
                    End::new(names[j].as_str(), Sign::Plus),
                );
                g.add_edge(e).expect("fresh");
            }
        }
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

fn criticality() -> Outcome {
    let (mut graphs, mut checks, mut skipped) = (0, 0, 0);
    let mut violations = Vec::new();
    for n in 1..=CRITICAL_MAX_VERTICES {
        for g in connected_simple_graphs(n) {
            graphs += 1;
            let b = DegreeSpec::uniform(&g, 1);
            for r in g.vertices() {
                match criticality_crosscheck(&g, &b, r) {
                    Ok(true) => checks += 1,
                    Ok(false) => violations.push(format!("root {r} on {g}")),
                    Err(Error::NoFactor(_)) => skipped += 1,
                    Err(e) => violations.push(format!("root {r} on {g}: {e}")),
                }
            }
        }
    }
    Outcome {
        pass: violations.is_empty() && checks > 0,
        detail: format!(
            "{graphs} graphs, {checks} admissible roots checked, {skipped} roots without a factor, {} violations{}",
            violations.len(),
            first(&violations)
        ),
    }
}

fn scc_machinery() -> Outcome {
    let mut failures = Vec::new();
    let mut pairs_checked = 0usize;
    for trial in 0..POSET_TRIALS {
        let mut rng = ChaCha8Rng::seed_from_u64(trial);
        let alpha = alpha_for(trial);
        let n = rng.gen_range(1..=MAX_POSET_SIZE);
        let mut names = Namer::new(VertexId::from(format!("p{trial}")));
        let pieces: Vec<BidirectedGraph> = (0..n)
            .map(|_| {
                let size = rng.gen_range(1..=MAX_PIECE_SIZE);
                let mut pool = size + rng.gen_range(0..3);
                let base = names.vertex();
                random_strong_piece(&mut rng, &mut names, base, size, &mut pool).expect("piece")
            })
            .collect();
        let order = random_partial_order(&mut rng, n, 0.4);
        let g = match realize_poset(&pieces, &order, &[], alpha) {
            Ok(g) => g,
            Err(e) => {
                failures.push(format!("poset {trial}: {e}"));
                continue;
            }
        };
        let poset = scc_poset(&g, alpha).expect("digraphic");
        let index: Vec<Option<usize>> = pieces
            .iter()
            .map(|p| {
                let vs: Vec<VertexId> = p.vertices().cloned().collect();
                poset.components.iter().position(|c| *c == vs)
            })
            .collect();
        if poset.components.len() != n || index.iter().any(Option::is_none) {
            failures.push(format!("poset {trial}: components differ"));
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                let want = i == j || order.contains(&(i, j));
                if poset.leq(index[i].unwrap(), index[j].unwrap()) != want {
                    failures.push(format!("poset {trial}: order differs at ({i}, {j})"));
                }
            }
        }
        // forward ditrails follow the order exactly
        let o = Oracle::new(&g);
        for u in g.vertices() {
            for v in g.vertices() {
                pairs_checked += 1;
                let reach = o.ditrail(u, v, SignConstraint::new(alpha, -alpha)).expect("small").is_some();
                let below = poset.leq(poset.component_of(u).unwrap(), poset.component_of(v).unwrap());
                if reach != below {
                    failures.push(format!("poset {trial}: ditrail {u}->{v} is {reach}, order says {below}"));
                }
            }
        }
    }
    for seed in 0..EAR_TRIALS {
        let mut rng = ChaCha8Rng::seed_from_u64(10_000 + seed);
        let mut names = Namer::new(VertexId::from("base"));
        let size = rng.gen_range(1..=6);
        let mut pool = size + rng.gen_range(0..4);
        let g = random_strong_piece(&mut rng, &mut names, VertexId::from("base"), size, &mut pool).expect("piece");
        match strong_ears_extract(&g).and_then(|p| strong_ears_build(&p)) {
            Ok(back) if back == g => {}
            Ok(_) => failures.push(format!("ears {seed}: rebuilt graph differs")),
            Err(e) => failures.push(format!("ears {seed}: {e}")),
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "{POSET_TRIALS} posets, {EAR_TRIALS} ear programs, {pairs_checked} reachability pairs, {} failures{}",
            failures.len(),
            first(&failures)
        ),
    }
}

fn oracle_self_check() -> Outcome {
    let graphs = common::small_graphs();
    let mut failures = Vec::new();
    let (mut queries, mut walk_only) = (0usize, 0usize);
    let constraints: Vec<SignConstraint> = {
        let mut cs = vec![SignConstraint::any()];
        for s in Sign::BOTH {
            cs.push(SignConstraint::starting(s));
            cs.push(SignConstraint { start: None, end: Some(s) });
            for t in Sign::BOTH {
                cs.push(SignConstraint::new(s, t));
            }
        }
        cs
    };
    for g in &graphs {
        let naive = common::brute_force_ditrails(g);
        let o = Oracle::new(g);
        for x in g.vertices() {
            for y in g.vertices() {
                for &c in &constraints {
                    queries += 1;
                    let fits = |&(ref a, ref b, s, t, nontrivial): &(VertexId, VertexId, Sign, Sign, bool), need_nontrivial: bool| {
                        a == x
                            && b == y
                            && (nontrivial || !need_nontrivial)
                            && c.start.is_none_or(|z| z == s)
                            && c.end.is_none_or(|z| z == t)
                    };
                    let expect = naive.iter().any(|q| fits(q, false));
                    let expect_nontrivial = naive.iter().any(|q| fits(q, true));
                    let got = o.ditrail(x, y, c).expect("small").is_some();
                    let got_nontrivial = o.nontrivial_ditrail(x, y, c).expect("small").is_some();
                    if got != expect || got_nontrivial != expect_nontrivial {
                        failures.push(format!("{c} {x}->{y} on {g}: oracle {got}/{got_nontrivial}, naive {expect}/{expect_nontrivial}"));
                    }
                    let walkable = diwalk_reachable(g, x, y, c).expect("small");
                    if expect && !walkable {
                        failures.push(format!("{c} {x}->{y} on {g}: diwalk filter rejects an existing ditrail"));
                    }
                    walk_only += usize::from(walkable && !expect);
                }
            }
        }
    }
    println!("    diwalk reachable but no ditrail: {walk_only} of {queries} queries");
    Outcome {
        pass: failures.is_empty(),
        detail: format!("{} graphs, {queries} queries, {} failures{}", graphs.len(), failures.len(), first(&failures)),
    }
}

fn first(items: &[String]) -> String {
    items.first().map(|s| format!("; first: {s}")).unwrap_or_default()
}

fn main() -> ExitCode {
    let started = Instant::now();
    let corpus = corpus();
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "soundness of generated certificates", soundness(&corpus, started)),
        (2, "extract/replay round trip", round_trip(&corpus)),
        (3, "structural vs definitional recognizers", structural_agreement()),
        (4, "criticality bridge", criticality()),
        (5, "strong components, realization, ears", scc_machinery()),
        (6, "oracle vs brute force", oracle_self_check()),
    ];
    let mut ok = true;
    for (n, name, outcome) in &results {
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {n} [{verdict}] {name}: {}", outcome.detail);
        ok &= outcome.pass;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
