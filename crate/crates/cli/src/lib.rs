//! The `bidigraph` command line: file handling and subcommands over the
//! library. Every command writes to a caller-supplied sink and returns an
//! exit code, so the binary is a thin wrapper.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use bidigraph::construct::{extract, random_program, replay, CertificateDocument};
use bidigraph::digraphic::scc_poset;
use bidigraph::document::GraphDocument;
use bidigraph::radials::{check_with, ClassLabel};
use bidigraph::reach::DEFAULT_BUDGET;
use bidigraph::{BidirectedGraph, Error, Oracle, Sign, SignConstraint, VertexId};

/// Stable exit codes.
pub mod exit {
    pub const YES: u8 = 0;
    pub const NO: u8 = 1;
    pub const INPUT: u8 = 2;
    pub const BUDGET: u8 = 3;
    pub const EDGE_CASE: u8 = 4;
}

#[derive(Debug, Parser)]
#[command(name = "bidigraph", version, about = "Radials and semiradials in bidirected graphs")]
pub struct Cli {
    /// Expanded-state budget for every ditrail search.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a graph document and summarize it.
    Validate {
        path: PathBuf,
        /// Also write a DOT rendering here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Decide class membership.
    Check {
        path: PathBuf,
        #[command(flatten)]
        query: ClassQuery,
    },
    /// Write a construction certificate for a member graph.
    Decompose {
        path: PathBuf,
        #[command(flatten)]
        query: ClassQuery,
        /// Certificate file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Replay the certificate and compare with the input.
        #[arg(long)]
        verify: bool,
    },
    /// Generate a random member graph from a seeded construction.
    Generate {
        #[arg(long)]
        class: ClassLabel,
        #[arg(long, default_value = "r")]
        root: String,
        #[arg(long, allow_hyphen_values = true, default_value = "+")]
        alpha: Sign,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        vertices: usize,
        #[arg(long, default_value_t = 12)]
        edges: usize,
        /// Writes `<out>.graph.json` and `<out>.cert.json`; the graph goes
        /// to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find a ditrail between two vertices.
    Reach {
        path: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, allow_hyphen_values = true)]
        start_sign: Option<Sign>,
        #[arg(long, allow_hyphen_values = true)]
        end_sign: Option<Sign>,
        /// Never answer with the one-vertex walk.
        #[arg(long)]
        nontrivial: bool,
    },
    /// Strong components of a digraphic graph and their order.
    Scc {
        path: PathBuf,
        #[arg(long, allow_hyphen_values = true, default_value = "+")]
        alpha: Sign,
    },
}

#[derive(Debug, Args)]
pub struct ClassQuery {
    #[arg(long, default_value = "r")]
    pub root: String,
    /// Required by every class except absolute semiradials.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<Sign>,
    #[arg(long)]
    pub class: ClassLabel,
}

impl ClassQuery {
    fn alpha(&self) -> Result<Sign, Failure> {
        match (self.alpha, self.class) {
            (Some(a), _) => Ok(a),
            (None, ClassLabel::AbsoluteSemiradial) => Ok(Sign::Plus),
            (None, class) => Err(Failure::input(format!("--alpha is required for {class}"))),
        }
    }
}

/// A command that could not produce its normal answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: exit::INPUT,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded(_) => exit::BUDGET,
            Error::TrivialAlmostStrong => exit::EDGE_CASE,
            Error::NotMember { .. } => exit::NO,
            _ => exit::INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::input(format!("{}: {e}", path.display()))
}

/// Reads and validates a graph document.
pub fn load_graph(path: &Path) -> Result<BidirectedGraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    parse_graph(&text).map_err(|m| Failure::input(format!("{}: {m}", path.display())))
}

pub fn parse_graph(text: &str) -> Result<BidirectedGraph, String> {
    let doc: GraphDocument = serde_json::from_str(text).map_err(|e| e.to_string())?;
    BidirectedGraph::try_from(doc).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| io_failure(path, e))
}

fn vertex(g: &BidirectedGraph, name: &str) -> Result<VertexId, Failure> {
    let v = VertexId::from(name);
    g.require_vertex(&v)?;
    Ok(v)
}

/// Edge counts by kind, keyed by the kind's printed form.
pub fn edge_histogram(g: &BidirectedGraph) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for e in g.edges() {
        *counts.entry(e.class().to_string()).or_insert(0) += 1;
    }
    counts
}

/// An undirected DOT rendering with each end's sign as the label at that
/// endpoint.
pub fn to_dot(g: &BidirectedGraph) -> String {
    let mut s = String::from("graph bidirected {\n");
    for v in g.vertices() {
        let _ = writeln!(s, "  {v:?};", v = v.as_str());
    }
    for e in g.edges() {
        let [a, b] = &e.ends;
        let _ = writeln!(
            s,
            "  {:?} -- {:?} [label={:?}, taillabel=\"{}\", headlabel=\"{}\"];",
            a.vertex.as_str(),
            b.vertex.as_str(),
            e.id.as_str(),
            a.sign,
            b.sign
        );
    }
    s.push_str("}\n");
    s
}

#[derive(Serialize)]
struct SccReport {
    alpha: Sign,
    components: Vec<Vec<VertexId>>,
    /// Strict pairs `[i, j]`: component `i` precedes component `j`.
    order: Vec<(usize, usize)>,
}

/// Runs one command, writing its normal output to `out`.
pub fn run(cli: &Cli, out: &mut impl Write) -> Result<u8, Failure> {
    let mut text = String::new();
    let code = dispatch(cli, &mut text)?;
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::input(format!("cannot write output: {e}")))?;
    Ok(code)
}

fn dispatch(cli: &Cli, out: &mut String) -> Result<u8, Failure> {
    match &cli.command {
        Command::Validate { path, dot } => {
            let g = load_graph(path)?;
            let _ = writeln!(out, "vertices: {}", g.vertex_count());
            let _ = writeln!(out, "edges: {}", g.edge_count());
            for (kind, n) in edge_histogram(&g) {
                let _ = writeln!(out, "{kind}: {n}");
            }
            if let Some(dot) = dot {
                write_file(dot, &to_dot(&g))?;
            }
            Ok(exit::YES)
        }
        Command::Check { path, query } => {
            let g = load_graph(path)?;
            let r = vertex(&g, &query.root)?;
            let o = Oracle::new(&g).with_budget(cli.budget);
            match check_with(&o, &r, query.alpha()?, query.class)? {
                None => {
                    out.push_str("true\n");
                    Ok(exit::YES)
                }
                Some(why) => {
                    let _ = writeln!(out, "false: {why}");
                    Ok(exit::NO)
                }
            }
        }
        Command::Decompose {
            path,
            query,
            out: target,
            verify,
        } => {
            let g = load_graph(path)?;
            let r = vertex(&g, &query.root)?;
            let alpha = query.alpha()?;
            if !query.class.is_characterized() {
                return Err(Error::Uncharacterized(query.class).into());
            }
            let o = Oracle::new(&g).with_budget(cli.budget);
            if let Some(why) = check_with(&o, &r, alpha, query.class)? {
                let _ = writeln!(out, "false: {why}");
                return Ok(exit::NO);
            }
            let certificate = extract(&g, &r, alpha, query.class)?;
            if *verify {
                let back = replay(&certificate)?;
                if back != g {
                    return Err(Failure::input(format!("replay gives {back}, expected {g}")));
                }
            }
            let json = to_json(&CertificateDocument {
                class: query.class,
                seed: None,
                certificate,
            });
            match target {
                Some(p) => write_file(p, &json)?,
                None => out.push_str(&json),
            }
            if *verify {
                out.push_str("verified\n");
            }
            Ok(exit::YES)
        }
        Command::Generate {
            class,
            root,
            alpha,
            seed,
            vertices,
            edges,
            out: prefix,
        } => {
            let r = VertexId::from(root.as_str());
            let certificate = random_program(*class, &r, *alpha, *seed, (*vertices, *edges))?;
            let g = replay(&certificate)?;
            let graph_json = to_json(&g);
            match prefix {
                Some(prefix) => {
                    let cert_json = to_json(&CertificateDocument {
                        class: *class,
                        seed: Some(*seed),
                        certificate,
                    });
                    let with = |ext: &str| {
                        let mut name = prefix.as_os_str().to_owned();
                        name.push(ext);
                        PathBuf::from(name)
                    };
                    write_file(&with(".graph.json"), &graph_json)?;
                    write_file(&with(".cert.json"), &cert_json)?;
                }
                None => out.push_str(&graph_json),
            }
            Ok(exit::YES)
        }
        Command::Reach {
            path,
            from,
            to,
            start_sign,
            end_sign,
            nontrivial,
        } => {
            let g = load_graph(path)?;
            let (x, y) = (vertex(&g, from)?, vertex(&g, to)?);
            let c = SignConstraint {
                start: *start_sign,
                end: *end_sign,
            };
            let o = Oracle::new(&g).with_budget(cli.budget);
            let found = if *nontrivial {
                o.nontrivial_ditrail(&x, &y, c)?
            } else {
                o.ditrail(&x, &y, c)?
            };
            match found {
                Some(w) => {
                    let _ = writeln!(out, "{}", w.walk);
                    Ok(exit::YES)
                }
                None => {
                    out.push_str("none\n");
                    Ok(exit::NO)
                }
            }
        }
        Command::Scc { path, alpha } => {
            let g = load_graph(path)?;
            let poset = scc_poset(&g, *alpha)?;
            out.push_str(&to_json(&SccReport {
                alpha: *alpha,
                order: poset.strict_pairs(),
                components: poset.components,
            }));
            Ok(exit::YES)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_counts_kinds() {
        let g = BidirectedGraph::from_compact("r a b | ab(-a,-b) ar(+a,+r) br(+b,+r)").unwrap();
        let h = edge_histogram(&g);
        assert_eq!(h["(+,+)"], 2);
        assert_eq!(h["(-,-)"], 1);
        assert_eq!(h.len(), 2);
    }

    #[test]
    fn dot_labels_both_ends() {
        let g = BidirectedGraph::from_compact("r a | e(+a,-r)").unwrap();
        let dot = to_dot(&g);
        assert!(dot.contains(r#""a" -- "r" [label="e", taillabel="+", headlabel="-"];"#), "{dot}");
    }

    #[test]
    fn parse_reports_the_field() {
        let err = parse_graph(r#"{"vertices": ["a"], "edges": [{"id": "e", "ends": [{"v": "a", "sign": "+"}, {"v": "z", "sign": "-"}]}]}"#)
            .unwrap_err();
        assert!(err.contains("edges[0].ends[1].v"), "{err}");
    }

    #[test]
    fn library_errors_map_to_exit_codes() {
        assert_eq!(Failure::from(Error::BudgetExceeded(5)).code, exit::BUDGET);
        assert_eq!(Failure::from(Error::TrivialAlmostStrong).code, exit::EDGE_CASE);
        assert_eq!(Failure::from(Error::Disconnected).code, exit::INPUT);
    }
}
