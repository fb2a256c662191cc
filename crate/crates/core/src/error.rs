use thiserror::Error;

use crate::graph::{EdgeId, VertexId};
use crate::radials::ClassLabel;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(VertexId),
    #[error("unknown edge `{0}`")]
    UnknownEdge(EdgeId),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(EdgeId),
    #[error("edge `{0}` is defined differently in the two graphs")]
    ConflictingEdge(EdgeId),
    #[error("graph is not connected")]
    Disconnected,
    #[error("malformed walk at term {position}: {reason}")]
    MalformedWalk { position: usize, reason: String },
    #[error("cannot concatenate: first walk ends at `{left}` but second starts at `{right}`")]
    ConcatMismatch { left: VertexId, right: VertexId },
    #[error("ditrail search exceeded its budget of {0} expanded states")]
    BudgetExceeded(u64),
    #[error("graph is not digraphic: edge `{0}` is not a (+,-)-edge")]
    NotDigraphic(EdgeId),
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("invalid partial order: {0}")]
    InvalidOrder(String),
    #[error("pieces overlap at vertex `{0}`")]
    OverlappingPieces(VertexId),
    #[error("invalid arc: {0}")]
    InvalidArc(String),
    #[error("replay failed at {rule} step {index}: {reason}")]
    Replay {
        rule: &'static str,
        index: usize,
        reason: String,
    },
    #[error("graph is not a {class} with root `{root}`")]
    NotMember { class: ClassLabel, root: VertexId },
    #[error("the single-vertex almost strong radial is not produced by any construction rule")]
    TrivialAlmostStrong,
    #[error("no b-factor exists for the reduced degree map at `{0}`")]
    NoFactor(VertexId),
    #[error("b-factor search is limited to {limit} edges, graph has {edges}")]
    FactorSearchTooLarge { edges: usize, limit: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsatisfiable size: {0}")]
    UnsatisfiableSize(String),
    #[error("{0} has no constructive characterization here")]
    Uncharacterized(ClassLabel),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
