//! Bidirected graphs and the radial / semiradial classes.
//!
//! A bidirected graph gives each end of each edge a sign. Directed trails
//! ("ditrails") must change sign at every vertex they pass through; the
//! classes in [`radials`] are defined by which signed ditrails reach a root.
//! [`construct`] turns membership into replayable certificates and back.

pub mod construct;
pub mod digraphic;
pub mod document;
pub mod error;
pub mod graph;
pub mod radials;
pub mod reach;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{BidirectedGraph, Edge, EdgeClass, EdgeId, EdgeKind, End, Sign, Slot, VertexId};
pub use reach::{DitrailWitness, Oracle, SignConstraint};
pub use walk::{validate_diwalk, DiwalkInfo, EndSign, Walk};
