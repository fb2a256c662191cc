//! Certificates of class membership: building graphs by the construction
//! rules of each class, and recovering the rules from a graph.

mod almost;
mod diear;
mod linear;
mod program;
pub mod random;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BidirectedGraph, Sign, VertexId};
use crate::radials::ClassLabel;

pub use almost::{decompose_almost_strong, replay_almost_strong, AlmostStrongTree};
pub use diear::{find_diear, find_diear_unchecked, root_scoop, validate_diear, DiEar, EarKind, EarMode};
pub use linear::{
    decompose_linear, decompose_sublinear, replay_linear, replay_sublinear, LinearCore, Obstruction, SublinearCore,
    Verdict,
};
pub use program::{extract_absolute, extract_strong, replay_program, EarProgram, EarStep};
pub use random::random_program;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Absolute(EarProgram),
    Strong(EarProgram),
    AlmostStrong {
        root: VertexId,
        alpha: Sign,
        tree: AlmostStrongTree,
    },
    Linear(LinearCore),
    Sublinear(SublinearCore),
}

impl Certificate {
    pub fn class(&self) -> ClassLabel {
        match self {
            Certificate::Absolute(_) => ClassLabel::AbsoluteSemiradial,
            Certificate::Strong(_) => ClassLabel::StrongRadial,
            Certificate::AlmostStrong { .. } => ClassLabel::AlmostStrongRadial,
            Certificate::Linear(_) => ClassLabel::LinearSemiradial,
            Certificate::Sublinear(_) => ClassLabel::SublinearRadial,
        }
    }

    pub fn root(&self) -> &VertexId {
        match self {
            Certificate::Absolute(p) | Certificate::Strong(p) => &p.root,
            Certificate::AlmostStrong { root, .. } => root,
            Certificate::Linear(c) => &c.root,
            Certificate::Sublinear(c) => &c.root,
        }
    }

    /// `None` for absolute semiradials, which do not depend on a sign.
    pub fn alpha(&self) -> Option<Sign> {
        match self {
            Certificate::Absolute(_) => None,
            Certificate::Strong(p) => p.alpha,
            Certificate::AlmostStrong { alpha, .. } => Some(*alpha),
            Certificate::Linear(c) => Some(c.alpha),
            Certificate::Sublinear(c) => Some(c.alpha),
        }
    }
}

/// A certificate as written to disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub class: ClassLabel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub certificate: Certificate,
}

/// Rebuilds the certified graph, checking every construction step.
pub fn replay(cert: &Certificate) -> Result<BidirectedGraph> {
    let shape = |reason: &str| Error::Replay {
        rule: "program",
        index: 0,
        reason: reason.into(),
    };
    match cert {
        Certificate::Absolute(p) => {
            if p.initial.is_some() || p.alpha.is_some() {
                return Err(shape("an absolute program has no sign and no initial ear"));
            }
            replay_program(p)
        }
        Certificate::Strong(p) => {
            if p.initial.is_none() || p.alpha.is_none() {
                return Err(shape("a strong program needs a sign and an initial ear"));
            }
            replay_program(p)
        }
        Certificate::AlmostStrong { root, alpha, tree } => replay_almost_strong(root, *alpha, tree),
        Certificate::Linear(c) => replay_linear(c),
        Certificate::Sublinear(c) => replay_sublinear(c),
    }
}

/// Recovers a certificate for `class` from a member graph.
pub fn extract(g: &BidirectedGraph, r: &VertexId, alpha: Sign, class: ClassLabel) -> Result<Certificate> {
    let not_member = || Error::NotMember {
        class,
        root: r.clone(),
    };
    Ok(match class {
        ClassLabel::AbsoluteSemiradial => Certificate::Absolute(extract_absolute(g, r)?),
        ClassLabel::StrongRadial => Certificate::Strong(extract_strong(g, r, alpha)?),
        ClassLabel::AlmostStrongRadial => Certificate::AlmostStrong {
            root: r.clone(),
            alpha,
            tree: decompose_almost_strong(g, r, alpha)?,
        },
        ClassLabel::LinearSemiradial => {
            Certificate::Linear(decompose_linear(g, r, alpha)?.member().ok_or_else(not_member)?)
        }
        ClassLabel::SublinearRadial => {
            Certificate::Sublinear(decompose_sublinear(g, r, alpha)?.member().ok_or_else(not_member)?)
        }
        other => return Err(Error::Uncharacterized(other)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(s: &str) -> BidirectedGraph {
        BidirectedGraph::from_compact(s).unwrap()
    }

    fn r() -> VertexId {
        VertexId::from("r")
    }

    #[test]
    fn certificate_json_round_trip() {
        let cases = [
            (graph("r a b | ab(-a,-b) ar(+a,+r) br(+b,+r)"), ClassLabel::StrongRadial, Sign::Minus),
            (graph("r x y | f1(+x,-y) f2(+y,+x) g(+r,-x)"), ClassLabel::AlmostStrongRadial, Sign::Minus),
            (graph("r a | e(+a,-r) h(+a,+r)"), ClassLabel::LinearSemiradial, Sign::Plus),
            (graph("r a | e(+a,-r) f(+r,-a)"), ClassLabel::SublinearRadial, Sign::Plus),
            (graph("r a b | ab(-a,-b) ar(+a,+r) br(+b,+r)"), ClassLabel::AbsoluteSemiradial, Sign::Plus),
        ];
        for (g, class, alpha) in cases {
            let cert = extract(&g, &r(), alpha, class).unwrap();
            assert_eq!(cert.class(), class);
            let doc = CertificateDocument {
                class,
                seed: None,
                certificate: cert,
            };
            let json = serde_json::to_string_pretty(&doc).unwrap();
            let back: CertificateDocument = serde_json::from_str(&json).unwrap();
            assert_eq!(back, doc);
            assert_eq!(replay(&back.certificate).unwrap(), g);
        }
    }

    #[test]
    fn extract_reports_non_members() {
        let g = graph("r a | e(+a,-r) f(+r,-a)");
        assert_eq!(
            extract(&g, &r(), Sign::Plus, ClassLabel::LinearSemiradial),
            Err(Error::NotMember {
                class: ClassLabel::LinearSemiradial,
                root: r()
            })
        );
        assert_eq!(
            extract(&g, &r(), Sign::Plus, ClassLabel::Semiradial),
            Err(Error::Uncharacterized(ClassLabel::Semiradial))
        );
    }
}
