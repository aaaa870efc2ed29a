//! Cut elimination: redex detection, the rewriting rules, strategies and
//! reduction-graph metrics.

mod canon;
mod fire;
mod metrics;
mod strategy;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net::{EdgeId, Label, ProofNet};

pub use canon::{canonical_key, shape_key};
pub use fire::{fire, CopyMap, Fired};
pub use metrics::{reduction_metrics, Metrics, MetricsBudget};
pub use strategy::{
    normalize, normalize_observed, permitted_cuts, step, Normalization, Strategy, TraceStep,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CutKind {
    Lolli,
    Tensor,
    Forall,
    Bang,
    X,
    D,
    N,
    W,
    /// Multiplexer against a box (soft subsystem).
    M,
}

impl CutKind {
    pub const ALL: [CutKind; 9] = [
        CutKind::Lolli,
        CutKind::Tensor,
        CutKind::Forall,
        CutKind::Bang,
        CutKind::X,
        CutKind::D,
        CutKind::N,
        CutKind::W,
        CutKind::M,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            CutKind::Lolli => "-o",
            CutKind::Tensor => "*",
            CutKind::Forall => "forall",
            CutKind::Bang => "!",
            CutKind::X => "X",
            CutKind::D => "D",
            CutKind::N => "N",
            CutKind::W => "W",
            CutKind::M => "M",
        }
    }

    /// Steps counted by the weight: box merging, duplication and digging.
    pub fn is_exponential(self) -> bool {
        matches!(self, CutKind::Bang | CutKind::X | CutKind::N | CutKind::M)
    }
}

impl fmt::Display for CutKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for CutKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<CutKind> {
        CutKind::ALL
            .into_iter()
            .find(|k| k.symbol() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown cut kind `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cut {
    pub edge: EdgeId,
    pub kind: CutKind,
    pub level: usize,
}

/// Classifies an edge by the redex it forms, if any.
pub fn cut_kind(net: &ProofNet, e: EdgeId) -> Option<CutKind> {
    let edge = net.edges.get(&e)?;
    let src = net.vertices.get(&edge.src)?.label;
    let tgt = net.vertices.get(&edge.tgt)?.label;
    match (src, edge.src_port, tgt, edge.tgt_port) {
        (Label::RLolli, 2, Label::LLolli, 0) => Some(CutKind::Lolli),
        (Label::RTensor, 2, Label::LTensor, 0) => Some(CutKind::Tensor),
        (Label::RAll, 1, Label::LAll, 0) => Some(CutKind::Forall),
        (Label::RBang | Label::RPar, 1, t, 0) => match t {
            Label::LBang | Label::LPar => Some(CutKind::Bang),
            Label::X => Some(CutKind::X),
            Label::D => Some(CutKind::D),
            Label::N => Some(CutKind::N),
            Label::W => Some(CutKind::W),
            Label::M => Some(CutKind::M),
            _ => None,
        },
        _ => None,
    }
}

/// All cuts of the net, ordered by edge id.
pub fn find_cuts(net: &ProofNet) -> Vec<Cut> {
    let idx = net.index();
    net.edges
        .keys()
        .filter_map(|e| {
            cut_kind(net, *e).map(|kind| Cut {
                edge: *e,
                kind,
                level: idx.edge_depth[e],
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;
    use crate::frontend::{dr_ladder, elaborate, parse_proof_term};

    #[test]
    fn detects_cuts() {
        let a = Formula::atom("a");
        assert!(find_cuts(&dr_ladder(1, &a).unwrap()).is_empty());
        let cuts = find_cuts(&dr_ladder(2, &a).unwrap());
        assert_eq!(cuts.len(), 1);
        assert_eq!((cuts[0].kind, cuts[0].level), (CutKind::Lolli, 0));
        let g = elaborate(&parse_proof_term("(cut (prom (ax a)) (weak (ax b) [!a]) 2)").unwrap())
            .unwrap();
        let cuts = find_cuts(&g);
        assert_eq!(cuts.len(), 1);
        assert_eq!((cuts[0].kind, cuts[0].level), (CutKind::W, 0));
    }

    #[test]
    fn kinds_roundtrip() {
        for k in CutKind::ALL {
            assert_eq!(k.symbol().parse::<CutKind>().unwrap(), k);
        }
    }
}
