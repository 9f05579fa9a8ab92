use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::descriptor::{Ufss, XDesc, ZDesc};
use crate::algebra::OrderIndex;

/// Which construction produced (or transformed) a piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tag {
    #[serde(rename = "LINEAR")]
    Linear,
    #[serde(rename = "LEXMIN")]
    LexMin,
    #[serde(rename = "L36-PRODUCT")]
    Product,
    #[serde(rename = "L35-RESTRICT")]
    Restrict,
    #[serde(rename = "L37-DEDUP")]
    Dedup,
    #[serde(rename = "L39-GRAPH")]
    Graph,
    #[serde(rename = "L310-PARAM")]
    Param,
    #[serde(rename = "V1-DESCENT")]
    V1Descent,
    #[serde(rename = "V2-SUBST")]
    V2Subst,
    #[serde(rename = "V2-FALLBACK")]
    V2Fallback,
    #[serde(rename = "X1-INJECTIVE")]
    X1Injective,
}

impl Tag {
    pub fn name(self) -> &'static str {
        match self {
            Tag::Linear => "LINEAR",
            Tag::LexMin => "LEXMIN",
            Tag::Product => "L36-PRODUCT",
            Tag::Restrict => "L35-RESTRICT",
            Tag::Dedup => "L37-DEDUP",
            Tag::Graph => "L39-GRAPH",
            Tag::Param => "L310-PARAM",
            Tag::V1Descent => "V1-DESCENT",
            Tag::V2Subst => "V2-SUBST",
            Tag::V2Fallback => "V2-FALLBACK",
            Tag::X1Injective => "X1-INJECTIVE",
        }
    }
}

/// One output family with its provenance, innermost step first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Piece {
    pub ufss: Ufss,
    pub provenance: Vec<Tag>,
}

impl Piece {
    pub fn new(z: Arc<ZDesc>, x: Arc<XDesc>, tag: Tag) -> Piece {
        Piece { ufss: Ufss::new(z, x, true), provenance: vec![tag] }
    }

    pub fn tagged(mut self, tag: Tag) -> Piece {
        if self.provenance.last() != Some(&tag) {
            self.provenance.push(tag);
        }
        self
    }

    pub fn has(&self, tag: Tag) -> bool {
        self.provenance.contains(&tag)
    }
}

/// One normalization case of the recursion, identified by its measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub rule: String,
    pub k: usize,
    pub alpha: OrderIndex,
    pub depth: usize,
    /// Number of small-set points routed to this case.
    pub points: usize,
}

/// A collision pair whose difference polynomial did not drop in order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescentViolation {
    pub alpha: OrderIndex,
    pub order: OrderIndex,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Trace {
    pub nodes: Vec<TraceNode>,
    /// Collision pairs whose difference order was compared to the case measure.
    pub pairs_checked: usize,
    pub descent_violations: Vec<DescentViolation>,
}

impl Trace {
    pub fn push(&mut self, parent: Option<usize>, rule: &str, k: usize, alpha: OrderIndex, points: usize) -> usize {
        let depth = parent.map(|p| self.nodes[p].depth + 1).unwrap_or(0);
        let id = self.nodes.len();
        self.nodes.push(TraceNode { id, parent, rule: rule.to_string(), k, alpha, depth, points });
        id
    }

    /// Id of the root above `id`.
    pub fn root_of(&self, mut id: usize) -> usize {
        while let Some(p) = self.nodes[id].parent {
            id = p;
        }
        id
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionResult {
    pub pieces: Vec<Piece>,
    #[serde(default)]
    pub fallback_pieces: Vec<Piece>,
    #[serde(default)]
    pub trace: Trace,
}

impl DecompositionResult {
    pub fn all_pieces(&self) -> impl Iterator<Item = &Piece> {
        self.pieces.iter().chain(&self.fallback_pieces)
    }

    pub fn len(&self) -> usize {
        self.pieces.len() + self.fallback_pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Moves pieces carrying the fallback tag into `fallback_pieces`.
    pub fn split_fallback(mut self) -> Self {
        let (fb, rest): (Vec<Piece>, Vec<Piece>) = self.pieces.into_iter().partition(|p| p.has(Tag::V2Fallback));
        self.pieces = rest;
        self.fallback_pieces.extend(fb);
        self
    }
}
