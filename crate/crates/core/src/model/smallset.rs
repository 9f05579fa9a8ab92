use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::Rational;
use crate::error::Result;

/// A point of `M^m` with rational coordinates.
pub type Point = Vec<Rational>;

/// How a small set was obtained from base sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Derivation {
    Base,
    Image { map: String, parent: Arc<SmallSet> },
    Product { parents: Vec<Arc<SmallSet>> },
    Subset { parent: Arc<SmallSet> },
}

/// Finite explicit model of a small set. Smallness is taken as given for
/// base sets and is preserved by images, products and subsets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmallSet {
    pub dim: usize,
    points: Vec<Point>,
    #[serde(default = "base_derivation")]
    pub derivation: Derivation,
}

fn base_derivation() -> Derivation {
    Derivation::Base
}

impl SmallSet {
    /// Sorts and deduplicates. Panics if a point has the wrong arity.
    pub fn base(dim: usize, points: Vec<Point>) -> Self {
        SmallSet::with_derivation(dim, points, Derivation::Base)
    }

    fn with_derivation(dim: usize, mut points: Vec<Point>, derivation: Derivation) -> Self {
        assert!(points.iter().all(|p| p.len() == dim), "point arity mismatch");
        points.sort();
        points.dedup();
        SmallSet { dim, points, derivation }
    }

    pub fn empty(dim: usize) -> Self {
        SmallSet::base(dim, vec![])
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).is_ok()
    }

    pub fn image(
        parent: &Arc<SmallSet>,
        dim: usize,
        label: impl Into<String>,
        f: impl Fn(&Point) -> Result<Point>,
    ) -> Result<SmallSet> {
        let pts = parent.points.iter().map(&f).collect::<Result<Vec<_>>>()?;
        Ok(SmallSet::with_derivation(dim, pts, Derivation::Image { map: label.into(), parent: parent.clone() }))
    }

    pub fn product(parents: &[Arc<SmallSet>]) -> SmallSet {
        let dim = parents.iter().map(|p| p.dim).sum();
        let mut pts: Vec<Point> = vec![vec![]];
        for p in parents {
            pts = pts
                .into_iter()
                .flat_map(|head| {
                    p.points.iter().map(move |tail| {
                        let mut v = head.clone();
                        v.extend(tail.iter().cloned());
                        v
                    })
                })
                .collect();
        }
        SmallSet::with_derivation(dim, pts, Derivation::Product { parents: parents.to_vec() })
    }

    pub fn subset(parent: &Arc<SmallSet>, keep: impl Fn(&Point) -> bool) -> SmallSet {
        let pts = parent.points.iter().filter(|p| keep(p)).cloned().collect();
        SmallSet::with_derivation(parent.dim, pts, Derivation::Subset { parent: parent.clone() })
    }

    /// Every derivation chain reaches a base set, and each derived set is
    /// consistent with its parents (subsets are contained, products have the
    /// right size and dimension).
    pub fn derivation_is_sound(&self) -> bool {
        match &self.derivation {
            Derivation::Base => true,
            Derivation::Image { parent, .. } => parent.derivation_is_sound() && self.len() <= parent.len(),
            Derivation::Product { parents } => {
                parents.iter().all(|p| p.derivation_is_sound())
                    && parents.iter().map(|p| p.dim).sum::<usize>() == self.dim
                    && self.len() == parents.iter().map(|p| p.len()).product::<usize>()
            }
            Derivation::Subset { parent } => {
                parent.derivation_is_sound()
                    && parent.dim == self.dim
                    && self.points.iter().all(|p| parent.contains(p))
            }
        }
    }

    /// Tag of the outermost derivation step.
    pub fn derivation_kind(&self) -> &'static str {
        match self.derivation {
            Derivation::Base => "BASE",
            Derivation::Image { .. } => "IMAGE",
            Derivation::Product { .. } => "PRODUCT",
            Derivation::Subset { .. } => "SUBSET",
        }
    }
}
