use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::condition::Condition;
use super::defset::DefSet;
use super::smallset::SmallSet;
use crate::algebra::{RatFunc, Rational};

/// A family `Z ⊆ M^{m+k+l}` described as a tree over normal-form sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZDesc {
    Set(Arc<DefSet>),
    /// `b, a ↦ {y_j}` where `y_1 <= ... <= y_q` lists the base fiber with its
    /// smallest element repeated to length `bound`. `index` is 1-based.
    Selector { base: Arc<ZDesc>, index: usize, bound: usize },
    /// Fiber over `(b_1, ..., b_r)` is the product of the factor fibers.
    Product { factors: Vec<Arc<ZDesc>> },
    /// `inner` has one parameter fewer and one more output coordinate; the
    /// fiber at `a` keeps the tuples whose first coordinate equals `a_param`.
    Slice { inner: Arc<ZDesc>, param: usize },
    /// `b` extended by `map(b)`.
    PushGraph { inner: Arc<ZDesc>, map: Vec<RatFunc> },
    /// Parameters extended by `map(b, a)`.
    AppendParam { inner: Arc<ZDesc>, map: Vec<RatFunc> },
    /// Fiber at `a` is `inner`'s fiber at `a` without coordinate `param`.
    DropParam { inner: Arc<ZDesc>, param: usize },
    /// Union of families over the same arity.
    Union { members: Vec<Arc<ZDesc>> },
}

impl ZDesc {
    pub fn set(d: DefSet) -> Arc<ZDesc> {
        Arc::new(ZDesc::Set(Arc::new(d)))
    }

    pub fn m(&self) -> usize {
        match self {
            ZDesc::Set(d) => d.m,
            ZDesc::Selector { base, .. } => base.m(),
            ZDesc::Product { factors } => factors.iter().map(|f| f.m()).sum(),
            ZDesc::Slice { inner, .. } => inner.m(),
            ZDesc::PushGraph { inner, map } => inner.m() + map.len(),
            ZDesc::AppendParam { inner, .. } => inner.m(),
            ZDesc::DropParam { inner, .. } => inner.m(),
            ZDesc::Union { members } => members.first().map(|f| f.m()).unwrap_or(0),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            ZDesc::Set(d) => d.k,
            ZDesc::Selector { base, .. } => base.k(),
            ZDesc::Product { factors } => factors.first().map(|f| f.k()).unwrap_or(0),
            ZDesc::Slice { inner, .. } => inner.k() + 1,
            ZDesc::PushGraph { inner, .. } => inner.k(),
            ZDesc::AppendParam { inner, map } => inner.k() + map.len(),
            ZDesc::DropParam { inner, .. } => inner.k() + 1,
            ZDesc::Union { members } => members.first().map(|f| f.k()).unwrap_or(0),
        }
    }

    pub fn l(&self) -> usize {
        match self {
            ZDesc::Set(d) => d.l,
            ZDesc::Selector { base, .. } => base.l(),
            ZDesc::Product { factors } => factors.iter().map(|f| f.l()).sum(),
            ZDesc::Slice { inner, .. } => inner.l() - 1,
            ZDesc::PushGraph { inner, .. } | ZDesc::AppendParam { inner, .. } | ZDesc::DropParam { inner, .. } => {
                inner.l()
            }
            ZDesc::Union { members } => members.first().map(|f| f.l()).unwrap_or(0),
        }
    }

    /// Upper bound on the number of elements of any fiber.
    pub fn fiber_bound(&self) -> usize {
        match self {
            ZDesc::Set(d) => d.fiber_bound(),
            ZDesc::Selector { .. } => 1,
            ZDesc::Product { factors } => factors.iter().map(|f| f.fiber_bound()).product(),
            ZDesc::Slice { inner, .. }
            | ZDesc::PushGraph { inner, .. }
            | ZDesc::AppendParam { inner, .. }
            | ZDesc::DropParam { inner, .. } => {
                inner.fiber_bound()
            }
            ZDesc::Union { members } => members.iter().map(|f| f.fiber_bound()).sum(),
        }
    }
}

/// A parameter-indexed family `X ⊆ M^{m+k}` whose fibers are computed by
/// enumerating a finite small-set model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum XDesc {
    /// `X_a = {b in S : conditions(b, a)}`.
    Explicit {
        k: usize,
        #[serde(rename = "S")]
        s: Arc<SmallSet>,
        #[serde(default)]
        conditions: Vec<Condition>,
    },
    /// `X_a = {map(b) : b in parent_a}`.
    Image {
        parent: Arc<XDesc>,
        map: Vec<RatFunc>,
        #[serde(rename = "S")]
        s: Arc<SmallSet>,
    },
    Product {
        factors: Vec<Arc<XDesc>>,
        #[serde(rename = "S")]
        s: Arc<SmallSet>,
    },
    Filtered { parent: Arc<XDesc>, predicate: Predicate },
    /// `X_a = inner_{a'}` with `a'` being `a` without coordinate `param`.
    DropParam { inner: Arc<XDesc>, param: usize },
    /// `X_a = {(b, map(b)) : b in inner_a}`.
    PushGraph {
        inner: Arc<XDesc>,
        map: Vec<RatFunc>,
        #[serde(rename = "S")]
        s: Arc<SmallSet>,
    },
    /// `X_{(a, e)} = {b in inner_a : e = map(b, a)}`.
    AppendParam { inner: Arc<XDesc>, map: Vec<RatFunc> },
}

impl XDesc {
    pub fn explicit(k: usize, s: Arc<SmallSet>) -> Arc<XDesc> {
        Arc::new(XDesc::Explicit { k, s, conditions: vec![] })
    }

    pub fn filtered(parent: Arc<XDesc>, predicate: Predicate) -> Arc<XDesc> {
        Arc::new(XDesc::Filtered { parent, predicate })
    }

    /// The small set every fiber lives in.
    pub fn small(&self) -> &Arc<SmallSet> {
        match self {
            XDesc::Explicit { s, .. } | XDesc::Image { s, .. } | XDesc::Product { s, .. } => s,
            XDesc::PushGraph { s, .. } => s,
            XDesc::Filtered { parent, .. } => parent.small(),
            XDesc::DropParam { inner, .. } | XDesc::AppendParam { inner, .. } => inner.small(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            XDesc::Explicit { k, .. } => *k,
            XDesc::Image { parent, .. } | XDesc::Filtered { parent, .. } => parent.k(),
            XDesc::Product { factors, .. } => factors.first().map(|f| f.k()).unwrap_or(0),
            XDesc::DropParam { inner, .. } => inner.k() + 1,
            XDesc::PushGraph { inner, .. } => inner.k(),
            XDesc::AppendParam { inner, map } => inner.k() + map.len(),
        }
    }

    /// Structural containment: every node's points come from its own small
    /// set, and each small set is derived from its children's sets by the
    /// matching image/product/subset step. Returns a description of the
    /// first offending node.
    pub fn structural_check(&self) -> Result<(), String> {
        let own = self.small();
        if !own.derivation_is_sound() {
            return Err(format!("small set of {} node has an unsound derivation", self.kind()));
        }
        match self {
            XDesc::Explicit { .. } => Ok(()),
            XDesc::Image { parent, s, .. } | XDesc::PushGraph { inner: parent, s, .. } => {
                parent.structural_check()?;
                match &s.derivation {
                    super::smallset::Derivation::Image { parent: sp, .. } if derives_from(sp, parent.small()) => Ok(()),
                    _ => Err(format!("{} node's small set is not the image of its parent's", self.kind())),
                }
            }
            XDesc::Product { factors, s } => {
                for f in factors {
                    f.structural_check()?;
                }
                match &s.derivation {
                    super::smallset::Derivation::Product { parents }
                        if parents.len() == factors.len()
                            && parents.iter().zip(factors).all(|(p, f)| **p == **f.small()) =>
                    {
                        Ok(())
                    }
                    _ => Err("product node's small set is not the product of its factors'".into()),
                }
            }
            XDesc::Filtered { parent, .. } | XDesc::DropParam { inner: parent, .. } | XDesc::AppendParam { inner: parent, .. } => {
                parent.structural_check()
            }
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            XDesc::Explicit { .. } => "explicit",
            XDesc::Image { .. } => "image",
            XDesc::Product { .. } => "product",
            XDesc::Filtered { .. } => "filtered",
            XDesc::DropParam { .. } => "drop_param",
            XDesc::PushGraph { .. } => "push_graph",
            XDesc::AppendParam { .. } => "append_param",
        }
    }
}

/// `s` equals `base` or is a subset carved out of it.
fn derives_from(s: &Arc<SmallSet>, base: &Arc<SmallSet>) -> bool {
    if Arc::ptr_eq(s, base) || **s == **base {
        return true;
    }
    match &s.derivation {
        super::smallset::Derivation::Subset { parent } => derives_from(parent, base),
        _ => false,
    }
}

/// Bounded predicates. Quantifiers range over the parent fiber (a finite
/// subset of a small-set model) or over an explicit small set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Predicate {
    /// `b = (b_1, b_2)` with blocks of length `block` and `b_1 != b_2`.
    OffDiagonal { block: usize },
    Member {
        #[serde(rename = "S")]
        s: Arc<SmallSet>,
    },
    /// The `selector` value at `b` is not in the `z`-fiber of any other
    /// member of the parent fiber.
    Unshared { z: Arc<ZDesc>, selector: Arc<ZDesc> },
    /// `b` has a nonempty `z`-fiber and is the lexicographic minimum of the
    /// members of the parent fiber with the same `z`-fiber.
    LexMin { z: Arc<ZDesc> },
    /// Some `c` in the target's `X_a` has `z_{b,a} ⊆ target.Z_{c,a}`.
    CoveredBy { z: Arc<ZDesc>, target: Arc<Ufss> },
    /// Some `g` in `S` with `domain(g, a)` has `rows · g = b`.
    Preimage {
        #[serde(rename = "S")]
        s: Arc<SmallSet>,
        domain: Vec<Condition>,
        rows: Vec<Vec<Rational>>,
    },
    /// Sign conditions on `(b, a)`.
    Conditions { conditions: Vec<Condition> },
}

/// `(Z, S, X)` with `X_a ⊆ S` and finite `Z`-fibers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ufss {
    pub m: usize,
    pub k: usize,
    pub l: usize,
    #[serde(rename = "Z")]
    pub z: Arc<ZDesc>,
    #[serde(rename = "S")]
    pub s: Arc<SmallSet>,
    #[serde(rename = "X")]
    pub x: Arc<XDesc>,
    #[serde(default)]
    pub injective: bool,
}

impl Ufss {
    pub fn new(z: Arc<ZDesc>, x: Arc<XDesc>, injective: bool) -> Ufss {
        Ufss { m: z.m(), k: z.k(), l: z.l(), s: x.small().clone(), z, x, injective }
    }

    /// Arity consistency between the three components.
    pub fn check_arity(&self) -> crate::error::Result<()> {
        let z = (self.z.m(), self.z.k(), self.z.l());
        if z != (self.m, self.k, self.l) {
            return Err(crate::error::Error::Arity(format!(
                "Z has arity {:?}, declared ({}, {}, {})",
                z, self.m, self.k, self.l
            )));
        }
        if self.s.dim != self.m {
            return Err(crate::error::Error::Arity(format!("S has dimension {}, expected {}", self.s.dim, self.m)));
        }
        if self.x.k() != self.k {
            return Err(crate::error::Error::Arity(format!("X has {} parameters, expected {}", self.x.k(), self.k)));
        }
        Ok(())
    }
}
