use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::condition::{all_hold, Condition};
use super::defset::Tuple;
use super::descriptor::{XDesc, ZDesc};
use super::eval::{select, Evaluator};
use super::smallset::SmallSet;
use crate::algebra::{AlgebraicReal, QPoly, Rational};
use crate::error::{Error, Result};

/// One branch of a piecewise map `M^{m+k} -> M^l`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapPiece {
    /// Polynomial components on the set cut out by `domain`.
    Polynomial {
        #[serde(default)]
        domain: Vec<Condition>,
        components: Vec<QPoly>,
    },
    /// The `index`-th fiber element of `z` (smallest repeated up to `bound`);
    /// defined where the fiber is nonempty.
    Selector { z: Arc<ZDesc>, index: usize, bound: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDescriptor {
    pub m: usize,
    pub k: usize,
    pub l: usize,
    pub pieces: Vec<MapPiece>,
}

impl MapDescriptor {
    pub fn polynomial(m: usize, k: usize, components: Vec<QPoly>) -> Self {
        MapDescriptor { m, k, l: components.len(), pieces: vec![MapPiece::Polynomial { domain: vec![], components }] }
    }

    /// Value at `(b, a)`, or `None` outside the domain. Overlapping
    /// polynomial branches are rejected.
    pub fn eval(&self, ev: &Evaluator, b: &[Rational], a: &[Rational]) -> Result<Option<Tuple>> {
        let point: Vec<Rational> = b.iter().chain(a).cloned().collect();
        let mut found: Option<Tuple> = None;
        for piece in &self.pieces {
            let v = match piece {
                MapPiece::Polynomial { domain, components } => {
                    if !all_hold(domain, &point) {
                        continue;
                    }
                    components.iter().map(|c| AlgebraicReal::from_rational(c.eval(&point))).collect()
                }
                MapPiece::Selector { z, index, bound } => match select(&ev.fiber(z, b, a)?, *index, *bound)? {
                    Some(t) => t,
                    None => continue,
                },
            };
            if found.is_some() {
                return Err(Error::Contract(format!("map branches overlap at {point:?}")));
            }
            found = Some(v);
        }
        Ok(found)
    }

    pub fn validate(&self) -> Result<()> {
        for piece in &self.pieces {
            if let MapPiece::Polynomial { domain, components } = piece {
                if components.len() != self.l {
                    return Err(Error::Arity(format!("{} components for l = {}", components.len(), self.l)));
                }
                for q in components.iter().chain(domain.iter().map(|c| &c.poly)) {
                    if q.nvars() != self.m + self.k {
                        return Err(Error::Arity(format!(
                            "map polynomial in {} variables, expected {}",
                            q.nvars(),
                            self.m + self.k
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `h : Z ⊆ M^{n+k} -> M^l` together with a small `S ⊆ M^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChoiceInstance {
    pub h: MapDescriptor,
    #[serde(rename = "S")]
    pub s: Arc<SmallSet>,
    /// Sign conditions on `(g, a)` cutting out `Z`.
    #[serde(default)]
    pub domain: Vec<Condition>,
}

impl ChoiceInstance {
    /// `h(S ∩ Z_a, a)`, sorted.
    pub fn image(&self, ev: &Evaluator, a: &[Rational]) -> Result<Vec<Tuple>> {
        let mut out = Vec::new();
        for g in self.s.points() {
            let p: Vec<Rational> = g.iter().chain(a).cloned().collect();
            if !all_hold(&self.domain, &p) {
                continue;
            }
            if let Some(v) = self.h.eval(ev, g, a)? {
                out.push(v);
            }
        }
        Ok(super::eval::normalize_fiber(out))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChoicePiece {
    pub h: MapDescriptor,
    #[serde(rename = "X")]
    pub x: Arc<XDesc>,
    #[serde(rename = "Y")]
    pub y: Arc<SmallSet>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChoiceDecomposition {
    pub pieces: Vec<ChoicePiece>,
}

impl ChoiceDecomposition {
    /// `⋃_i h_i(X_{i,a}, a)`, sorted.
    pub fn cover(&self, ev: &Evaluator, a: &[Rational]) -> Result<Vec<Tuple>> {
        let mut out = Vec::new();
        for p in &self.pieces {
            for b in ev.x_fiber(&p.x, a)?.iter() {
                if let Some(v) = p.h.eval(ev, b, a)? {
                    out.push(v);
                }
            }
        }
        Ok(super::eval::normalize_fiber(out))
    }
}

/// Selector functions `f_1, ..., f_q` listing each fiber of `z`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberSelection {
    pub bound: usize,
    pub selectors: Vec<Arc<ZDesc>>,
}

impl FiberSelection {
    pub fn new(z: &Arc<ZDesc>) -> Self {
        let bound = z.fiber_bound().max(1);
        let selectors = (1..=bound)
            .map(|index| Arc::new(ZDesc::Selector { base: z.clone(), index, bound }))
            .collect();
        FiberSelection { bound, selectors }
    }

    /// `(f_1(b, a), ..., f_q(b, a))`; empty where the fiber is empty.
    pub fn values(&self, ev: &Evaluator, b: &[Rational], a: &[Rational]) -> Result<Vec<Tuple>> {
        let mut out = Vec::new();
        for s in &self.selectors {
            out.extend(ev.fiber(s, b, a)?.iter().cloned());
        }
        Ok(out)
    }
}
