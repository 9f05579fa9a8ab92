//! Affine maps `h(g, a) = R g + S a + c`: collisions are resolved once and
//! for all by passing to the values `t = R g`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::calculus::graph_set;
use crate::algebra::{MPoly, QPoly, Rational};
use crate::error::{Error, Result};
use crate::model::{
    ChoiceDecomposition, ChoiceInstance, ChoicePiece, Condition, DecompositionResult, MapDescriptor, Piece,
    Predicate, SmallSet, Tag, XDesc, ZDesc,
};

/// `h_j(g, a) = r_j · g + s_j · a + b_j` on the set cut out by `domain`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineMap {
    pub n: usize,
    pub k: usize,
    pub r: Vec<Vec<Rational>>,
    pub s: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
    #[serde(default)]
    pub domain: Vec<Condition>,
}

fn affine(nvars: usize, coeffs: &[(usize, &Rational)], c: &Rational) -> QPoly {
    let mut p = QPoly::constant(nvars, c.clone());
    for (i, v) in coeffs {
        p = &p + &MPoly::var(nvars, *i).scale(v);
    }
    p
}

impl AffineMap {
    pub fn l(&self) -> usize {
        self.r.len()
    }

    pub fn validate(&self) -> Result<()> {
        let l = self.l();
        if self.s.len() != l || self.b.len() != l {
            return Err(Error::Arity(format!("{l} rows of r, {} of s, {} constants", self.s.len(), self.b.len())));
        }
        if self.r.iter().any(|row| row.len() != self.n) || self.s.iter().any(|row| row.len() != self.k) {
            return Err(Error::Arity(format!("rows must have lengths n = {} and k = {}", self.n, self.k)));
        }
        if self.domain.iter().any(|c| c.poly.nvars() != self.n + self.k) {
            return Err(Error::Arity("domain conditions must be over (g, a)".into()));
        }
        Ok(())
    }

    /// `h` as a polynomial map on `(g, a)`.
    pub fn components(&self) -> Vec<QPoly> {
        let nv = self.n + self.k;
        (0..self.l())
            .map(|j| {
                let terms: Vec<(usize, &Rational)> =
                    self.r[j].iter().enumerate().chain(self.s[j].iter().enumerate().map(|(i, v)| (self.n + i, v))).collect();
                affine(nv, &terms, &self.b[j])
            })
            .collect()
    }

    pub fn to_choice_instance(&self, s: Arc<SmallSet>) -> ChoiceInstance {
        ChoiceInstance {
            h: MapDescriptor::polynomial(self.n, self.k, self.components()),
            s,
            domain: self.domain.clone(),
        }
    }

    /// `h_0(t, a) = t + S a + c` on `(t, a)`.
    fn translated(&self) -> Vec<QPoly> {
        let l = self.l();
        (0..l)
            .map(|j| {
                let mut terms: Vec<(usize, &Rational)> = self.s[j].iter().enumerate().map(|(i, v)| (l + i, v)).collect();
                let one = Rational::from_int(1);
                terms.push((j, &one));
                affine(l + self.k, &terms, &self.b[j])
            })
            .collect()
    }
}

fn pieces(h: &AffineMap, s: &Arc<SmallSet>) -> Result<(Arc<XDesc>, Arc<SmallSet>, Vec<QPoly>)> {
    h.validate()?;
    if s.dim != h.n {
        return Err(Error::Arity(format!("S has dimension {}, map expects {}", s.dim, h.n)));
    }
    let y = SmallSet::image(s, h.l(), "linear-part", |g| {
        Ok(h.r.iter().map(|row| row.iter().zip(g).fold(Rational::from_int(0), |acc, (r, x)| acc + r.clone() * x.clone())).collect())
    })?;
    let y = Arc::new(y);
    let x = XDesc::filtered(
        XDesc::explicit(h.k, y.clone()),
        Predicate::Preimage { s: s.clone(), domain: h.domain.clone(), rows: h.r.clone() },
    );
    Ok((x, y, h.translated()))
}

/// One piece `(h_0, X, Y)`: `h_0(-, a)` is a translation, hence injective.
pub fn decompose_linear(h: &AffineMap, s: &Arc<SmallSet>) -> Result<ChoiceDecomposition> {
    let (x, y, comps) = pieces(h, s)?;
    Ok(ChoiceDecomposition { pieces: vec![ChoicePiece { h: MapDescriptor::polynomial(h.l(), h.k, comps), x, y }] })
}

/// The same piece as an injective family: the graph of `h_0` over `X`.
pub fn linear_result(h: &AffineMap, s: &Arc<SmallSet>) -> Result<DecompositionResult> {
    let (x, _, comps) = pieces(h, s)?;
    let z = ZDesc::set(graph_set(h.l(), h.k, &[], &comps));
    Ok(DecompositionResult { pieces: vec![Piece::new(z, x, Tag::Linear)], ..Default::default() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Evaluator;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn translation_covers_image() {
        let h = AffineMap { n: 1, k: 1, r: vec![vec![q(2)]], s: vec![vec![q(3)]], b: vec![q(1)], domain: vec![] };
        let s = Arc::new(SmallSet::base(1, vec![vec![q(0)], vec![q(1)]]));
        let dec = decompose_linear(&h, &s).unwrap();
        assert_eq!(dec.pieces[0].y.points(), &[vec![q(0)], vec![q(2)]]);
        let inst = h.to_choice_instance(s);
        let ev = Evaluator::new();
        for a in -3..=3 {
            let a = [q(a)];
            // 3a + 1 and 3a + 3 computed by hand
            let want: Vec<_> = [3 * 1, 3 * 1 + 2]
                .iter()
                .map(|&c| vec![crate::algebra::AlgebraicReal::from_rational(&(&q(3) * &a[0]) + &q(c - 2))])
                .collect();
            assert_eq!(inst.image(&ev, &a).unwrap(), want);
            assert_eq!(dec.cover(&ev, &a).unwrap(), want);
        }
    }
}
