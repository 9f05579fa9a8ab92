use serde::{Deserialize, Serialize};

use super::condition::{all_hold, sign_mixed, Condition};
use crate::algebra::{root_isolate, AlgebraicReal, ParamPoly, QPoly, RatFunc, Rational};
use crate::error::{AlgebraError, Error, Result};

/// A fiber element: one exact real per output coordinate.
pub type Tuple = Vec<AlgebraicReal>;

/// Semialgebraic set in normal form
/// `{(b, a, c) : p_i(b, a, c_i) = 0, couplings = 0, strict > 0, (b, a) in U}`.
///
/// With `l = 1` there is one equation; for `l > 1` each output coordinate
/// carries its own equation and cross-coordinate constraints go in
/// `couplings`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DefSetRepr", into = "DefSetRepr")]
pub struct DefSet {
    pub m: usize,
    pub k: usize,
    pub l: usize,
    pub p: Vec<ParamPoly>,
    pub couplings: Vec<QPoly>,
    pub strict: Vec<QPoly>,
    pub ambient: Vec<Condition>,
    pub guards: Vec<RatFunc>,
    /// When set, an identically vanishing equation gives an empty fiber
    /// instead of a degeneracy error.
    pub nondegenerate: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(ParamPoly),
    Many(Vec<ParamPoly>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DefSetRepr {
    m: usize,
    k: usize,
    l: usize,
    p: OneOrMany,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    couplings: Vec<QPoly>,
    #[serde(default)]
    strict: Vec<QPoly>,
    #[serde(default)]
    ambient: Vec<Condition>,
    #[serde(default)]
    guards: Vec<RatFunc>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    nondegenerate: bool,
}

impl From<DefSet> for DefSetRepr {
    fn from(d: DefSet) -> Self {
        let p = if d.p.len() == 1 { OneOrMany::One(d.p[0].clone()) } else { OneOrMany::Many(d.p) };
        DefSetRepr {
            m: d.m,
            k: d.k,
            l: d.l,
            p,
            couplings: d.couplings,
            strict: d.strict,
            ambient: d.ambient,
            guards: d.guards,
            nondegenerate: d.nondegenerate,
        }
    }
}

impl TryFrom<DefSetRepr> for DefSet {
    type Error = Error;
    fn try_from(r: DefSetRepr) -> Result<Self> {
        let p = match r.p {
            OneOrMany::One(p) => vec![p],
            OneOrMany::Many(v) => v,
        };
        let d = DefSet {
            m: r.m,
            k: r.k,
            l: r.l,
            p,
            couplings: r.couplings,
            strict: r.strict,
            ambient: r.ambient,
            guards: r.guards,
            nondegenerate: r.nondegenerate,
        };
        d.validate()?;
        Ok(d)
    }
}

fn dim_err(expected: usize, got: usize) -> Error {
    Error::Algebra(AlgebraError::Dimension { expected, got })
}

impl DefSet {
    /// `l = 1` set `{p = 0}` with nothing else attached.
    pub fn equation(p: ParamPoly) -> Self {
        DefSet {
            m: p.n(),
            k: p.k(),
            l: 1,
            p: vec![p],
            couplings: vec![],
            strict: vec![],
            ambient: vec![],
            guards: vec![],
            nondegenerate: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p.len() != self.l {
            return Err(Error::Arity(format!("{} equations for l = {}", self.p.len(), self.l)));
        }
        for p in &self.p {
            if p.n() != self.m {
                return Err(dim_err(self.m, p.n()));
            }
            if p.k() != self.k {
                return Err(dim_err(self.k, p.k()));
            }
        }
        let full = self.m + self.k + self.l;
        for q in self.couplings.iter().chain(&self.strict) {
            if q.nvars() != full {
                return Err(dim_err(full, q.nvars()));
            }
        }
        for c in &self.ambient {
            if c.poly.nvars() != self.m + self.k {
                return Err(dim_err(self.m + self.k, c.poly.nvars()));
            }
        }
        for g in &self.guards {
            if g.nvars() != self.m && !g.is_constant() {
                return Err(dim_err(self.m, g.nvars()));
            }
        }
        Ok(())
    }

    /// Same set without the strict inequalities.
    pub fn without_strict(&self) -> DefSet {
        DefSet { strict: vec![], ..self.clone() }
    }

    /// Whether `(b, a)` lies in the ambient set and passes all guards.
    pub fn admits(&self, b: &[Rational], a: &[Rational]) -> bool {
        let guards_ok = self.guards.iter().all(|g| g.eval(b).map(|v| v.sign() != 0).unwrap_or(false));
        let point: Vec<Rational> = b.iter().chain(a).cloned().collect();
        guards_ok && all_hold(&self.ambient, &point)
    }

    /// The exact finite fiber `Z_{b,a}`, sorted lexicographically.
    pub fn fiber(&self, b: &[Rational], a: &[Rational]) -> Result<Vec<Tuple>> {
        if b.len() != self.m || a.len() != self.k {
            return Err(Error::Arity(format!(
                "fiber point has arity ({}, {}), expected ({}, {})",
                b.len(),
                a.len(),
                self.m,
                self.k
            )));
        }
        if !self.admits(b, a) {
            return Ok(vec![]);
        }
        let mut tuples: Vec<Tuple> = vec![vec![]];
        for p in &self.p {
            let u = p.fiber_poly(b, a)?;
            if u.is_zero() {
                if self.nondegenerate {
                    return Ok(vec![]);
                }
                return Err(Error::Degenerate { b: b.to_vec(), a: a.to_vec() });
            }
            let roots = root_isolate(&u)?;
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    roots.iter().map(move |r| {
                        let mut t = t.clone();
                        t.push(r.clone());
                        t
                    })
                })
                .collect();
            if tuples.is_empty() {
                return Ok(tuples);
            }
        }
        if self.couplings.is_empty() && self.strict.is_empty() {
            return Ok(tuples);
        }
        let head: Vec<Rational> = b.iter().chain(a).cloned().collect();
        tuples.retain(|t| {
            self.couplings.iter().all(|q| sign_mixed(q, &head, t) == 0)
                && self.strict.iter().all(|q| sign_mixed(q, &head, t) > 0)
        });
        Ok(tuples)
    }

    /// Upper bound on the fiber size.
    pub fn fiber_bound(&self) -> usize {
        self.p.iter().map(|p| p.z_degree() as usize).product()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::OrderIndex;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn c(n: i64) -> RatFunc {
        RatFunc::constant(1, r(n))
    }

    #[test]
    fn square_root_fiber() {
        // z^2 - b with guard b > 0
        let p = ParamPoly::from_terms(
            1,
            0,
            [(OrderIndex::new(vec![], 2), c(1)), (OrderIndex::new(vec![], 0), -RatFunc::var(1, 0))],
        );
        let mut z = DefSet::equation(p);
        z.ambient.push(Condition::new(QPoly::var(1, 0), super::super::condition::Relation::Gt));
        let f = z.fiber(&[r(4)], &[]).unwrap();
        assert_eq!(f, vec![vec![AlgebraicReal::from_int(-2)], vec![AlgebraicReal::from_int(2)]]);
        assert!(z.fiber(&[r(-4)], &[]).unwrap().is_empty());
    }

    #[test]
    fn linear_and_empty_fibers() {
        // z - b*a
        let p = ParamPoly::from_terms(
            1,
            1,
            [(OrderIndex::new(vec![0], 1), c(1)), (OrderIndex::new(vec![1], 0), -RatFunc::var(1, 0))],
        );
        let z = DefSet::equation(p);
        assert_eq!(z.fiber(&[r(2)], &[r(3)]).unwrap(), vec![vec![AlgebraicReal::from_int(6)]]);
        // z^2 + 1
        let p = ParamPoly::from_terms(1, 1, [(OrderIndex::new(vec![0], 2), c(1)), (OrderIndex::new(vec![0], 0), c(1))]);
        assert!(DefSet::equation(p).fiber(&[r(5)], &[r(1)]).unwrap().is_empty());
    }

    #[test]
    fn degenerate_signal() {
        // a*z vanishes identically at a = 0
        let p = ParamPoly::from_terms(1, 1, [(OrderIndex::new(vec![1], 1), c(1))]);
        let mut z = DefSet::equation(p);
        assert!(matches!(z.fiber(&[r(1)], &[r(0)]), Err(Error::Degenerate { .. })));
        z.nondegenerate = true;
        assert!(z.fiber(&[r(1)], &[r(0)]).unwrap().is_empty());
    }
}
