use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::field::Field;
use super::mpoly::MPoly;
use super::rational::Rational;
use crate::error::AlgebraError;

pub type QPoly = MPoly<Rational>;

/// Rational function `numer / denom` over the rationals.
///
/// Constants created through `Zero`/`One` carry zero variables and are
/// widened on contact with a function of more variables.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "RatFuncRepr", into = "RatFuncRepr")]
pub struct RatFunc {
    numer: QPoly,
    denom: QPoly,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RatFuncRepr {
    numer: QPoly,
    denom: QPoly,
}

impl From<RatFunc> for RatFuncRepr {
    fn from(f: RatFunc) -> Self {
        RatFuncRepr { numer: f.numer, denom: f.denom }
    }
}

impl TryFrom<RatFuncRepr> for RatFunc {
    type Error = AlgebraError;
    fn try_from(r: RatFuncRepr) -> Result<Self, AlgebraError> {
        RatFunc::new(r.numer, r.denom)
    }
}

fn widen(p: &QPoly, nvars: usize) -> QPoly {
    if p.nvars() == nvars {
        p.clone()
    } else {
        debug_assert!(p.is_constant(), "cannot widen a non-constant polynomial");
        QPoly::constant(nvars, p.constant_term())
    }
}

impl RatFunc {
    pub fn new(numer: QPoly, denom: QPoly) -> Result<Self, AlgebraError> {
        if denom.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if numer.nvars() != denom.nvars() {
            return Err(AlgebraError::Dimension { expected: numer.nvars(), got: denom.nvars() });
        }
        Ok(RatFunc { numer, denom }.normalized())
    }

    pub fn from_poly(p: QPoly) -> Self {
        let n = p.nvars();
        RatFunc { numer: p, denom: QPoly::one(n) }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        RatFunc::from_poly(QPoly::constant(nvars, c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        RatFunc::from_poly(QPoly::var(nvars, i))
    }

    pub fn numer(&self) -> &QPoly {
        &self.numer
    }

    pub fn denom(&self) -> &QPoly {
        &self.denom
    }

    pub fn nvars(&self) -> usize {
        self.numer.nvars()
    }

    pub fn is_polynomial(&self) -> bool {
        self.denom.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.numer.is_constant() && self.denom.is_constant()
    }

    /// The constant value, if the function is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        self.is_constant().then(|| self.numer.constant_term() / self.denom.constant_term())
    }

    /// `None` where the denominator vanishes.
    pub fn eval(&self, x: &[Rational]) -> Option<Rational> {
        let n = widen(&self.numer, x.len());
        let d = widen(&self.denom, x.len());
        let dv = d.eval(x);
        if dv.is_zero() {
            None
        } else {
            Some(n.eval(x) / dv)
        }
    }

    /// Re-embeds into a space with more variables (`at` is where the new
    /// variables are inserted).
    pub fn insert_vars(&self, at: usize, count: usize) -> Self {
        RatFunc { numer: self.numer.insert_vars(at, count), denom: self.denom.insert_vars(at, count) }
    }

    pub fn remap_vars(&self, nvars: usize, map: &[usize]) -> Self {
        RatFunc { numer: self.numer.remap_vars(nvars, map), denom: self.denom.remap_vars(nvars, map) }
    }

    pub fn widened(&self, nvars: usize) -> Self {
        RatFunc { numer: widen(&self.numer, nvars), denom: widen(&self.denom, nvars) }
    }

    fn normalized(mut self) -> Self {
        let n = self.numer.nvars();
        if self.numer.is_zero() {
            return RatFunc { numer: QPoly::zero(n), denom: QPoly::one(n) };
        }
        if self.denom.is_constant() {
            let c = self.denom.constant_term();
            self.numer = self.numer.scale(&c.inv());
            self.denom = QPoly::one(n);
            return self;
        }
        // make the denominator's first coefficient 1
        let lead = self.denom.terms().next().map(|(_, c)| c.clone()).unwrap();
        if lead != Rational::one() {
            let s = lead.inv();
            self.numer = self.numer.scale(&s);
            self.denom = self.denom.scale(&s);
        }
        if self.numer == self.denom {
            return RatFunc { numer: QPoly::one(n), denom: QPoly::one(n) };
        }
        self
    }

    fn aligned(a: &RatFunc, b: &RatFunc) -> (RatFunc, RatFunc) {
        let n = a.nvars().max(b.nvars());
        (a.widened(n), b.widened(n))
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = RatFunc::aligned(self, other);
        &a.numer * &b.denom == &b.numer * &a.denom
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        let (a, b) = RatFunc::aligned(&self, &rhs);
        if a.denom == b.denom {
            return RatFunc { numer: &a.numer + &b.numer, denom: a.denom }.normalized();
        }
        RatFunc {
            numer: &(&a.numer * &b.denom) + &(&b.numer * &a.denom),
            denom: &a.denom * &b.denom,
        }
        .normalized()
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        self + (-rhs)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        let (a, b) = RatFunc::aligned(&self, &rhs);
        if a.numer.is_zero() || b.numer.is_zero() {
            return RatFunc::constant(a.nvars(), Rational::zero());
        }
        RatFunc { numer: &a.numer * &b.numer, denom: &a.denom * &b.denom }.normalized()
    }
}

impl Div for RatFunc {
    type Output = RatFunc;
    /// Panics on division by the zero function.
    fn div(self, rhs: RatFunc) -> RatFunc {
        assert!(!rhs.numer.is_zero(), "division by the zero rational function");
        let (a, b) = RatFunc::aligned(&self, &rhs);
        RatFunc { numer: &a.numer * &b.denom, denom: &a.denom * &b.numer }.normalized()
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { numer: -self.numer, denom: self.denom }
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::constant(0, Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::constant(0, Rational::one())
    }
}

impl Field for RatFunc {}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{:?}", self.numer)
        } else {
            write!(f, "({:?})/({:?})", self.numer, self.denom)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn field_laws_on_examples() {
        let x = RatFunc::var(1, 0);
        let one = RatFunc::one();
        let f = one.clone() / x.clone();
        assert_eq!(f.clone() * x.clone(), one);
        assert_eq!(f.eval(&[r(4)]), Some(Rational::new(1, 4).unwrap()));
        assert_eq!(f.eval(&[r(0)]), None);
        let g = (x.clone() + one.clone()) / (x.clone() + one.clone());
        assert_eq!(g.as_constant(), Some(r(1)));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(RatFunc::new(QPoly::one(1), QPoly::zero(1)).unwrap_err(), AlgebraError::DivisionByZero);
    }
}
