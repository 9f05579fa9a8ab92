use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::field::Field;
use super::rational::Rational;

/// Dense univariate polynomial, coefficients stored low degree first with no
/// trailing zeros. The zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound(serialize = "C: Serialize", deserialize = "C: Deserialize<'de> + Field"))]
#[serde(from = "Vec<C>", into = "Vec<C>")]
pub struct UPoly<C: Field> {
    coeffs: Vec<C>,
}

impl<C: Field> From<Vec<C>> for UPoly<C> {
    fn from(v: Vec<C>) -> Self {
        UPoly::new(v)
    }
}

impl<C: Field> From<UPoly<C>> for Vec<C> {
    fn from(p: UPoly<C>) -> Self {
        p.coeffs
    }
}

impl<C: Field> UPoly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: vec![] }
    }

    pub fn constant(c: C) -> Self {
        UPoly::new(vec![c])
    }

    /// `x`
    pub fn x() -> Self {
        UPoly::new(vec![C::zero(), C::one()])
    }

    pub fn monomial(c: C, deg: usize) -> Self {
        let mut v = vec![C::zero(); deg + 1];
        v[deg] = c;
        UPoly::new(v)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> C {
        self.coeffs.last().cloned().unwrap_or_else(C::zero)
    }

    pub fn eval(&self, x: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, s: &C) -> Self {
        UPoly::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * from_usize::<C>(i))
            .collect();
        UPoly::new(v)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().inv())
    }

    /// Euclidean division. Panics if `d` is zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.leading().inv();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![C::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = rem[top].clone() * lead_inv.clone();
            let shift = top - dd;
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[shift + i] = rem[shift + i].clone() - c.clone() * dc.clone();
            }
            quot[shift] = c;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (UPoly::new(quot), UPoly::new(rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`, monic.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Composition `self(q(x))`.
    pub fn compose(&self, q: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(UPoly::zero(), |acc, c| &(&acc * q) + &UPoly::constant(c.clone()))
    }
}

fn from_usize<C: Field>(n: usize) -> C {
    let mut acc = C::zero();
    let mut base = C::one();
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc + base.clone();
        }
        base = base.clone() + base;
        n >>= 1;
    }
    acc
}

impl<'a, C: Field> Add for &'a UPoly<C> {
    type Output = UPoly<C>;
    fn add(self, rhs: Self) -> UPoly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a, C: Field> Sub for &'a UPoly<C> {
    type Output = UPoly<C>;
    fn sub(self, rhs: Self) -> UPoly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a, C: Field> Mul for &'a UPoly<C> {
    type Output = UPoly<C>;
    fn mul(self, rhs: Self) -> UPoly<C> {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        UPoly::new(v)
    }
}

impl<C: Field> Neg for UPoly<C> {
    type Output = UPoly<C>;
    fn neg(self) -> UPoly<C> {
        UPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<C: Field + fmt::Display> fmt::Display for UPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*z")?,
                _ => write!(f, "({c})*z^{i}")?,
            }
        }
        Ok(())
    }
}

impl<C: Field> fmt::Debug for UPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly{:?}", self.coeffs)
    }
}

impl UPoly<Rational> {
    /// Sign of `p(x)` at a rational point.
    pub fn sign_at(&self, x: &Rational) -> i32 {
        self.eval(x).sign()
    }

    /// Bound `B` with every real root in `(-B, B)`.
    pub fn root_bound(&self) -> Rational {
        let lead = self.leading().abs();
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / lead.clone())
            .fold(Rational::zero(), Rational::max);
        m + Rational::one() + Rational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> UPoly<Rational> {
        UPoly::new(v.iter().map(|&c| Rational::from_int(c)).collect())
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let p = &(&q(&[-1, 1]) * &q(&[-1, 1])) * &q(&[2, 1]);
        assert_eq!(p.squarefree_part(), &q(&[-1, 1]) * &q(&[2, 1]));
        assert_eq!(p.gcd(&q(&[-1, 1])), q(&[-1, 1]));
        assert_eq!(q(&[1, 0, 1]).gcd(&q(&[-1, 1])), q(&[1]));
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = q(&[3, 0, -2, 5]);
        let b = q(&[1, 2]);
        let (qq, r) = a.div_rem(&b);
        assert_eq!(&(&qq * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn generic_over_f64() {
        let p: UPoly<f64> = UPoly::new(vec![-2.0, 0.0, 1.0]);
        assert!((p.eval(&2f64.sqrt())).abs() < 1e-12);
        assert_eq!(p.derivative(), UPoly::new(vec![0.0, 2.0]));
    }

    #[test]
    fn compose_shift() {
        // (x^2)(x+1) = x^2 + 2x + 1
        assert_eq!(q(&[0, 0, 1]).compose(&q(&[1, 1])), q(&[1, 2, 1]));
    }
}
