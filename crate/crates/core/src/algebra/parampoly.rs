use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::mpoly::MPoly;
use super::order::{monomial_order, OrderIndex};
use super::ratfunc::{QPoly, RatFunc};
use super::rational::Rational;
use super::upoly::UPoly;
use crate::error::{AlgebraError, Error, Result};

/// `p(x, y, z) = sum f_{i,j}(x) y^i z^j` with rational-function coefficients
/// in `n` variables `x`, `k` parameter variables `y` and one fiber variable
/// `z`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamPolyRepr", into = "ParamPolyRepr")]
pub struct ParamPoly {
    n: usize,
    k: usize,
    poly: MPoly<RatFunc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamPolyRepr {
    n: usize,
    k: usize,
    poly: MPoly<RatFunc>,
}

impl From<ParamPoly> for ParamPolyRepr {
    fn from(p: ParamPoly) -> Self {
        ParamPolyRepr { n: p.n, k: p.k, poly: p.poly }
    }
}

impl TryFrom<ParamPolyRepr> for ParamPoly {
    type Error = AlgebraError;
    fn try_from(r: ParamPolyRepr) -> Result<Self, AlgebraError> {
        if r.poly.nvars() != r.k + 1 {
            return Err(AlgebraError::Dimension { expected: r.k + 1, got: r.poly.nvars() });
        }
        for (_, c) in r.poly.terms() {
            if c.nvars() != r.n && !c.is_constant() {
                return Err(AlgebraError::Dimension { expected: r.n, got: c.nvars() });
            }
        }
        Ok(ParamPoly::new(r.n, r.k, r.poly))
    }
}

impl std::fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ParamPoly[n={}, k={}]({:?})", self.n, self.k, self.poly)
    }
}

impl ParamPoly {
    /// Coefficients are widened to `n` variables.
    pub fn new(n: usize, k: usize, poly: MPoly<RatFunc>) -> Self {
        assert_eq!(poly.nvars(), k + 1, "ParamPoly needs k + 1 variables");
        let poly = poly.map_coeffs(|c| c.widened(n));
        ParamPoly { n, k, poly }
    }

    pub fn zero(n: usize, k: usize) -> Self {
        ParamPoly { n, k, poly: MPoly::zero(k + 1) }
    }

    pub fn from_terms(n: usize, k: usize, terms: impl IntoIterator<Item = (OrderIndex, RatFunc)>) -> Self {
        let poly = MPoly::from_terms(k + 1, terms.into_iter().map(|(i, c)| (i.to_exponent_vector(), c)));
        ParamPoly::new(n, k, poly)
    }

    /// Builds from a polynomial over `(x_1..x_n, y_1..y_k, z)` with rational
    /// coefficients.
    pub fn from_joint(n: usize, k: usize, p: &QPoly) -> Self {
        assert_eq!(p.nvars(), n + k + 1);
        let mut by_index: BTreeMap<Vec<u32>, Vec<(Vec<u32>, Rational)>> = BTreeMap::new();
        for (e, c) in p.terms() {
            by_index.entry(e[n..].to_vec()).or_default().push((e[..n].to_vec(), c.clone()));
        }
        let poly = MPoly::from_terms(
            k + 1,
            by_index.into_iter().map(|(idx, t)| (idx, RatFunc::from_poly(QPoly::from_terms(n, t)))),
        );
        ParamPoly { n, k, poly }
    }

    /// Inverse of [`ParamPoly::from_joint`] after clearing denominators
    /// with the product of the distinct coefficient denominators. The zero
    /// set is unchanged wherever those denominators are nonzero.
    pub fn to_joint_cleared(&self) -> QPoly {
        let mut dens: Vec<QPoly> = Vec::new();
        for (_, c) in self.poly.terms() {
            if !c.is_polynomial() && !dens.contains(c.denom()) {
                dens.push(c.denom().clone());
            }
        }
        let total = self.n + self.k + 1;
        let mut acc = QPoly::zero(total);
        for (e, c) in self.poly.terms() {
            let mut num = c.numer().clone();
            for d in &dens {
                if d != c.denom() {
                    num = &num * d;
                }
            }
            let lifted = num.insert_vars(self.n, self.k + 1);
            let mut mono = vec![0; total];
            mono[self.n..].copy_from_slice(e);
            acc = &acc + &(&lifted * &QPoly::monomial(mono, Rational::from_int(1)));
        }
        acc
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn poly(&self) -> &MPoly<RatFunc> {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coeff(&self, idx: &OrderIndex) -> RatFunc {
        self.poly.coeff(&idx.to_exponent_vector())
    }

    /// Support in increasing ≺ order.
    pub fn support(&self) -> Vec<OrderIndex> {
        let mut s: Vec<OrderIndex> = self.poly.terms().map(|(e, _)| OrderIndex::from_exponent_vector(e)).collect();
        s.sort();
        s
    }

    pub fn order(&self) -> Option<OrderIndex> {
        monomial_order(&self.poly)
    }

    /// Support set and its ≺-maximum.
    pub fn leading_support(&self) -> Result<(Vec<OrderIndex>, OrderIndex), AlgebraError> {
        let s = self.support();
        let lead = s.last().cloned().ok_or(AlgebraError::ZeroPolynomial)?;
        Ok((s, lead))
    }

    pub fn z_degree(&self) -> u32 {
        self.poly.degree_in(self.k).unwrap_or(0)
    }

    /// Drops every index ≻ `idx`.
    pub fn truncate_above(&self, idx: &OrderIndex) -> ParamPoly {
        let poly = MPoly::from_terms(
            self.k + 1,
            self.poly
                .terms()
                .filter(|(e, _)| OrderIndex::from_exponent_vector(e) <= *idx)
                .map(|(e, c)| (e.clone(), c.clone())),
        );
        ParamPoly { n: self.n, k: self.k, poly }
    }

    /// Divides through by the coefficient at `idx`; the returned guard is the
    /// divisor, which must be nonzero wherever the result is used.
    pub fn divide_by_coeff(&self, idx: &OrderIndex) -> Result<(ParamPoly, RatFunc), AlgebraError> {
        let f = self.coeff(idx);
        if f.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let inv = RatFunc::constant(self.n, Rational::from_int(1)) / f.clone();
        Ok((ParamPoly { n: self.n, k: self.k, poly: self.poly.scale(&inv) }, f))
    }

    /// Specializes `x := b`, giving a polynomial in `(y, z)`.
    pub fn specialize(&self, b: &[Rational]) -> Result<QPoly> {
        if b.len() != self.n {
            return Err(Error::Arity(format!("expected {} x-values, got {}", self.n, b.len())));
        }
        self.poly.try_map_coeffs(|c| {
            c.eval(b).ok_or_else(|| Error::Guard {
                point: b.to_vec(),
                reason: format!("coefficient denominator {:?} vanishes", c.denom()),
            })
        })
    }

    /// `p(b, a, -)` as a univariate polynomial in `z`.
    pub fn fiber_poly(&self, b: &[Rational], a: &[Rational]) -> Result<UPoly<Rational>> {
        if a.len() != self.k {
            return Err(Error::Arity(format!("expected {} parameters, got {}", self.k, a.len())));
        }
        let q = self.specialize(b)?;
        Ok(q.partial_eval(0, a).to_univariate(0))
    }

    /// Coefficients as a polynomial in `z`, each a polynomial in `(y, z)`
    /// with the `z` exponent zeroed.
    pub fn z_coefficients(&self) -> BTreeMap<u32, MPoly<RatFunc>> {
        self.poly.coefficients_in(self.k)
    }

    pub fn sub(&self, other: &ParamPoly) -> ParamPoly {
        assert_eq!((self.n, self.k), (other.n, other.k));
        ParamPoly { n: self.n, k: self.k, poly: &self.poly - &other.poly }
    }

    pub fn add(&self, other: &ParamPoly) -> ParamPoly {
        assert_eq!((self.n, self.k), (other.n, other.k));
        ParamPoly { n: self.n, k: self.k, poly: &self.poly + &other.poly }
    }

    pub fn mul(&self, other: &ParamPoly) -> ParamPoly {
        assert_eq!((self.n, self.k), (other.n, other.k));
        ParamPoly { n: self.n, k: self.k, poly: &self.poly * &other.poly }
    }

    /// Applies `f` to every coefficient, moving to `n` x-variables.
    pub fn map_coeffs(&self, n: usize, f: impl Fn(&RatFunc) -> RatFunc) -> ParamPoly {
        ParamPoly::new(n, self.k, self.poly.map_coeffs(f))
    }

    /// Replaces the parameter `y_j` by `g` (a polynomial over `(y, z)` with
    /// rational-function coefficients in `x`), then drops `y_j`.
    pub fn substitute_param(&self, j: usize, g: &MPoly<RatFunc>) -> ParamPoly {
        let s = self.poly.substitute(j, g);
        ParamPoly::new(self.n, self.k - 1, s.remove_var(j))
    }

    /// Inserts `count` new parameters at position `at` (not occurring).
    pub fn insert_params(&self, at: usize, count: usize) -> ParamPoly {
        ParamPoly { n: self.n, k: self.k + count, poly: self.poly.insert_vars(at, count) }
    }

    pub fn is_zero_at(&self, b: &[Rational]) -> Result<bool> {
        Ok(self.specialize(b)?.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    /// p = x*y + z^2 with n = k = 1
    fn sample() -> ParamPoly {
        let x = RatFunc::var(1, 0);
        ParamPoly::from_terms(
            1,
            1,
            [(OrderIndex::new(vec![1], 0), x), (OrderIndex::new(vec![0], 2), RatFunc::constant(1, r(1)))],
        )
    }

    #[test]
    fn leading_support_example() {
        let (s, lead) = sample().leading_support().unwrap();
        assert_eq!(s, vec![OrderIndex::new(vec![1], 0), OrderIndex::new(vec![0], 2)]);
        assert_eq!(lead, OrderIndex::new(vec![0], 2));
        assert_eq!(ParamPoly::zero(1, 1).leading_support(), Err(AlgebraError::ZeroPolynomial));
    }

    #[test]
    fn division_by_leading_coefficient() {
        // 2x*z divided by 2x gives z
        let two_x = RatFunc::from_poly(QPoly::var(1, 0).scale(&r(2)));
        let p = ParamPoly::from_terms(1, 0, [(OrderIndex::new(vec![], 1), two_x.clone())]);
        let (q, guard) = p.divide_by_coeff(&OrderIndex::new(vec![], 1)).unwrap();
        assert_eq!(guard, two_x);
        assert_eq!(q.coeff(&OrderIndex::new(vec![], 1)), RatFunc::constant(1, r(1)));
        assert!(p.divide_by_coeff(&OrderIndex::new(vec![], 0)).is_err());
    }

    #[test]
    fn fiber_poly_and_joint_round_trip() {
        let p = sample();
        assert_eq!(p.fiber_poly(&[r(2)], &[r(3)]).unwrap(), UPoly::new(vec![r(6), r(0), r(1)]));
        let joint = p.to_joint_cleared();
        assert_eq!(ParamPoly::from_joint(1, 1, &joint), p);
    }

    #[test]
    fn serde_round_trip() {
        let p = sample();
        let s = serde_json::to_string(&p).unwrap();
        let back: ParamPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
