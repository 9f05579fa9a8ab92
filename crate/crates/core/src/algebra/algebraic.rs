use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::field::Field;
use super::mpoly::MPoly;
use super::rational::Rational;
use super::roots::{count_roots_open, root_isolate, QUPoly, SturmSequence};
use super::upoly::UPoly;
use crate::error::AlgebraError;

/// Exact real algebraic number: a squarefree monic polynomial together with
/// an interval isolating one of its roots.
///
/// Either `lo == hi` and the value is that rational (and `min_poly` is
/// `x - lo`), or `lo < hi`, the open interval `(lo, hi)` holds exactly one
/// root of `min_poly`, and neither endpoint is a root.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "AlgebraicRealRepr", into = "AlgebraicRealRepr")]
pub struct AlgebraicReal {
    min_poly: QUPoly,
    lo: Rational,
    hi: Rational,
}

#[derive(Serialize, Deserialize)]
struct AlgebraicRealRepr {
    min_poly: MPoly<Rational>,
    interval: [Rational; 2],
}

impl From<AlgebraicReal> for AlgebraicRealRepr {
    fn from(a: AlgebraicReal) -> Self {
        AlgebraicRealRepr {
            min_poly: MPoly::from_univariate(&a.min_poly, 1, 0),
            interval: [a.lo, a.hi],
        }
    }
}

impl TryFrom<AlgebraicRealRepr> for AlgebraicReal {
    type Error = AlgebraError;

    fn try_from(r: AlgebraicRealRepr) -> Result<Self, Self::Error> {
        if r.min_poly.nvars() != 1 {
            return Err(AlgebraError::Dimension { expected: 1, got: r.min_poly.nvars() });
        }
        let p = r.min_poly.to_univariate(0);
        let [lo, hi] = r.interval;
        AlgebraicReal::new(p, lo, hi)
    }
}

impl AlgebraicReal {
    /// Validating constructor.
    pub fn new(p: QUPoly, lo: Rational, hi: Rational) -> Result<Self, AlgebraError> {
        if p.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        if lo > hi {
            return Err(AlgebraError::Domain("empty isolating interval".into()));
        }
        if lo == hi {
            if !p.eval(&lo).is_zero() {
                return Err(AlgebraError::Domain(format!("{lo} is not a root")));
            }
            return Ok(AlgebraicReal::from_rational(lo));
        }
        let sf = p.squarefree_part();
        if sf.eval(&lo).is_zero() || sf.eval(&hi).is_zero() {
            return Err(AlgebraError::Domain("interval endpoint is a root".into()));
        }
        if SturmSequence::new(&sf).count_open(&lo, &hi) != 1 {
            return Err(AlgebraError::Domain("interval does not isolate exactly one root".into()));
        }
        Ok(AlgebraicReal::from_isolated(sf, lo, hi).normalized())
    }

    /// Trusted constructor used by root isolation.
    pub(crate) fn from_isolated(p: QUPoly, lo: Rational, hi: Rational) -> Self {
        AlgebraicReal { min_poly: p, lo, hi }.normalized()
    }

    fn normalized(self) -> Self {
        if self.min_poly.degree() == Some(1) {
            let r = -self.min_poly.coeff(0) / self.min_poly.coeff(1);
            return AlgebraicReal::from_rational(r);
        }
        self
    }

    pub fn from_rational(r: Rational) -> Self {
        AlgebraicReal {
            min_poly: UPoly::new(vec![-r.clone(), Rational::one()]),
            lo: r.clone(),
            hi: r,
        }
    }

    pub fn from_int(n: i64) -> Self {
        AlgebraicReal::from_rational(Rational::from_int(n))
    }

    pub fn min_poly(&self) -> &QUPoly {
        &self.min_poly
    }

    pub fn interval(&self) -> (&Rational, &Rational) {
        (&self.lo, &self.hi)
    }

    pub fn to_rational(&self) -> Option<Rational> {
        (self.lo == self.hi).then(|| self.lo.clone())
    }

    pub fn is_rational(&self) -> bool {
        self.lo == self.hi
    }

    pub fn to_f64(&self) -> f64 {
        let mut a = self.clone();
        while !a.is_rational() && (a.hi.clone() - a.lo.clone()).to_f64() > 1e-12 {
            a.bisect();
        }
        Rational::midpoint(&a.lo, &a.hi).to_f64()
    }

    /// Halves the isolating interval; collapses to a rational if the midpoint
    /// is the root.
    fn bisect(&mut self) {
        if self.is_rational() {
            return;
        }
        let mid = Rational::midpoint(&self.lo, &self.hi);
        let sm = self.min_poly.sign_at(&mid);
        if sm == 0 {
            *self = AlgebraicReal::from_rational(mid);
        } else if sm == self.min_poly.sign_at(&self.lo) {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    fn width(&self) -> Rational {
        self.hi.clone() - self.lo.clone()
    }

    /// Exact test `q(self) == 0`.
    pub fn is_root_of(&self, q: &QUPoly) -> bool {
        if q.is_zero() {
            return true;
        }
        if let Some(r) = self.to_rational() {
            return q.eval(&r).is_zero();
        }
        let g = q.gcd(&self.min_poly);
        g.degree().unwrap_or(0) > 0 && count_roots_open(&g, &self.lo, &self.hi) > 0
    }

    /// Sign of `q(self)`.
    pub fn sign_of(&self, q: &QUPoly) -> i32 {
        if let Some(r) = self.to_rational() {
            return q.eval(&r).sign();
        }
        if self.is_root_of(q) {
            return 0;
        }
        let mut a = self.clone();
        loop {
            if let Some(r) = a.to_rational() {
                return q.eval(&r).sign();
            }
            let sl = q.sign_at(&a.lo);
            if sl != 0 && count_roots_open(q, &a.lo, &a.hi) == 0 && q.sign_at(&a.hi) == sl {
                return sl;
            }
            a.bisect();
        }
    }

    pub fn sign(&self) -> i32 {
        self.sign_of(&UPoly::x())
    }

    pub fn neg(&self) -> Self {
        let d = self.min_poly.degree().unwrap_or(0);
        let coeffs = self
            .min_poly
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| if (d - i) % 2 == 1 { -c.clone() } else { c.clone() })
            .collect();
        AlgebraicReal { min_poly: UPoly::new(coeffs), lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if let Some(r) = self.to_rational() {
            return (!r.is_zero()).then(|| AlgebraicReal::from_rational(r.inv()));
        }
        let mut a = self.clone();
        while a.lo.sign() * a.hi.sign() <= 0 {
            a.bisect();
            if let Some(r) = a.to_rational() {
                return Some(AlgebraicReal::from_rational(r.inv()));
            }
        }
        let mut rev: Vec<Rational> = a.min_poly.coeffs().to_vec();
        rev.reverse();
        let p = UPoly::new(rev).monic();
        Some(AlgebraicReal::from_isolated(p, a.hi.inv(), a.lo.inv()))
    }

    pub fn add(&self, other: &Self) -> Self {
        if let (Some(x), Some(y)) = (self.to_rational(), other.to_rational()) {
            return AlgebraicReal::from_rational(x + y);
        }
        let m = kron_sum(&companion(&self.min_poly), &companion(&other.min_poly));
        identify(&charpoly(&m), self, other, |a, b| {
            (a.lo.clone() + b.lo.clone(), a.hi.clone() + b.hi.clone())
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if let (Some(x), Some(y)) = (self.to_rational(), other.to_rational()) {
            return AlgebraicReal::from_rational(x * y);
        }
        if self.sign() == 0 || other.sign() == 0 {
            return AlgebraicReal::from_int(0);
        }
        let m = kron_prod(&companion(&self.min_poly), &companion(&other.min_poly));
        identify(&charpoly(&m), self, other, |a, b| {
            let c = [
                a.lo.clone() * b.lo.clone(),
                a.lo.clone() * b.hi.clone(),
                a.hi.clone() * b.lo.clone(),
                a.hi.clone() * b.hi.clone(),
            ];
            let lo = c.iter().cloned().fold(c[0].clone(), Rational::min);
            let hi = c.iter().cloned().fold(c[0].clone(), Rational::max);
            (lo, hi)
        })
    }

    /// Exact value `q(self)`.
    pub fn eval_poly(&self, q: &QUPoly) -> Self {
        if let Some(r) = self.to_rational() {
            return AlgebraicReal::from_rational(q.eval(&r));
        }
        if self.is_root_of(q) {
            return AlgebraicReal::from_int(0);
        }
        let c = companion(&self.min_poly);
        let n = c.len();
        let mut acc = zero_matrix(n);
        for coef in q.coeffs().iter().rev() {
            acc = mat_mul(&acc, &c);
            for (i, row) in acc.iter_mut().enumerate() {
                row[i] = row[i].clone() + coef.clone();
            }
        }
        let unit = AlgebraicReal::from_int(0);
        identify(&charpoly(&acc), self, &unit, |a, _| interval_eval(q, &a.lo, &a.hi))
    }
}

/// Picks the root of `chi` that lies in every enclosure produced by `bound`
/// as the operands are refined.
fn identify(
    chi: &QUPoly,
    a: &AlgebraicReal,
    b: &AlgebraicReal,
    bound: impl Fn(&AlgebraicReal, &AlgebraicReal) -> (Rational, Rational),
) -> AlgebraicReal {
    let mut cands = root_isolate(&chi.squarefree_part()).expect("characteristic polynomial is nonzero");
    let (mut a, mut b) = (a.clone(), b.clone());
    loop {
        let (lo, hi) = bound(&a, &b);
        let hits: Vec<usize> = cands
            .iter()
            .enumerate()
            .filter(|(_, c)| c.lo <= hi && c.hi >= lo)
            .map(|(i, _)| i)
            .collect();
        if hits.len() == 1 {
            return cands.swap_remove(hits[0]);
        }
        a.bisect();
        b.bisect();
        for i in hits {
            cands[i].bisect();
        }
    }
}

fn interval_eval(q: &QUPoly, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let mut acc = (Rational::zero(), Rational::zero());
    for c in q.coeffs().iter().rev() {
        let p = [
            acc.0.clone() * lo.clone(),
            acc.0.clone() * hi.clone(),
            acc.1.clone() * lo.clone(),
            acc.1.clone() * hi.clone(),
        ];
        let l = p.iter().cloned().fold(p[0].clone(), Rational::min);
        let h = p.iter().cloned().fold(p[0].clone(), Rational::max);
        acc = (l + c.clone(), h + c.clone());
    }
    acc
}

type Matrix = Vec<Vec<Rational>>;

fn zero_matrix(n: usize) -> Matrix {
    vec![vec![Rational::zero(); n]; n]
}

/// Matrix of multiplication by the root on the power basis.
fn companion(p: &QUPoly) -> Matrix {
    let p = p.monic();
    let n = p.degree().unwrap_or(0);
    let mut m = zero_matrix(n);
    for i in 1..n {
        m[i][i - 1] = Rational::one();
    }
    for (i, row) in m.iter_mut().enumerate() {
        row[n - 1] = -p.coeff(i);
    }
    m
}

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, m) = (a.len(), b.len());
    let mut out = zero_matrix(n * m);
    for i in 0..n {
        for j in 0..n {
            if a[i][j].is_zero() {
                continue;
            }
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j].clone() * b[k][l].clone();
                }
            }
        }
    }
    out
}

fn identity(n: usize) -> Matrix {
    let mut m = zero_matrix(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

fn kron_sum(a: &Matrix, b: &Matrix) -> Matrix {
    let x = kron(a, &identity(b.len()));
    let y = kron(&identity(a.len()), b);
    x.iter()
        .zip(&y)
        .map(|(r, s)| r.iter().zip(s).map(|(u, v)| u.clone() + v.clone()).collect())
        .collect()
}

fn kron_prod(a: &Matrix, b: &Matrix) -> Matrix {
    kron(a, b)
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = zero_matrix(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] = out[i][j].clone() + a[i][k].clone() * b[k][j].clone();
            }
        }
    }
    out
}

/// Characteristic polynomial by Faddeev-LeVerrier.
fn charpoly(a: &Matrix) -> QUPoly {
    let n = a.len();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = zero_matrix(n);
    for k in 1..=n {
        let mut am = mat_mul(a, &m);
        for (i, row) in am.iter_mut().enumerate() {
            row[i] = row[i].clone() + coeffs[n - k + 1].clone();
        }
        m = am;
        let trace = mat_mul(a, &m)
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (i, row)| acc + row[i].clone());
        coeffs[n - k] = -trace / Rational::from_int(k as i64);
    }
    UPoly::new(coeffs)
}

impl PartialEq for AlgebraicReal {
    fn eq(&self, other: &Self) -> bool {
        match (self.to_rational(), other.to_rational()) {
            (Some(x), Some(y)) => x == y,
            (Some(x), None) => other.lo < x && x < other.hi && other.min_poly.eval(&x).is_zero(),
            (None, Some(y)) => self.lo < y && y < self.hi && self.min_poly.eval(&y).is_zero(),
            (None, None) => {
                let lo = Rational::max(self.lo.clone(), other.lo.clone());
                let hi = Rational::min(self.hi.clone(), other.hi.clone());
                if lo >= hi {
                    return false;
                }
                let g = self.min_poly.gcd(&other.min_poly);
                g.degree().unwrap_or(0) > 0 && count_roots_open(&g, &lo, &hi) > 0
            }
        }
    }
}

impl Eq for AlgebraicReal {}

impl Ord for AlgebraicReal {
    fn cmp(&self, other: &Self) -> Ordering {
        if let (Some(x), Some(y)) = (self.to_rational(), other.to_rational()) {
            return x.cmp(&y);
        }
        if self == other {
            return Ordering::Equal;
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        loop {
            if a.hi < b.lo || (a.hi == b.lo && !(a.is_rational() && b.is_rational())) {
                return Ordering::Less;
            }
            if b.hi < a.lo || (b.hi == a.lo && !(a.is_rational() && b.is_rational())) {
                return Ordering::Greater;
            }
            if let (Some(x), Some(y)) = (a.to_rational(), b.to_rational()) {
                return x.cmp(&y);
            }
            if a.width() >= b.width() {
                a.bisect();
            } else {
                b.bisect();
            }
        }
    }
}

impl PartialOrd for AlgebraicReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_rational() {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "root of {} in ({}, {}) ~{:.6}", self.min_poly, self.lo, self.hi, self.to_f64()),
        }
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl From<Rational> for AlgebraicReal {
    fn from(r: Rational) -> Self {
        AlgebraicReal::from_rational(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> QUPoly {
        UPoly::new(v.iter().map(|&c| Rational::from_int(c)).collect())
    }

    fn sqrt2() -> AlgebraicReal {
        root_isolate(&q(&[-2, 0, 1])).unwrap()[1].clone()
    }

    #[test]
    fn root_of_own_polynomial_evaluates_to_zero() {
        let s = sqrt2();
        assert_eq!(s.eval_poly(&q(&[-2, 0, 1])), AlgebraicReal::from_int(0));
        assert_eq!(s.eval_poly(&q(&[0, 0, 1])), AlgebraicReal::from_int(2));
    }

    #[test]
    fn sums_and_products() {
        let s = sqrt2();
        let t = root_isolate(&q(&[-3, 0, 1])).unwrap()[1].clone();
        let sum = s.add(&t);
        // sqrt2 + sqrt3 is a root of x^4 - 10x^2 + 1
        assert!(sum.is_root_of(&q(&[1, 0, -10, 0, 1])));
        assert!(sum.to_f64() > 3.14 && sum.to_f64() < 3.15);
        assert_eq!(s.mul(&s), AlgebraicReal::from_int(2));
        assert_eq!(sum.sub(&t), s);
        assert_eq!(s.mul(&s.recip().unwrap()), AlgebraicReal::from_int(1));
    }

    #[test]
    fn ordering_is_exact() {
        let s = sqrt2();
        assert!(s > AlgebraicReal::from_int(1));
        assert!(s < AlgebraicReal::from_rational(Rational::new(3, 2).unwrap()));
        assert!(s.neg() < AlgebraicReal::from_int(0));
        assert_eq!(s.neg().neg(), s);
        let other = AlgebraicReal::new(q(&[-2, 0, 1]), Rational::from_int(1), Rational::from_int(2)).unwrap();
        assert_eq!(s.cmp(&other), Ordering::Equal);
    }

    #[test]
    fn constructor_rejects_bad_interval() {
        assert!(AlgebraicReal::new(q(&[-2, 0, 1]), Rational::from_int(-2), Rational::from_int(2)).is_err());
        assert!(AlgebraicReal::new(q(&[-2, 0, 1]), Rational::from_int(3), Rational::from_int(4)).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let s = sqrt2();
        let js = serde_json::to_string(&s).unwrap();
        let back: AlgebraicReal = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s);
    }
}
