//! Sturm sequences and real root isolation over the rationals.

use num_traits::{One, Zero};

use super::algebraic::AlgebraicReal;
use super::rational::Rational;
use super::upoly::UPoly;
use crate::error::AlgebraError;

pub type QUPoly = UPoly<Rational>;

/// Sturm sequence `p, p', -rem(p, p'), ...` of a squarefree polynomial.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    seq: Vec<QUPoly>,
}

impl SturmSequence {
    pub fn new(p: &QUPoly) -> Self {
        let mut seq = vec![p.clone()];
        if p.degree().unwrap_or(0) > 0 {
            seq.push(p.derivative());
            loop {
                let n = seq.len();
                let r = seq[n - 2].rem(&seq[n - 1]);
                if r.is_zero() {
                    break;
                }
                seq.push(-r);
            }
        }
        SturmSequence { seq }
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        let signs = self.seq.iter().map(|p| p.sign_at(x)).filter(|&s| s != 0);
        count_changes(signs)
    }

    /// Sign variations at `+inf` (`positive = true`) or `-inf`.
    pub fn variations_at_infinity(&self, positive: bool) -> usize {
        let signs = self.seq.iter().map(|p| {
            let s = p.leading().sign();
            let d = p.degree().unwrap_or(0);
            if positive || d % 2 == 0 {
                s
            } else {
                -s
            }
        });
        count_changes(signs.filter(|&s| s != 0))
    }

    /// Number of distinct roots in the half-open interval `(lo, hi]`.
    pub fn count_half_open(&self, lo: &Rational, hi: &Rational) -> usize {
        self.variations_at(lo).saturating_sub(self.variations_at(hi))
    }

    /// Number of distinct roots in the open interval `(lo, hi)`.
    pub fn count_open(&self, lo: &Rational, hi: &Rational) -> usize {
        if lo >= hi {
            return 0;
        }
        let c = self.count_half_open(lo, hi);
        if self.seq[0].eval(hi).is_zero() {
            c - 1
        } else {
            c
        }
    }

    pub fn count_all(&self) -> usize {
        self.variations_at_infinity(false) - self.variations_at_infinity(true)
    }
}

fn count_changes(signs: impl Iterator<Item = i32>) -> usize {
    let mut prev = 0;
    let mut n = 0;
    for s in signs {
        if prev != 0 && s != prev {
            n += 1;
        }
        prev = s;
    }
    n
}

/// Number of distinct real roots of `p` in the open interval `(lo, hi)`.
pub fn count_roots_open(p: &QUPoly, lo: &Rational, hi: &Rational) -> usize {
    if p.is_zero() {
        return 0;
    }
    SturmSequence::new(&p.squarefree_part()).count_open(lo, hi)
}

/// All distinct real roots of `p` in increasing order.
pub fn root_isolate(p: &QUPoly) -> Result<Vec<AlgebraicReal>, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let sf = p.squarefree_part();
    match sf.degree() {
        Some(0) => return Ok(vec![]),
        Some(1) => {
            let r = -sf.coeff(0) / sf.coeff(1);
            return Ok(vec![AlgebraicReal::from_rational(r)]);
        }
        _ => {}
    }
    let sturm = SturmSequence::new(&sf);
    let b = sf.root_bound();
    let mut out = Vec::new();
    isolate_in(&sf, &sturm, -b.clone(), b, &mut out);
    Ok(out)
}

fn isolate_in(
    p: &QUPoly,
    sturm: &SturmSequence,
    lo: Rational,
    hi: Rational,
    out: &mut Vec<AlgebraicReal>,
) {
    // endpoints are never roots here
    let n = sturm.count_half_open(&lo, &hi);
    if n == 0 {
        return;
    }
    if n == 1 {
        out.push(AlgebraicReal::from_isolated(p.clone(), lo, hi));
        return;
    }
    let mid = Rational::midpoint(&lo, &hi);
    if p.eval(&mid).is_zero() {
        let eps = separation_step(p, sturm, &lo, &mid, &hi);
        let left = mid.clone() - eps.clone();
        let right = mid.clone() + eps;
        isolate_in(p, sturm, lo, left, out);
        out.push(AlgebraicReal::from_rational(mid));
        isolate_in(p, sturm, right, hi, out);
    } else {
        isolate_in(p, sturm, lo, mid.clone(), out);
        isolate_in(p, sturm, mid, hi, out);
    }
}

/// Finds `eps` with `mid` the only root in `[mid - eps, mid + eps]` and the
/// two endpoints non-roots, staying inside `(lo, hi)`.
fn separation_step(
    p: &QUPoly,
    sturm: &SturmSequence,
    lo: &Rational,
    mid: &Rational,
    hi: &Rational,
) -> Rational {
    let two = Rational::one() + Rational::one();
    let mut eps = Rational::min(mid.clone() - lo.clone(), hi.clone() - mid.clone()) / two.clone();
    loop {
        let l = mid.clone() - eps.clone();
        let r = mid.clone() + eps.clone();
        if !p.eval(&l).is_zero() && !p.eval(&r).is_zero() && sturm.count_half_open(&l, &r) == 1 {
            return eps;
        }
        eps = eps / two.clone();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> QUPoly {
        UPoly::new(v.iter().map(|&c| Rational::from_int(c)).collect())
    }

    #[test]
    fn linear_root() {
        let r = root_isolate(&q(&[-3, 1])).unwrap();
        assert_eq!(r, vec![AlgebraicReal::from_int(3)]);
    }

    #[test]
    fn no_real_roots() {
        assert!(root_isolate(&q(&[1, 0, 1])).unwrap().is_empty());
    }

    #[test]
    fn sqrt_two_pair_has_disjoint_intervals() {
        let p = q(&[-2, 0, 1]);
        let r = root_isolate(&p).unwrap();
        assert_eq!(r.len(), 2);
        let (l0, h0) = r[0].interval();
        let (l1, _) = r[1].interval();
        assert!(h0 <= l1);
        assert!(l0 < h0);
        assert!(r[0] < r[1]);
        assert!(r.iter().all(|a| a.is_root_of(&p)));
        // Sturm oracle: two sign variations lost over the real line.
        assert_eq!(SturmSequence::new(&p).count_all(), 2);
    }

    #[test]
    fn zero_polynomial_is_domain_error() {
        assert_eq!(root_isolate(&QUPoly::zero()), Err(AlgebraError::ZeroPolynomial));
    }

    #[test]
    fn rational_midpoint_roots_are_exact() {
        // roots -1, 0, 1 : bisection hits 0 exactly
        let r = root_isolate(&q(&[0, -1, 0, 1])).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r[1], AlgebraicReal::from_int(0));
        assert_eq!(r[0], AlgebraicReal::from_int(-1));
    }

    #[test]
    fn repeated_roots_counted_once() {
        let p = &(&q(&[-1, 1]) * &q(&[-1, 1])) * &q(&[2, 0, -1]);
        let r = root_isolate(&p).unwrap();
        assert_eq!(r.len(), 3);
    }
}
