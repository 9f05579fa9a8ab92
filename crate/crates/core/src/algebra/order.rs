//! The degree-then-lexicographic well-order on `N^k x N` that drives the
//! main recursion, its enumeration `sigma`, and the order of a polynomial.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::field::Field;
use super::mpoly::MPoly;
use crate::error::AlgebraError;

/// Exponent index `(i_1, ..., i_k, r)`: `i` are the parameter exponents and
/// `r` is the degree in the fiber variable.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderIndex {
    pub exponents: Vec<u32>,
    pub z_degree: u32,
}

impl OrderIndex {
    pub fn new(exponents: Vec<u32>, z_degree: u32) -> Self {
        OrderIndex { exponents, z_degree }
    }

    pub fn zero(k: usize) -> Self {
        OrderIndex { exponents: vec![0; k], z_degree: 0 }
    }

    /// Splits a full exponent vector whose last entry is the z-degree.
    pub fn from_exponent_vector(e: &[u32]) -> Self {
        let (last, rest) = e.split_last().expect("exponent vector must be nonempty");
        OrderIndex { exponents: rest.to_vec(), z_degree: *last }
    }

    pub fn to_exponent_vector(&self) -> Vec<u32> {
        let mut v = self.exponents.clone();
        v.push(self.z_degree);
        v
    }

    pub fn k(&self) -> usize {
        self.exponents.len()
    }

    pub fn total_degree(&self) -> u64 {
        self.exponents.iter().map(|&e| e as u64).sum::<u64>() + self.z_degree as u64
    }

    fn key(&self) -> impl Iterator<Item = u32> + '_ {
        self.exponents.iter().copied().chain(std::iter::once(self.z_degree))
    }
}

impl Ord for OrderIndex {
    /// Total degree first, then lexicographic on `(i_1, ..., i_k, r)`.
    /// Indices of different `k` are ordered by `k`; use [`precedes`] to
    /// reject such comparisons.
    fn cmp(&self, other: &Self) -> Ordering {
        self.k()
            .cmp(&other.k())
            .then(self.total_degree().cmp(&other.total_degree()))
            .then_with(|| self.key().cmp(other.key()))
    }
}

impl PartialOrd for OrderIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for OrderIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for e in &self.exponents {
            write!(f, "{e},")?;
        }
        write!(f, "{})", self.z_degree)
    }
}

/// `alpha ≺ beta`.
pub fn precedes(alpha: &OrderIndex, beta: &OrderIndex) -> Result<bool, AlgebraError> {
    if alpha.k() != beta.k() {
        return Err(AlgebraError::Dimension { expected: alpha.k(), got: beta.k() });
    }
    Ok(alpha < beta)
}

fn binom(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Number of exponent vectors of length `parts` summing to `total`.
fn compositions(total: u64, parts: u64) -> u128 {
    if parts == 0 {
        return u128::from(total == 0);
    }
    binom(total + parts - 1, parts - 1)
}

/// The order isomorphism `(N, <) -> (N^k x N, ≺)`.
pub fn sigma(n: u64, k: usize) -> OrderIndex {
    let parts = k as u64 + 1;
    let mut rank = n as u128;
    let mut d = 0u64;
    loop {
        let c = compositions(d, parts);
        if rank < c {
            break;
        }
        rank -= c;
        d += 1;
    }
    let mut out = Vec::with_capacity(k + 1);
    let mut remaining = d;
    for slot in 0..parts {
        let left = parts - slot - 1;
        if left == 0 {
            out.push(remaining as u32);
            break;
        }
        let mut v = 0;
        loop {
            let c = compositions(remaining - v, left);
            if rank < c {
                break;
            }
            rank -= c;
            v += 1;
        }
        out.push(v as u32);
        remaining -= v;
    }
    OrderIndex::from_exponent_vector(&out)
}

/// Inverse of [`sigma`].
pub fn sigma_inv(alpha: &OrderIndex) -> u64 {
    let parts = alpha.k() as u64 + 1;
    let d = alpha.total_degree();
    let mut rank: u128 = (0..d).map(|e| compositions(e, parts)).sum();
    let v = alpha.to_exponent_vector();
    let mut remaining = d;
    for (slot, &x) in v.iter().enumerate() {
        let left = parts - slot as u64 - 1;
        if left == 0 {
            break;
        }
        for smaller in 0..x as u64 {
            rank += compositions(remaining - smaller, left);
        }
        remaining -= x as u64;
    }
    rank as u64
}

/// The ≺-largest index with a nonzero coefficient in a polynomial over the
/// variables `(y_1, ..., y_k, z)`; `None` for the zero polynomial.
pub fn monomial_order<C: Field>(p: &MPoly<C>) -> Option<OrderIndex> {
    p.terms().map(|(e, _)| OrderIndex::from_exponent_vector(e)).max()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    fn oi(v: &[u32]) -> OrderIndex {
        OrderIndex::from_exponent_vector(v)
    }

    /// Independent oracle: enumerate all indices up to a degree and sort them
    /// with a comparator written directly from the two-clause definition.
    fn brute_sorted(k: usize, max_deg: u32) -> Vec<Vec<u32>> {
        let mut all = vec![vec![]];
        for _ in 0..=k {
            all = all
                .into_iter()
                .flat_map(|v: Vec<u32>| {
                    (0..=max_deg).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        all.retain(|v| v.iter().sum::<u32>() <= max_deg);
        all.sort_by(|a, b| {
            let (sa, sb): (u32, u32) = (a.iter().sum(), b.iter().sum());
            if sa != sb {
                sa.cmp(&sb)
            } else {
                a.cmp(b)
            }
        });
        all
    }

    #[test]
    fn precedes_examples() {
        assert!(precedes(&oi(&[0, 0]), &oi(&[0, 1])).unwrap());
        assert!(precedes(&oi(&[0, 1]), &oi(&[1, 0])).unwrap());
        assert!(!precedes(&oi(&[2, 1]), &oi(&[1, 2])).unwrap());
        assert!(precedes(&oi(&[0, 1]), &oi(&[0, 0, 1])).is_err());
    }

    #[test]
    fn sigma_examples_match_enumeration() {
        let sorted = brute_sorted(1, 2);
        let expected: Vec<Vec<u32>> = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![2, 0]];
        assert_eq!(sorted, expected);
        for (n, e) in expected.iter().enumerate() {
            assert_eq!(sigma(n as u64, 1), oi(e));
            assert_eq!(sigma_inv(&oi(e)), n as u64);
        }
    }

    #[test]
    fn sigma_agrees_with_brute_force_for_small_k() {
        for k in 1..=3 {
            let sorted = brute_sorted(k, 5);
            for (n, e) in sorted.iter().enumerate() {
                assert_eq!(sigma(n as u64, k).to_exponent_vector(), *e, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn monomial_order_examples() {
        type Q = MPoly<Rational>;
        let one = Rational::from_int(1);
        assert_eq!(monomial_order(&Q::constant(2, one.clone())), Some(oi(&[0, 0])));
        // y^2 z + y z^2
        let p = Q::from_terms(2, [(vec![2, 1], one.clone()), (vec![1, 2], one.clone())]);
        assert_eq!(monomial_order(&p), Some(oi(&[2, 1])));
        // 3 y z + z^3
        let p = Q::from_terms(2, [(vec![1, 1], Rational::from_int(3)), (vec![0, 3], one)]);
        assert_eq!(monomial_order(&p), Some(oi(&[0, 3])));
        assert_eq!(monomial_order(&Q::zero(2)), None);
    }
}
