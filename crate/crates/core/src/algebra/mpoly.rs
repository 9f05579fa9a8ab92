use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::field::Field;
use super::upoly::UPoly;
use crate::error::AlgebraError;

/// Sparse multivariate polynomial: exponent vector -> nonzero coefficient.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "C: Serialize", deserialize = "C: Deserialize<'de> + Field"))]
#[serde(try_from = "MPolyRepr<C>", into = "MPolyRepr<C>")]
pub struct MPoly<C: Field> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, C>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MPolyRepr<C> {
    vars: usize,
    terms: Vec<TermRepr<C>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRepr<C> {
    exponents: Vec<u32>,
    coeff: C,
}

impl<C: Field> From<MPoly<C>> for MPolyRepr<C> {
    fn from(p: MPoly<C>) -> Self {
        MPolyRepr {
            vars: p.nvars,
            terms: p.terms.into_iter().map(|(exponents, coeff)| TermRepr { exponents, coeff }).collect(),
        }
    }
}

impl<C: Field> TryFrom<MPolyRepr<C>> for MPoly<C> {
    type Error = AlgebraError;
    fn try_from(r: MPolyRepr<C>) -> Result<Self, AlgebraError> {
        for t in &r.terms {
            if t.exponents.len() != r.vars {
                return Err(AlgebraError::Dimension { expected: r.vars, got: t.exponents.len() });
            }
        }
        Ok(MPoly::from_terms(r.vars, r.terms.into_iter().map(|t| (t.exponents, t.coeff))))
    }
}

impl<C: Field> MPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        MPoly::from_terms(nvars, [(vec![0; nvars], c)])
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(nvars, C::one())
    }

    /// The variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MPoly::from_terms(nvars, [(e, C::one())])
    }

    pub fn monomial(exponents: Vec<u32>, c: C) -> Self {
        let n = exponents.len();
        MPoly::from_terms(n, [(exponents, c)])
    }

    /// Sums repeated exponents and drops zeros. Exponent vectors must have
    /// length `nvars`.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, C)>) -> Self {
        let mut map: BTreeMap<Vec<u32>, C> = BTreeMap::new();
        for (e, c) in terms {
            debug_assert_eq!(e.len(), nvars);
            match map.get_mut(&e) {
                Some(v) => *v = v.clone() + c,
                None => {
                    map.insert(e, c);
                }
            }
        }
        map.retain(|_, c| !c.is_zero());
        MPoly { nvars, terms: map }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    pub fn scale(&self, s: &C) -> Self {
        MPoly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), c.clone() * s.clone())))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = MPoly::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn map_coeffs<D: Field>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        MPoly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    pub fn try_map_coeffs<D: Field, E>(&self, f: impl Fn(&C) -> Result<D, E>) -> Result<MPoly<D>, E> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            out.push((e.clone(), f(c)?));
        }
        Ok(MPoly::from_terms(self.nvars, out))
    }

    pub fn eval(&self, point: &[C]) -> C {
        debug_assert_eq!(point.len(), self.nvars);
        self.terms.iter().fold(C::zero(), |acc, (e, c)| {
            let m = e
                .iter()
                .zip(point)
                .filter(|(&k, _)| k > 0)
                .fold(c.clone(), |m, (&k, x)| m * x.pow(k));
            acc + m
        })
    }

    /// Fixes variables `start .. start + values.len()` and removes them.
    pub fn partial_eval(&self, start: usize, values: &[C]) -> Self {
        let end = start + values.len();
        let nv = self.nvars - values.len();
        MPoly::from_terms(
            nv,
            self.terms.iter().map(|(e, c)| {
                let m = e[start..end]
                    .iter()
                    .zip(values)
                    .filter(|(&k, _)| k > 0)
                    .fold(c.clone(), |m, (&k, x)| m * x.pow(k));
                let mut ne = e[..start].to_vec();
                ne.extend_from_slice(&e[end..]);
                (ne, m)
            }),
        )
    }

    /// Converts a polynomial in which only `var` occurs.
    pub fn to_univariate(&self, var: usize) -> UPoly<C> {
        let d = self.degree_in(var).unwrap_or(0) as usize;
        let mut v = vec![C::zero(); d + 1];
        for (e, c) in &self.terms {
            v[e[var] as usize] = v[e[var] as usize].clone() + c.clone();
        }
        UPoly::new(v)
    }

    pub fn from_univariate(p: &UPoly<C>, nvars: usize, var: usize) -> Self {
        MPoly::from_terms(
            nvars,
            p.coeffs().iter().enumerate().map(|(i, c)| {
                let mut e = vec![0; nvars];
                e[var] = i as u32;
                (e, c.clone())
            }),
        )
    }

    /// Replaces `x_var` by `q` (which lives in the same variable space).
    pub fn substitute(&self, var: usize, q: &MPoly<C>) -> Self {
        let mut powers: Vec<MPoly<C>> = vec![MPoly::one(self.nvars)];
        let mut acc = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap() * q;
                powers.push(next);
            }
            let mut ne = e.clone();
            ne[var] = 0;
            let mono = MPoly::from_terms(self.nvars, [(ne, c.clone())]);
            acc = &acc + &(&mono * &powers[k]);
        }
        acc
    }

    /// Groups terms by the exponent of `var`; the returned pieces have that
    /// exponent set to zero.
    pub fn coefficients_in(&self, var: usize) -> BTreeMap<u32, MPoly<C>> {
        let mut out: BTreeMap<u32, Vec<(Vec<u32>, C)>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne[var] = 0;
            out.entry(e[var]).or_default().push((ne, c.clone()));
        }
        out.into_iter().map(|(k, t)| (k, MPoly::from_terms(self.nvars, t))).collect()
    }

    /// Inserts `count` fresh variables at position `at`.
    pub fn insert_vars(&self, at: usize, count: usize) -> Self {
        MPoly::from_terms(
            self.nvars + count,
            self.terms.iter().map(|(e, c)| {
                let mut ne = e[..at].to_vec();
                ne.extend(std::iter::repeat(0).take(count));
                ne.extend_from_slice(&e[at..]);
                (ne, c.clone())
            }),
        )
    }

    /// Removes variable `var`, which must not occur.
    pub fn remove_var(&self, var: usize) -> Self {
        debug_assert!(!self.involves(var));
        MPoly::from_terms(
            self.nvars - 1,
            self.terms.iter().map(|(e, c)| {
                let mut ne = e.clone();
                ne.remove(var);
                (ne, c.clone())
            }),
        )
    }

    /// Renames variables: variable `i` becomes variable `map[i]` in a space of
    /// `nvars` variables.
    pub fn remap_vars(&self, nvars: usize, map: &[usize]) -> Self {
        MPoly::from_terms(
            nvars,
            self.terms.iter().map(|(e, c)| {
                let mut ne = vec![0; nvars];
                for (i, &k) in e.iter().enumerate() {
                    ne[map[i]] += k;
                }
                (ne, c.clone())
            }),
        )
    }
}

impl<'a, C: Field> Add for &'a MPoly<C> {
    type Output = MPoly<C>;
    fn add(self, rhs: Self) -> MPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            match terms.get_mut(e) {
                Some(v) => *v = v.clone() + c.clone(),
                None => {
                    terms.insert(e.clone(), c.clone());
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { nvars: self.nvars, terms }
    }
}

impl<'a, C: Field> Sub for &'a MPoly<C> {
    type Output = MPoly<C>;
    fn sub(self, rhs: Self) -> MPoly<C> {
        self + &(-rhs.clone())
    }
}

impl<'a, C: Field> Mul for &'a MPoly<C> {
    type Output = MPoly<C>;
    fn mul(self, rhs: Self) -> MPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.push((e, c1.clone() * c2.clone()));
            }
        }
        MPoly::from_terms(self.nvars, out)
    }
}

impl<C: Field> Neg for MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        MPoly { nvars: self.nvars, terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl<C: Field> fmt::Debug for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c:?}")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*v{i}")?,
                    _ => write!(f, "*v{i}^{k}")?,
                }
            }
        }
        Ok(())
    }
}
