use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use super::condition::all_hold;
use super::defset::Tuple;
use super::descriptor::{Predicate, Ufss, XDesc, ZDesc};
use super::smallset::Point;
use crate::algebra::{AlgebraicReal, RatFunc, Rational};
use crate::error::{Error, Result};

type ZKey = (usize, Vec<Rational>, Vec<Rational>);
type XKey = (usize, Vec<Rational>);

/// Evaluates descriptor trees at rational points.
///
/// Results are memoized by node identity, so an evaluator must not outlive
/// the descriptors it was used on.
#[derive(Default)]
pub struct Evaluator {
    z_cache: RefCell<HashMap<ZKey, Rc<Vec<Tuple>>>>,
    x_cache: RefCell<HashMap<XKey, Rc<Vec<Point>>>>,
}

fn addr<T>(a: &Arc<T>) -> usize {
    Arc::as_ptr(a) as *const () as usize
}

fn without(a: &[Rational], i: usize) -> Vec<Rational> {
    a.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()).collect()
}

fn eval_map(map: &[RatFunc], point: &[Rational]) -> Option<Point> {
    map.iter().map(|f| f.eval(point)).collect()
}

fn contains(fiber: &[Tuple], t: &Tuple) -> bool {
    fiber.iter().any(|u| u == t)
}

/// Sorted, duplicate-free union of fibers.
pub fn normalize_fiber(mut v: Vec<Tuple>) -> Vec<Tuple> {
    v.sort();
    v.dedup();
    v
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    /// `Z_{b,a}`, sorted lexicographically.
    pub fn fiber(&self, z: &Arc<ZDesc>, b: &[Rational], a: &[Rational]) -> Result<Rc<Vec<Tuple>>> {
        let key = (addr(z), b.to_vec(), a.to_vec());
        if let Some(v) = self.z_cache.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = Rc::new(self.fiber_uncached(z, b, a)?);
        self.z_cache.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    fn fiber_uncached(&self, z: &Arc<ZDesc>, b: &[Rational], a: &[Rational]) -> Result<Vec<Tuple>> {
        match &**z {
            ZDesc::Set(d) => d.fiber(b, a),
            ZDesc::Selector { base, index, bound } => {
                let f = self.fiber(base, b, a)?;
                select(&f, *index, *bound).map(|t| t.into_iter().collect())
            }
            ZDesc::Product { factors } => {
                let mut out: Vec<Tuple> = vec![vec![]];
                let mut offset = 0;
                for f in factors {
                    let m = f.m();
                    let part = self.fiber(f, &b[offset..offset + m], a)?;
                    offset += m;
                    out = out
                        .into_iter()
                        .flat_map(|head| {
                            part.iter().map(move |t| {
                                let mut h = head.clone();
                                h.extend(t.iter().cloned());
                                h
                            })
                        })
                        .collect();
                    if out.is_empty() {
                        break;
                    }
                }
                Ok(out)
            }
            ZDesc::Slice { inner, param } => {
                let f = self.fiber(inner, b, &without(a, *param))?;
                let target = AlgebraicReal::from_rational(a[*param].clone());
                Ok(f.iter().filter(|t| t[0] == target).map(|t| t[1..].to_vec()).collect())
            }
            ZDesc::PushGraph { inner, map } => {
                let m0 = inner.m();
                match eval_map(map, &b[..m0]) {
                    Some(e) if e == b[m0..] => Ok((*self.fiber(inner, &b[..m0], a)?).clone()),
                    _ => Ok(vec![]),
                }
            }
            ZDesc::AppendParam { inner, map } => {
                let k0 = inner.k();
                let point: Vec<Rational> = b.iter().chain(&a[..k0]).cloned().collect();
                match eval_map(map, &point) {
                    Some(e) if e == a[k0..] => Ok((*self.fiber(inner, b, &a[..k0])?).clone()),
                    _ => Ok(vec![]),
                }
            }
            ZDesc::DropParam { inner, param } => Ok((*self.fiber(inner, b, &without(a, *param))?).clone()),
            ZDesc::Union { members } => {
                let mut out = Vec::new();
                for f in members {
                    out.extend(self.fiber(f, b, a)?.iter().cloned());
                }
                Ok(normalize_fiber(out))
            }
        }
    }

    /// `X_a`, sorted.
    pub fn x_fiber(&self, x: &Arc<XDesc>, a: &[Rational]) -> Result<Rc<Vec<Point>>> {
        let key = (addr(x), a.to_vec());
        if let Some(v) = self.x_cache.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = Rc::new(self.x_fiber_uncached(x, a)?);
        self.x_cache.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    fn x_fiber_uncached(&self, x: &Arc<XDesc>, a: &[Rational]) -> Result<Vec<Point>> {
        match &**x {
            XDesc::Explicit { k, s, conditions } => {
                if a.len() != *k {
                    return Err(Error::Arity(format!("expected {} parameters, got {}", k, a.len())));
                }
                Ok(s.points()
                    .iter()
                    .filter(|b| {
                        let p: Vec<Rational> = b.iter().chain(a).cloned().collect();
                        all_hold(conditions, &p)
                    })
                    .cloned()
                    .collect())
            }
            XDesc::Image { parent, map, .. } => {
                let mut out = Vec::new();
                for b in self.x_fiber(parent, a)?.iter() {
                    out.push(eval_map(map, b).ok_or_else(|| Error::Guard {
                        point: b.clone(),
                        reason: "map undefined".into(),
                    })?);
                }
                out.sort();
                out.dedup();
                Ok(out)
            }
            XDesc::Product { factors, .. } => {
                let mut out: Vec<Point> = vec![vec![]];
                for f in factors {
                    let part = self.x_fiber(f, a)?;
                    out = out
                        .into_iter()
                        .flat_map(|head| {
                            part.iter().map(move |t| {
                                let mut h = head.clone();
                                h.extend(t.iter().cloned());
                                h
                            })
                        })
                        .collect();
                }
                Ok(out)
            }
            XDesc::Filtered { parent, predicate } => {
                let peers = self.x_fiber(parent, a)?;
                let mut out = Vec::new();
                for b in peers.iter() {
                    if self.holds(predicate, b, a, &peers)? {
                        out.push(b.clone());
                    }
                }
                Ok(out)
            }
            XDesc::DropParam { inner, param } => Ok((*self.x_fiber(inner, &without(a, *param))?).clone()),
            XDesc::PushGraph { inner, map, .. } => {
                let mut out = Vec::new();
                for b in self.x_fiber(inner, a)?.iter() {
                    let e = eval_map(map, b)
                        .ok_or_else(|| Error::Guard { point: b.clone(), reason: "graph map undefined".into() })?;
                    let mut v = b.clone();
                    v.extend(e);
                    out.push(v);
                }
                Ok(out)
            }
            XDesc::AppendParam { inner, map } => {
                let k0 = inner.k();
                let mut out = Vec::new();
                for b in self.x_fiber(inner, &a[..k0])?.iter() {
                    let p: Vec<Rational> = b.iter().chain(&a[..k0]).cloned().collect();
                    if eval_map(map, &p).as_deref() == Some(&a[k0..]) {
                        out.push(b.clone());
                    }
                }
                Ok(out)
            }
        }
    }

    fn holds(&self, pred: &Predicate, b: &Point, a: &[Rational], peers: &[Point]) -> Result<bool> {
        Ok(match pred {
            Predicate::OffDiagonal { block } => b[..*block] != b[*block..2 * *block],
            Predicate::Member { s } => s.contains(b),
            Predicate::Conditions { conditions } => {
                let p: Vec<Rational> = b.iter().chain(a).cloned().collect();
                all_hold(conditions, &p)
            }
            Predicate::Unshared { z, selector } => {
                let sel = self.fiber(selector, b, a)?;
                let Some(v) = sel.first() else { return Ok(false) };
                for other in peers {
                    if other != b && contains(&self.fiber(z, other, a)?, v) {
                        return Ok(false);
                    }
                }
                true
            }
            Predicate::LexMin { z } => {
                let own = self.fiber(z, b, a)?;
                if own.is_empty() {
                    return Ok(false);
                }
                for other in peers.iter().take_while(|o| *o < b) {
                    if *self.fiber(z, other, a)? == *own {
                        return Ok(false);
                    }
                }
                true
            }
            Predicate::CoveredBy { z, target } => {
                let own = self.fiber(z, b, a)?;
                if own.is_empty() {
                    return Ok(false);
                }
                for c in self.x_fiber(&target.x, a)?.iter() {
                    let tf = self.fiber(&target.z, c, a)?;
                    if own.iter().all(|t| contains(&tf, t)) {
                        return Ok(true);
                    }
                }
                false
            }
            Predicate::Preimage { s, domain, rows } => s.points().iter().any(|g| {
                let p: Vec<Rational> = g.iter().chain(a).cloned().collect();
                all_hold(domain, &p)
                    && rows.iter().zip(b).all(|(row, t)| {
                        row.iter().zip(g).fold(Rational::from_int(0), |acc, (r, x)| acc + r.clone() * x.clone()) == *t
                    })
            }),
        })
    }

    /// `⋃_{b in X_a} Z_{b,a}`, sorted and deduplicated.
    pub fn union(&self, u: &Ufss, a: &[Rational]) -> Result<Vec<Tuple>> {
        let mut out = Vec::new();
        for b in self.x_fiber(&u.x, a)?.iter() {
            out.extend(self.fiber(&u.z, b, a)?.iter().cloned());
        }
        Ok(normalize_fiber(out))
    }
}

/// The `index`-th entry (1-based) of the fiber listed in increasing order
/// with its smallest element repeated up to length `bound`.
pub fn select(fiber: &[Tuple], index: usize, bound: usize) -> Result<Option<Tuple>> {
    let s = fiber.len();
    if s == 0 {
        return Ok(None);
    }
    if s > bound || index == 0 || index > bound {
        return Err(Error::Contract(format!("selector {index} of {bound} on a fiber of size {s}")));
    }
    let pad = bound - s + 1;
    Ok(Some(if index <= pad { fiber[0].clone() } else { fiber[index - pad].clone() }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: i64) -> Tuple {
        vec![AlgebraicReal::from_int(n)]
    }

    #[test]
    fn selector_repeats_smallest() {
        let f = vec![t(1), t(5)];
        let picked: Vec<Tuple> = (1..=3).map(|j| select(&f, j, 3).unwrap().unwrap()).collect();
        assert_eq!(picked, vec![t(1), t(1), t(5)]);
        assert!(select(&f, 1, 1).is_err());
        assert_eq!(select(&[], 1, 2).unwrap(), None);
    }
}
