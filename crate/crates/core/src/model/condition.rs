use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraicReal, QPoly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Eq,
    Ne,
    Gt,
    Ge,
    Lt,
    Le,
}

impl Relation {
    pub fn holds(self, sign: i32) -> bool {
        match self {
            Relation::Eq => sign == 0,
            Relation::Ne => sign != 0,
            Relation::Gt => sign > 0,
            Relation::Ge => sign >= 0,
            Relation::Lt => sign < 0,
            Relation::Le => sign <= 0,
        }
    }
}

/// Sign condition `poly rel 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Condition {
    pub poly: QPoly,
    pub rel: Relation,
}

impl Condition {
    pub fn new(poly: QPoly, rel: Relation) -> Self {
        Condition { poly, rel }
    }

    pub fn holds(&self, point: &[Rational]) -> bool {
        self.rel.holds(self.poly.eval(point).sign())
    }

    /// Evaluates at a point whose first coordinates are rational and whose
    /// tail is real algebraic.
    pub fn holds_mixed(&self, head: &[Rational], tail: &[AlgebraicReal]) -> bool {
        self.rel.holds(sign_mixed(&self.poly, head, tail))
    }
}

pub fn all_hold(conds: &[Condition], point: &[Rational]) -> bool {
    conds.iter().all(|c| c.holds(point))
}

/// Exact sign of `poly(head, tail)`.
pub fn sign_mixed(poly: &QPoly, head: &[Rational], tail: &[AlgebraicReal]) -> i32 {
    let rest = poly.partial_eval(0, head);
    // substitute rational tail entries, keep the algebraic ones
    let mut algebraic: Vec<&AlgebraicReal> = Vec::new();
    let mut q = rest;
    let mut offset = 0;
    for t in tail {
        match t.to_rational() {
            Some(r) => q = q.partial_eval(offset, &[r]),
            None => {
                algebraic.push(t);
                offset += 1;
            }
        }
    }
    match algebraic.len() {
        0 => q.constant_term().sign(),
        1 => algebraic[0].sign_of(&q.to_univariate(0)),
        _ => {
            let mut acc = AlgebraicReal::from_int(0);
            for (e, c) in q.terms() {
                let mut m = AlgebraicReal::from_rational(c.clone());
                for (x, &k) in algebraic.iter().zip(e) {
                    if k > 0 {
                        let xk = x.eval_poly(&crate::algebra::UPoly::monomial(Rational::from_int(1), k as usize));
                        m = m.mul(&xk);
                    }
                }
                acc = acc.add(&m);
            }
            acc.sign()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::root_isolate;
    use crate::algebra::UPoly;

    #[test]
    fn mixed_sign_with_two_algebraic_coordinates() {
        let two: UPoly<Rational> = UPoly::new(vec![Rational::from_int(-2), Rational::from_int(0), Rational::from_int(1)]);
        let s = root_isolate(&two).unwrap()[1].clone();
        // c1 - c2 at (sqrt2, sqrt2) is zero, c1 + c2 positive
        let x = QPoly::var(2, 0);
        let y = QPoly::var(2, 1);
        assert_eq!(sign_mixed(&(&x - &y), &[], &[s.clone(), s.clone()]), 0);
        assert_eq!(sign_mixed(&(&x + &y), &[], &[s.clone(), s.clone()]), 1);
        // b*c - 2 at b = 1, c = sqrt2: negative
        let p = &(&x * &y) - &QPoly::constant(2, Rational::from_int(2));
        assert_eq!(sign_mixed(&p, &[Rational::from_int(1)], &[s]), -1);
    }
}
