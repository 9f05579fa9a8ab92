//! Decomposition of families cut out by one polynomial equation into
//! injective families, by induction on the number of parameters and on the
//! order of the defining polynomial.

use std::sync::Arc;

use crate::algebra::{MPoly, OrderIndex, ParamPoly, RatFunc, Rational};
use crate::engines::calculus::{coordinate_family, dedupe_k0, restrict_sub, sigma_products};
use crate::error::{Error, Result};
use crate::model::result::DescentViolation;
use crate::model::{
    Condition, DecompositionResult, DefSet, Piece, Predicate, Relation, SmallSet, Tag, Trace, Ufss, XDesc, ZDesc,
};

/// Hard cap on recursion nodes for one decomposition.
const NODE_BUDGET: usize = 20_000;
/// Hard cap on the size of a pair set formed for collisions.
const PAIR_BUDGET: usize = 250_000;

/// The part of `p` where its order is `lead`: `guard != 0`, every
/// coefficient above `lead` vanishes, and `poly` is `p` truncated at `lead`
/// and divided by `guard`.
#[derive(Clone, Debug)]
pub struct LeadingCase {
    pub lead: OrderIndex,
    pub guard: RatFunc,
    pub vanishing: Vec<RatFunc>,
    pub poly: ParamPoly,
}

fn eval_at(f: &RatFunc, b: &[Rational]) -> Result<Rational> {
    f.eval(b).ok_or_else(|| Error::Guard { point: b.to_vec(), reason: format!("coefficient {f:?} is undefined") })
}

impl LeadingCase {
    pub fn holds(&self, b: &[Rational]) -> Result<bool> {
        if eval_at(&self.guard, b)?.sign() == 0 {
            return Ok(false);
        }
        for f in &self.vanishing {
            if eval_at(f, b)?.sign() != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// One case per support index, highest first.
pub fn normalize_leading(p: &ParamPoly) -> Result<Vec<LeadingCase>> {
    let (support, _) = p.leading_support()?;
    let mut cases = Vec::with_capacity(support.len());
    for (pos, idx) in support.iter().enumerate().rev() {
        let vanishing = support[pos + 1..].iter().map(|i| p.coeff(i)).collect();
        let (poly, guard) = p.truncate_above(idx).divide_by_coeff(idx)?;
        cases.push(LeadingCase { lead: idx.clone(), guard, vanishing, poly });
    }
    Ok(cases)
}

/// `q_d = sum_t d_{offset + t} y^{i_t} z^{j_t}` over `support`, with `n`
/// coefficient variables in total.
fn generic_poly(support: &[OrderIndex], n: usize, offset: usize, k: usize) -> ParamPoly {
    ParamPoly::from_terms(
        n,
        k,
        support.iter().enumerate().map(|(t, i)| (i.clone(), RatFunc::var(n, offset + t))),
    )
}

/// A case moved to coefficient space: members `b` are replaced by their
/// coefficient vectors `d = h(b)`.
#[derive(Clone, Debug)]
pub struct Lifted {
    /// Support in increasing order; the last entry is the leading index.
    pub support: Vec<OrderIndex>,
    pub map: Vec<RatFunc>,
    pub q: ParamPoly,
    pub z0: Arc<ZDesc>,
    pub s0: Arc<SmallSet>,
    pub x0: Arc<XDesc>,
}

pub fn lift_to_coefficient_space(case: &LeadingCase, s_case: &Arc<SmallSet>, x: &Arc<XDesc>) -> Result<Lifted> {
    let support = case.poly.support();
    let map: Vec<RatFunc> = support.iter().map(|i| case.poly.coeff(i)).collect();
    let n = support.len();
    let s0 = SmallSet::image(s_case, n, "coefficients", |b| map.iter().map(|f| eval_at(f, b)).collect())?;
    let s0 = Arc::new(s0);
    let q = generic_poly(&support, n, 0, case.poly.k());
    let z0 = ZDesc::set(DefSet { nondegenerate: true, ..DefSet::equation(q.clone()) });
    let members = XDesc::filtered(x.clone(), Predicate::Member { s: s_case.clone() });
    let x0 = Arc::new(XDesc::Image { parent: members, map: map.clone(), s: s0.clone() });
    Ok(Lifted { support, map, q, z0, s0, x0 })
}

/// Selector pieces keeping the roots no other member of `X_0,a` shares.
pub fn split_injective_part(l: &Lifted) -> Vec<Piece> {
    let bound = l.q.z_degree() as usize;
    (1..=bound)
        .map(|index| {
            let sel = Arc::new(ZDesc::Selector { base: l.z0.clone(), index, bound });
            let x = XDesc::filtered(l.x0.clone(), Predicate::Unshared { z: l.z0.clone(), selector: sel.clone() });
            Piece::new(sel, x, Tag::X1Injective)
        })
        .collect()
}

/// Pairs of distinct coefficient vectors and their difference polynomial
/// `r_{d1,d2} = q_{d1} - q_{d2}`.
#[derive(Clone, Debug)]
pub struct Collisions {
    pub r: ParamPoly,
    pub q1: ParamPoly,
    pub pairs: Arc<SmallSet>,
    pub x_pairs: Arc<XDesc>,
    pub block: usize,
}

pub fn split_collisions(l: &Lifted) -> Collisions {
    let n = l.support.len();
    let k = l.q.k();
    let q1 = generic_poly(&l.support, 2 * n, 0, k);
    let q2 = generic_poly(&l.support, 2 * n, n, k);
    let r = q1.sub(&q2);
    let pairs = Arc::new(SmallSet::product(&[l.s0.clone(), l.s0.clone()]));
    let prod = Arc::new(XDesc::Product { factors: vec![l.x0.clone(), l.x0.clone()], s: pairs.clone() });
    let x_pairs = XDesc::filtered(prod, Predicate::OffDiagonal { block: n });
    Collisions { r, q1, pairs, x_pairs, block: n }
}

/// A family `{p = 0}` over `X`, with the guards of its original set.
struct Family {
    p: ParamPoly,
    guards: Vec<RatFunc>,
    z: Arc<ZDesc>,
    x: Arc<XDesc>,
}

#[derive(Default)]
struct Ctx {
    trace: Trace,
}

impl Ctx {
    fn node(&mut self, parent: Option<usize>, rule: &str, k: usize, alpha: OrderIndex, points: usize) -> Result<usize> {
        if self.trace.nodes.len() >= NODE_BUDGET {
            return Err(Error::Contract(format!("recursion exceeded {NODE_BUDGET} cases")));
        }
        Ok(self.trace.push(parent, rule, k, alpha, points))
    }

    /// Records that every collision pair drops strictly below `alpha`.
    fn check_descent(&mut self, c: &Collisions, alpha: &OrderIndex) -> Result<()> {
        for d in c.pairs.points() {
            if d[..c.block] == d[c.block..] {
                continue;
            }
            let spec = c.r.specialize(d)?;
            self.trace.pairs_checked += 1;
            match crate::algebra::monomial_order(&spec) {
                Some(o) if o < *alpha => {}
                Some(o) => self.trace.descent_violations.push(DescentViolation { alpha: alpha.clone(), order: o }),
                None => {
                    return Err(Error::Contract(format!("distinct coefficient vectors with equal polynomials at {d:?}")))
                }
            }
        }
        Ok(())
    }
}

fn guards_pass(guards: &[RatFunc], b: &[Rational]) -> bool {
    guards.iter().all(|g| g.eval(b).map(|v| v.sign() != 0).unwrap_or(false))
}

fn rcf_inner(fam: &Family, parent: Option<usize>, rule: &str, ctx: &mut Ctx) -> Result<Vec<Piece>> {
    if fam.p.is_zero() || fam.p.z_degree() == 0 {
        return Ok(vec![]);
    }
    let k = fam.p.k();
    let s = fam.x.small().clone();
    if k == 0 {
        let alpha = fam.p.order().expect("nonzero");
        ctx.node(parent, rule, 0, alpha, s.len())?;
        let u = Ufss::new(fam.z.clone(), fam.x.clone(), false);
        return Ok(dedupe_k0(&u)?.pieces);
    }
    let mut pieces = Vec::new();
    for case in normalize_leading(&fam.p)? {
        let mut keep = Vec::new();
        for b in s.points() {
            if guards_pass(&fam.guards, b) && case.holds(b)? {
                keep.push(b.clone());
            }
        }
        if keep.is_empty() {
            continue;
        }
        let s_case = Arc::new(SmallSet::subset(&s, |p| keep.contains(p)));
        let node = ctx.node(parent, rule, k, case.lead.clone(), keep.len())?;
        let lifted = lift_to_coefficient_space(&case, &s_case, &fam.x)?;
        pieces.extend(split_injective_part(&lifted));
        if lifted.s0.len() < 2 {
            continue;
        }
        if lifted.s0.len() * lifted.s0.len() > PAIR_BUDGET {
            return Err(Error::Contract(format!("collision pair set of {} points is too large", lifted.s0.len().pow(2))));
        }
        let col = split_collisions(&lifted);
        ctx.check_descent(&col, &case.lead)?;
        let v1 = Family {
            p: col.r.clone(),
            guards: vec![],
            z: ZDesc::set(DefSet { nondegenerate: true, ..DefSet::equation(col.r.clone()) }),
            x: col.x_pairs.clone(),
        };
        let sub = rcf_inner(&v1, Some(node), "V1-DESCENT", ctx)?;
        pieces.extend(sub.into_iter().map(|p| p.tagged(Tag::V1Descent)));
        pieces.extend(recurse_v2(&col, node, ctx)?);
    }
    Ok(pieces)
}

/// `e` is `e1 * y_t + (terms free of y_t)` with `e1` depending on `x` only.
fn linear_coefficient(e: &ParamPoly, t: usize) -> Option<RatFunc> {
    let k = e.k();
    let mut unit = vec![0u32; k + 1];
    unit[t] = 1;
    let mut found = None;
    for (exps, c) in e.poly().terms() {
        if exps[t] == 0 {
            continue;
        }
        if *exps != unit {
            return None;
        }
        found = Some(c.clone());
    }
    found
}

fn without_term(e: &ParamPoly, exps: &[u32]) -> ParamPoly {
    let poly = MPoly::from_terms(
        e.k() + 1,
        e.poly().terms().filter(|(x, _)| x.as_slice() != exps).map(|(x, c)| (x.clone(), c.clone())),
    );
    ParamPoly::new(e.n(), e.k(), poly)
}

/// Handles collision pairs whose difference vanishes identically in `z` at
/// the given parameters.
fn recurse_v2(col: &Collisions, node: usize, ctx: &mut Ctx) -> Result<Vec<Piece>> {
    let n2 = col.r.n();
    let k = col.r.k();
    let block = col.block;
    let offdiag = Arc::new(SmallSet::subset(&col.pairs, |p| p[..block] != p[block..]));
    let eqs: Vec<ParamPoly> = col.r.z_coefficients().into_values().map(|e| ParamPoly::new(n2, k, e)).collect();
    let mut out = Vec::new();
    v2_cases(col, offdiag, eqs, node, ctx, &mut out)?;
    Ok(out)
}

fn v2_cases(
    col: &Collisions,
    pairs: Arc<SmallSet>,
    mut eqs: Vec<ParamPoly>,
    node: usize,
    ctx: &mut Ctx,
    out: &mut Vec<Piece>,
) -> Result<()> {
    let k = col.r.k();
    let mut pairs = pairs;
    eqs.retain(|e| !e.is_zero());
    // equations free of parameters either rule a pair out or hold trivially
    let mut i = 0;
    while i < eqs.len() {
        if eqs[i].poly().terms().all(|(e, _)| e.iter().all(|&x| x == 0)) {
            let c = eqs[i].coeff(&OrderIndex::zero(k));
            let mut keep = Vec::new();
            for d in pairs.points() {
                if eval_at(&c, d)?.sign() == 0 {
                    keep.push(d.clone());
                }
            }
            pairs = Arc::new(SmallSet::subset(&pairs, |p| keep.contains(p)));
            eqs.remove(i);
        } else {
            i += 1;
        }
    }
    if pairs.is_empty() {
        return Ok(());
    }
    for (ei, e) in eqs.iter().enumerate() {
        for t in 0..k {
            let Some(e1) = linear_coefficient(e, t) else { continue };
            let mut nonzero = Vec::new();
            for d in pairs.points() {
                if eval_at(&e1, d)?.sign() != 0 {
                    nonzero.push(d.clone());
                }
            }
            if nonzero.is_empty() {
                continue;
            }
            let p1 = Arc::new(SmallSet::subset(&pairs, |p| nonzero.contains(p)));
            let p0 = Arc::new(SmallSet::subset(&pairs, |p| !nonzero.contains(p)));
            let others: Vec<ParamPoly> =
                eqs.iter().enumerate().filter(|(j, _)| *j != ei).map(|(_, e)| e.clone()).collect();
            out.extend(substitute_parameter(col, &p1, e, t, &e1, &others, node, ctx)?);
            let mut unit = vec![0u32; k + 1];
            unit[t] = 1;
            let mut rest = eqs.clone();
            rest[ei] = without_term(e, &unit);
            return v2_cases(col, p0, rest, node, ctx, out);
        }
    }
    out.extend(fallback(col, &pairs, &eqs));
    Ok(())
}

/// Solves `e = 0` for `y_t` and decomposes the family of pairs
/// `(a_t, c)` over the remaining parameters, then slices back.
#[allow(clippy::too_many_arguments)]
fn substitute_parameter(
    col: &Collisions,
    pairs: &Arc<SmallSet>,
    e: &ParamPoly,
    t: usize,
    e1: &RatFunc,
    others: &[ParamPoly],
    node: usize,
    ctx: &mut Ctx,
) -> Result<Vec<Piece>> {
    let n2 = col.r.n();
    let k = col.r.k();
    let mut unit = vec![0u32; k + 1];
    unit[t] = 1;
    let e0 = without_term(e, &unit);
    // first coordinate: e1 * z + e0 with y_t removed
    let mut zexp = vec![0u32; k];
    zexp[k - 1] = 1;
    let c1 = &e0.poly().remove_var(t) + &MPoly::monomial(zexp, e1.clone());
    let c1 = ParamPoly::new(n2, k - 1, c1);
    // second coordinate: q_{d1} with y_t := -e0 / e1
    let g = e0.poly().scale(&(-(RatFunc::constant(n2, Rational::from_int(1)) / e1.clone())));
    let c2 = col.q1.substitute_param(t, &g);
    // remaining equations with y_t := z_1, denominators cleared
    let mut map: Vec<usize> = (0..n2).collect();
    for i in 0..k {
        map.push(match i.cmp(&t) {
            std::cmp::Ordering::Less => n2 + i,
            std::cmp::Ordering::Equal => n2 + k - 1,
            std::cmp::Ordering::Greater => n2 + i - 1,
        });
    }
    map.push(n2 + k);
    let couplings = others.iter().map(|o| o.to_joint_cleared().remap_vars(n2 + k + 1, &map)).collect();
    let set = DefSet {
        m: n2,
        k: k - 1,
        l: 2,
        p: vec![c1, c2],
        couplings,
        strict: vec![],
        ambient: vec![],
        guards: vec![e1.clone()],
        nondegenerate: true,
    };
    let x = XDesc::explicit(k - 1, pairs.clone());
    let mut per_coord = Vec::with_capacity(2);
    for i in 0..2 {
        let coord = coordinate_family(&set, i);
        let fam = Family { p: coord.p[0].clone(), guards: coord.guards.clone(), z: ZDesc::set(coord), x: x.clone() };
        per_coord.push(rcf_inner(&fam, Some(node), "V2-SUBST", ctx)?);
    }
    let target = Arc::new(Ufss::new(ZDesc::set(set), x, false));
    let dec = sigma_products(&target, per_coord, Trace::default());
    Ok(dec
        .all_pieces()
        .map(|p| {
            let z = Arc::new(ZDesc::Slice { inner: p.ufss.z.clone(), param: t });
            let x = Arc::new(XDesc::DropParam { inner: p.ufss.x.clone(), param: t });
            Piece { ufss: Ufss::new(z, x, true), provenance: p.provenance.clone() }
                .tagged(Tag::V2Subst)
                .tagged(Tag::Param)
        })
        .collect())
}

/// Pairs with no solvable parameter: each selector keeps the lexicographically
/// least pair producing a given root.
fn fallback(col: &Collisions, pairs: &Arc<SmallSet>, eqs: &[ParamPoly]) -> Vec<Piece> {
    let n2 = col.r.n();
    let k = col.r.k();
    let ambient = eqs
        .iter()
        .map(|e| Condition::new(e.to_joint_cleared().remove_var(n2 + k), Relation::Eq))
        .collect();
    let set = DefSet { ambient, nondegenerate: true, ..DefSet::equation(col.q1.clone()) };
    let z = ZDesc::set(set);
    let x = XDesc::explicit(k, pairs.clone());
    let bound = col.q1.z_degree() as usize;
    (1..=bound)
        .map(|index| {
            let sel = Arc::new(ZDesc::Selector { base: z.clone(), index, bound });
            let xs = XDesc::filtered(x.clone(), Predicate::LexMin { z: sel.clone() });
            Piece::new(sel, xs, Tag::V2Fallback)
        })
        .collect()
}

/// Decomposes `u` (one equation, one output coordinate, no strict
/// inequalities) into injective families with the same union.
pub fn rcf_decompose(u: &Arc<Ufss>) -> Result<DecompositionResult> {
    u.check_arity()?;
    let ZDesc::Set(d) = &*u.z else {
        return Err(Error::NotNormalized("expected a normal-form set".into()));
    };
    if d.l != 1 || !d.couplings.is_empty() {
        return Err(Error::NotNormalized("reduce to one output coordinate first".into()));
    }
    if !d.strict.is_empty() {
        return Err(Error::NotNormalized("strip strict inequalities and restrict afterwards".into()));
    }
    let fam = Family { p: d.p[0].clone(), guards: d.guards.clone(), z: u.z.clone(), x: u.x.clone() };
    let mut ctx = Ctx::default();
    let pieces = rcf_inner(&fam, None, "ROOT", &mut ctx)?;
    let dec = DecompositionResult { pieces, fallback_pieces: vec![], trace: ctx.trace };
    Ok(restrict_sub(u, dec).split_fallback())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_qpoly;
    use crate::verify::{verify_against_brute, verify_all, SampleGrid};

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn instance(text: &str, m: usize, k: usize, pts: &[&[i64]]) -> Arc<Ufss> {
        let names = ["x", "w", "y", "v", "z"];
        let vars: Vec<&str> = names[..m].iter().chain(&names[2..2 + k]).chain(&["z"]).copied().collect();
        let p = ParamPoly::from_joint(m, k, &parse_qpoly(text, &vars).unwrap());
        let s = Arc::new(SmallSet::base(m, pts.iter().map(|p| p.iter().map(|&v| r(v)).collect()).collect()));
        Arc::new(Ufss::new(ZDesc::set(DefSet::equation(p)), XDesc::explicit(k, s), false))
    }

    #[test]
    fn leading_cases_of_x_z2_plus_z() {
        let u = instance("x*z^2 + z", 1, 0, &[&[0]]);
        let ZDesc::Set(d) = &*u.z else { unreachable!() };
        let cases = normalize_leading(&d.p[0]).unwrap();
        assert_eq!(cases.len(), 2);
        assert_eq!(cases[0].lead, OrderIndex::new(vec![], 2));
        assert!(!cases[0].holds(&[r(0)]).unwrap());
        assert!(cases[0].holds(&[r(3)]).unwrap());
        assert_eq!(cases[1].lead, OrderIndex::new(vec![], 1));
        assert!(cases[1].holds(&[r(0)]).unwrap());
        assert!(!cases[1].holds(&[r(3)]).unwrap());
        // leading coefficient normalized to one
        assert_eq!(cases[0].poly.coeff(&cases[0].lead), RatFunc::constant(1, r(1)));
    }

    #[test]
    fn linear_collision_descends_in_order() {
        let u = instance("z - x*y", 1, 1, &[&[1], &[2]]);
        let dec = rcf_decompose(&u).unwrap();
        let grid = SampleGrid::parse("-2:2:1/2", 0);
        let grid = grid.unwrap();
        let rep = verify_all(&u, &dec, &grid);
        assert!(rep.passed(), "{}", rep.summary_table());
        assert!(verify_against_brute(&u, &dec, &grid).passed());
        assert!(dec.all_pieces().any(|p| p.has(Tag::V1Descent)));
        assert!(dec.fallback_pieces.is_empty());
        assert!(dec.trace.pairs_checked >= 2);
    }

    #[test]
    fn vanishing_difference_substitutes_parameter() {
        let u = instance("z^2 - x*y", 1, 1, &[&[1], &[2]]);
        let dec = rcf_decompose(&u).unwrap();
        let grid = SampleGrid::parse("-2:2:1/2", 0).unwrap();
        let rep = verify_all(&u, &dec, &grid);
        assert!(rep.passed(), "{}", rep.summary_table());
        assert!(dec.all_pieces().any(|p| p.has(Tag::V2Subst)));
        assert!(dec.fallback_pieces.is_empty());
        let ev = crate::model::Evaluator::new();
        // at a = 0 both members give the root 0; only substituted pieces keep it
        for p in dec.all_pieces() {
            let hits: usize = ev
                .x_fiber(&p.ufss.x, &[r(0)])
                .unwrap()
                .iter()
                .map(|b| ev.fiber(&p.ufss.z, b, &[r(0)]).unwrap().len())
                .sum();
            assert!(hits <= 1);
            if hits == 1 {
                assert!(p.has(Tag::V2Subst));
            }
        }
    }

    #[test]
    fn constant_family_deduplicates() {
        let u = instance("z^2 - x^2", 1, 0, &[&[-1], &[1], &[2]]);
        let dec = rcf_decompose(&u).unwrap();
        let grid = SampleGrid::parse("0:0:1", 0).unwrap();
        let rep = verify_all(&u, &dec, &grid);
        assert!(rep.passed(), "{}", rep.summary_table());
    }

    #[test]
    fn two_parameter_quadratic() {
        let u = instance("z^2 + x*y*z - v", 1, 2, &[&[-1], &[0], &[1], &[2]]);
        let dec = rcf_decompose(&u).unwrap();
        let grid = SampleGrid::parse("-1:1:1/2", 3).unwrap();
        let rep = verify_all(&u, &dec, &grid).merge(verify_against_brute(&u, &dec, &grid));
        assert!(rep.passed(), "{}", rep.summary_table());
    }
}
