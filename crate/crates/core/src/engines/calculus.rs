//! Transforms between families: restriction to a subfamily, reduction to a
//! single output coordinate, the `k = 0` base case, graph and parameter
//! extensions, and conversion to and from choice decompositions.

use std::sync::Arc;

use crate::algebra::{ParamPoly, QPoly, RatFunc, Rational};
use crate::error::{Error, Result};
use crate::model::{
    ChoiceDecomposition, ChoiceInstance, ChoicePiece, DecompositionResult, DefSet, Evaluator, FiberSelection,
    MapDescriptor, MapPiece, Piece, Predicate, SmallSet, Tag, Trace, Ufss, XDesc, ZDesc,
};

/// Splits a piece into selector pieces with at most one fiber element.
pub fn singletonize(piece: Piece) -> Vec<Piece> {
    if piece.ufss.z.fiber_bound() <= 1 {
        return vec![piece];
    }
    let sel = FiberSelection::new(&piece.ufss.z);
    sel.selectors
        .into_iter()
        .map(|z| Piece {
            ufss: Ufss::new(z, piece.ufss.x.clone(), true),
            provenance: piece.provenance.clone(),
        })
        .collect()
}

/// Given a decomposition of a family whose fibers contain those of
/// `inner`, keeps in each (singleton) piece only the members whose fiber
/// lies in some fiber of `inner`.
pub fn restrict_sub(inner: &Arc<Ufss>, outer: DecompositionResult) -> DecompositionResult {
    let restrict = |pieces: Vec<Piece>| -> Vec<Piece> {
        pieces
            .into_iter()
            .flat_map(singletonize)
            .map(|p| {
                let x = XDesc::filtered(
                    p.ufss.x.clone(),
                    Predicate::CoveredBy { z: p.ufss.z.clone(), target: inner.clone() },
                );
                Piece { ufss: Ufss::new(p.ufss.z.clone(), x, true), provenance: p.provenance }.tagged(Tag::Restrict)
            })
            .collect()
    };
    DecompositionResult {
        pieces: restrict(outer.pieces),
        fallback_pieces: restrict(outer.fallback_pieces),
        trace: outer.trace,
    }
}

/// Appends `other`'s trace, shifting ids; returns the id offset.
pub fn merge_trace(into: &mut Trace, other: Trace) -> usize {
    let offset = into.nodes.len();
    for mut n in other.nodes {
        n.id += offset;
        n.parent = n.parent.map(|p| p + offset);
        into.nodes.push(n);
    }
    into.pairs_checked += other.pairs_checked;
    into.descent_violations.extend(other.descent_violations);
    offset
}

/// The family of the `i`-th output coordinate, `π_i(Z) ⊇` the projection.
pub fn coordinate_family(d: &DefSet, i: usize) -> DefSet {
    DefSet {
        m: d.m,
        k: d.k,
        l: 1,
        p: vec![d.p[i].clone()],
        couplings: vec![],
        strict: vec![],
        ambient: d.ambient.clone(),
        guards: d.guards.clone(),
        nondegenerate: d.nondegenerate,
    }
}

/// Decomposes a family with several output coordinates by decomposing each
/// coordinate family, forming all products of their pieces, and restricting
/// the products back to `u`.
pub fn reduce_l_to_1(
    u: &Arc<Ufss>,
    mut decompose: impl FnMut(&Arc<Ufss>) -> Result<DecompositionResult>,
) -> Result<DecompositionResult> {
    let ZDesc::Set(d) = &*u.z else {
        return Err(Error::NotNormalized("coordinate reduction needs a normal-form set".into()));
    };
    let mut trace = Trace::default();
    let mut per_coord: Vec<Vec<Piece>> = Vec::with_capacity(d.l);
    for i in 0..d.l {
        let ui = Arc::new(Ufss {
            m: u.m,
            k: u.k,
            l: 1,
            z: ZDesc::set(coordinate_family(d, i)),
            s: u.s.clone(),
            x: u.x.clone(),
            injective: false,
        });
        let dec = decompose(&ui)?;
        merge_trace(&mut trace, dec.trace.clone());
        per_coord.push(dec.all_pieces().cloned().collect());
    }
    Ok(sigma_products(u, per_coord, trace))
}

/// All products of one singleton piece per coordinate, restricted to `u`.
pub fn sigma_products(u: &Arc<Ufss>, per_coord: Vec<Vec<Piece>>, trace: Trace) -> DecompositionResult {
    let per_coord: Vec<Vec<Piece>> = per_coord.into_iter().map(|v| v.into_iter().flat_map(singletonize).collect()).collect();
    let mut combos: Vec<Vec<&Piece>> = vec![vec![]];
    for pieces in &per_coord {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                pieces.iter().map(move |p| {
                    let mut c = c.clone();
                    c.push(p);
                    c
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for combo in combos {
        let z = Arc::new(ZDesc::Product { factors: combo.iter().map(|p| p.ufss.z.clone()).collect() });
        let s = Arc::new(SmallSet::product(&combo.iter().map(|p| p.ufss.x.small().clone()).collect::<Vec<_>>()));
        let x = Arc::new(XDesc::Product { factors: combo.iter().map(|p| p.ufss.x.clone()).collect(), s });
        let mut prov: Vec<Tag> = Vec::new();
        for t in combo.iter().flat_map(|p| p.provenance.iter().copied()) {
            if !prov.contains(&t) {
                prov.push(t);
            }
        }
        out.push(Piece { ufss: Ufss::new(z, x, true), provenance: prov }.tagged(Tag::Product));
    }
    let product = DecompositionResult { pieces: out, fallback_pieces: vec![], trace };
    restrict_sub(u, product).split_fallback()
}

/// Base case without parameters: fibers are fixed sets, so each selector
/// piece keeps the lexicographically least member of every group of members
/// with equal selected value.
pub fn dedupe_k0(u: &Ufss) -> Result<DecompositionResult> {
    if u.k != 0 {
        return Err(Error::Contract(format!("dedupe needs k = 0, got k = {}", u.k)));
    }
    let ev = Evaluator::new();
    let members = ev.x_fiber(&u.x, &[])?;
    let selectors: Vec<Arc<ZDesc>> =
        if u.z.fiber_bound() <= 1 { vec![u.z.clone()] } else { FiberSelection::new(&u.z).selectors };
    let mut pieces = Vec::new();
    for z in selectors {
        let mut reps: Vec<Vec<Rational>> = Vec::new();
        let mut seen = Vec::new();
        for b in members.iter() {
            let f = ev.fiber(&z, b, &[])?;
            if f.is_empty() || seen.contains(&f) {
                continue;
            }
            seen.push(f);
            reps.push(b.clone());
        }
        if reps.is_empty() {
            continue;
        }
        let s = Arc::new(SmallSet::subset(u.x.small(), |p| reps.contains(p)));
        pieces.push(Piece::new(z, XDesc::explicit(0, s), Tag::Dedup));
    }
    Ok(DecompositionResult { pieces, ..Default::default() })
}

fn map_arity(map: &[RatFunc], nvars: usize) -> Result<()> {
    match map.iter().find(|f| f.nvars() != nvars && !f.is_constant()) {
        Some(f) => Err(Error::Arity(format!("map component in {} variables, expected {nvars}", f.nvars()))),
        None => Ok(()),
    }
}

/// `(Z', S', X')` with `b` extended by `f(b)`.
pub fn push_graph(u: &Ufss, f: Vec<RatFunc>) -> Result<Ufss> {
    map_arity(&f, u.m)?;
    let s = SmallSet::image(&u.s, u.m + f.len(), "graph", |b| {
        let mut v = b.clone();
        for g in &f {
            v.push(g.eval(b).ok_or_else(|| Error::Guard { point: b.clone(), reason: "graph map undefined".into() })?);
        }
        Ok(v)
    })?;
    let s = Arc::new(s);
    let z = Arc::new(ZDesc::PushGraph { inner: u.z.clone(), map: f.clone() });
    let x = Arc::new(XDesc::PushGraph { inner: u.x.clone(), map: f, s: s.clone() });
    Ok(Ufss { m: z.m(), k: u.k, l: u.l, z, s, x, injective: u.injective })
}

/// `(Z', S, X')` with the parameters extended by `f(b, a)`.
pub fn append_param(u: &Ufss, f: Vec<RatFunc>) -> Result<Ufss> {
    map_arity(&f, u.m + u.k)?;
    let z = Arc::new(ZDesc::AppendParam { inner: u.z.clone(), map: f.clone() });
    let x = Arc::new(XDesc::AppendParam { inner: u.x.clone(), map: f });
    Ok(Ufss { m: u.m, k: z.k(), l: u.l, z, s: u.s.clone(), x, injective: u.injective })
}

/// A decomposition of `u` is one of `push_graph(u, f)`: the unions agree.
pub fn push_graph_decomposition(dec: DecompositionResult) -> DecompositionResult {
    let tag = |v: Vec<Piece>| v.into_iter().map(|p| p.tagged(Tag::Graph)).collect();
    DecompositionResult { pieces: tag(dec.pieces), fallback_pieces: tag(dec.fallback_pieces), trace: dec.trace }
}

/// Lifts a decomposition of `u` to one of `lifted = append_param(u, f)`:
/// pieces ignore the new parameters and are then restricted.
pub fn append_param_decomposition(lifted: &Arc<Ufss>, dec: DecompositionResult, added: usize) -> DecompositionResult {
    let k0 = lifted.k - added;
    let lift = |v: Vec<Piece>| -> Vec<Piece> {
        v.into_iter()
            .map(|p| {
                let (mut z, mut x) = (p.ufss.z.clone(), p.ufss.x.clone());
                for j in 0..added {
                    z = Arc::new(ZDesc::DropParam { inner: z, param: k0 + j });
                    x = Arc::new(XDesc::DropParam { inner: x, param: k0 + j });
                }
                Piece { ufss: Ufss::new(z, x, true), provenance: p.provenance }.tagged(Tag::Param)
            })
            .collect()
    };
    let dec = DecompositionResult {
        pieces: lift(dec.pieces),
        fallback_pieces: lift(dec.fallback_pieces),
        trace: dec.trace,
    };
    restrict_sub(lifted, dec)
}

/// Graph of one polynomial branch: `z_i = h_i(b, a)` on the branch domain.
pub fn graph_set(m: usize, k: usize, domain: &[crate::model::Condition], components: &[QPoly]) -> DefSet {
    let n = m + k;
    let p = components
        .iter()
        .map(|h| {
            let joint = &QPoly::var(n + 1, n) - &h.insert_vars(n, 1);
            ParamPoly::from_joint(m, k, &joint)
        })
        .collect::<Vec<_>>();
    DefSet {
        m,
        k,
        l: components.len(),
        p,
        couplings: vec![],
        strict: vec![],
        ambient: domain.to_vec(),
        guards: vec![],
        nondegenerate: false,
    }
}

/// One family per polynomial branch of `h`: `W = graph(h)` and
/// `X = Z ∩ (S × M^k)`.
pub fn choice_to_ufss_parts(inst: &ChoiceInstance) -> Result<Vec<Ufss>> {
    inst.h.validate()?;
    let h = &inst.h;
    if inst.s.dim != h.m {
        return Err(Error::Arity(format!("S has dimension {}, map expects {}", inst.s.dim, h.m)));
    }
    let x = Arc::new(XDesc::Explicit { k: h.k, s: inst.s.clone(), conditions: inst.domain.clone() });
    h.pieces
        .iter()
        .map(|piece| match piece {
            MapPiece::Polynomial { domain, components } => {
                let z = ZDesc::set(graph_set(h.m, h.k, domain, components));
                Ok(Ufss::new(z, x.clone(), false))
            }
            MapPiece::Selector { .. } => {
                Err(Error::Contract("choice instances need polynomial map branches".into()))
            }
        })
        .collect()
}

/// The whole graph of `h` as a single family.
pub fn choice_to_ufss(inst: &ChoiceInstance) -> Result<Ufss> {
    let parts = choice_to_ufss_parts(inst)?;
    let x = Arc::new(XDesc::Explicit { k: inst.h.k, s: inst.s.clone(), conditions: inst.domain.clone() });
    let z = match parts.len() {
        1 => parts[0].z.clone(),
        _ => Arc::new(ZDesc::Union { members: parts.iter().map(|p| p.z.clone()).collect() }),
    };
    Ok(Ufss { m: inst.h.m, k: inst.h.k, l: inst.h.l, z, s: inst.s.clone(), x, injective: false })
}

/// When `z` is `{c_i = h_i(b, a)}` with polynomial `h_i` and nothing else,
/// returns the branch.
fn polynomial_graph(z: &ZDesc) -> Option<MapPiece> {
    let ZDesc::Set(d) = z else { return None };
    if !d.couplings.is_empty() || !d.strict.is_empty() || !d.guards.is_empty() {
        return None;
    }
    let n = d.m + d.k;
    let mut components = Vec::new();
    for p in &d.p {
        let joint = p.to_joint_cleared();
        let zc = joint.coefficients_in(n);
        if zc.keys().any(|&e| e > 1) {
            return None;
        }
        let lead = zc.get(&1)?;
        if !lead.is_constant() {
            return None;
        }
        let c = lead.constant_term();
        let rest = zc.get(&0).cloned().unwrap_or_else(|| QPoly::zero(n + 1));
        components.push(rest.remove_var(n).scale(&(-Rational::from_int(1) / c)));
    }
    Some(MapPiece::Polynomial { domain: d.ambient.clone(), components })
}

/// Turns an injective decomposition into maps `h_i` with injective
/// restrictions to `X_{i,a}` covering the same union.
pub fn ufss_to_choice(dec: &DecompositionResult) -> Result<ChoiceDecomposition> {
    let mut pieces = Vec::new();
    for p in dec.all_pieces() {
        let u = &p.ufss;
        if !u.injective {
            return Err(Error::Contract("non-injective piece cannot be turned into choice maps".into()));
        }
        if let Some(branch) = polynomial_graph(&u.z) {
            let h = MapDescriptor { m: u.m, k: u.k, l: u.l, pieces: vec![branch] };
            pieces.push(ChoicePiece { h, x: u.x.clone(), y: u.x.small().clone() });
            continue;
        }
        let sel = FiberSelection::new(&u.z);
        for (j, _) in sel.selectors.iter().enumerate() {
            let h = MapDescriptor {
                m: u.m,
                k: u.k,
                l: u.l,
                pieces: vec![MapPiece::Selector { z: u.z.clone(), index: j + 1, bound: sel.bound }],
            };
            pieces.push(ChoicePiece { h, x: u.x.clone(), y: u.x.small().clone() });
        }
    }
    Ok(ChoiceDecomposition { pieces })
}
