//! Seeded instance corpora at desk scale: at most two point and two
//! parameter coordinates, total degree at most three, at most five points.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{parse_qpoly, ParamPoly, QPoly, Rational};
use crate::engines::independent::{CellGraph, RegularCell};
use crate::engines::linear::AffineMap;
use crate::model::{ChoiceInstance, Condition, DefSet, MapDescriptor, Relation, SmallSet, Ufss, XDesc, ZDesc};
use crate::pipeline::Instance;

const NAMES: [&str; 5] = ["x1", "x2", "y1", "y2", "z"];

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

fn vars(m: usize, k: usize, extra: bool) -> Vec<&'static str> {
    let mut v: Vec<&str> = NAMES[..m].to_vec();
    v.extend(&NAMES[2..2 + k]);
    if extra {
        v.push("z");
    }
    v
}

fn poly(text: &str, v: &[&str]) -> QPoly {
    parse_qpoly(text, v).unwrap_or_else(|e| panic!("generator produced {text:?}: {e}"))
}

/// `count` distinct integer points in `[-2, 2]^dim`, sorted.
fn points(rng: &mut ChaCha8Rng, dim: usize, count: usize, avoid_zero: bool) -> Vec<Vec<Rational>> {
    let mut all: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..dim {
        all = all.into_iter().flat_map(|p| (-2..=2).map(move |v| [p.clone(), vec![v]].concat())).collect();
    }
    if avoid_zero {
        all.retain(|p| p.iter().all(|&v| v != 0));
    }
    all.shuffle(rng);
    all.truncate(count);
    all.sort();
    all.into_iter().map(|p| p.into_iter().map(q).collect()).collect()
}

fn coef(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    rng.gen_range(lo..=hi)
}

fn family(text: &str, m: usize, k: usize, pts: Vec<Vec<Rational>>, strict: &[&str]) -> Instance {
    let v = vars(m, k, true);
    let p = ParamPoly::from_joint(m, k, &poly(text, &v));
    let strict = strict.iter().map(|s| poly(s, &v)).collect();
    let d = DefSet { strict, ..DefSet::equation(p) };
    d.validate().expect("generated set is valid");
    let s = Arc::new(SmallSet::base(m, pts));
    Instance::Rcf { ufss: Ufss::new(ZDesc::set(d), XDesc::explicit(k, s), false) }
}

/// Templates in rotation; the first six force collisions, two of which
/// make coefficient differences vanish at a parameter value.
pub fn rcf_instance(rng: &mut ChaCha8Rng, template: usize) -> Instance {
    let c = coef(rng, -2, 2);
    let size = rng.gen_range(2..=4);
    match template % 9 {
        // every member shares the root a
        0 => family(&format!("(z - x1)*(z - y1 - {c})"), 1, 1, points(rng, 1, size, false), &[]),
        // coefficient vectors coincide at y1 = 0
        1 => family(&format!("z^2 - x1*y1 + {}", c.abs()), 1, 1, points(rng, 1, size, true), &[]),
        2 => family("z^2 + x1*y1*z - y2", 1, 2, points(rng, 1, size, true), &[]),
        // roots meet at a = c for every member
        3 => family(&format!("z - x1*(y1 - {c})"), 1, 1, points(rng, 1, size, true), &[]),
        4 => family(&format!("z^2 - (x1 + x2)*y1*z + {c}*y1"), 2, 1, points(rng, 2, size + 1, false), &[]),
        5 => family(&format!("z^3 - z + x1*(y1 - {c})"), 1, 1, points(rng, 1, size, false), &[]),
        // leading coefficient vanishes on part of S
        6 => family(&format!("x1*z^2 + z - y1 + {c}"), 1, 1, points(rng, 1, size, false), &[]),
        // strict condition stripped and restored
        7 => family(&format!("z^2 - x1^2*y1^2 - {}", c.abs()), 1, 1, points(rng, 1, size, false), &["z"]),
        _ => {
            let m = rng.gen_range(1..=2);
            let k = rng.gen_range(1..=2);
            let d = rng.gen_range(1..=3);
            let v = vars(m, k, false);
            let mut text = format!("z^{d}");
            for _ in 0..rng.gen_range(1..=3) {
                let zp = rng.gen_range(0..d);
                let budget = 3 - zp;
                let mut mono = format!("{}", coef(rng, -2, 2));
                let mut used = 0;
                while used < budget && rng.gen_bool(0.6) {
                    mono.push_str(&format!("*{}", v.choose(rng).expect("nonempty")));
                    used += 1;
                }
                if zp > 0 {
                    mono.push_str(&format!("*z^{zp}"));
                }
                text.push_str(&format!(" + {mono}"));
            }
            let size = rng.gen_range(1..=5);
            family(&text, m, k, points(rng, m, size, false), &[])
        }
    }
}

pub fn linear_instance(rng: &mut ChaCha8Rng) -> Instance {
    let n = rng.gen_range(1..=2);
    let k = rng.gen_range(1..=2);
    let l = rng.gen_range(1..=2);
    let row = |rng: &mut ChaCha8Rng, len: usize| (0..len).map(|_| q(coef(rng, -2, 2))).collect::<Vec<_>>();
    let r = (0..l).map(|_| row(rng, n)).collect();
    let s = (0..l).map(|_| row(rng, k)).collect();
    let b = (0..l).map(|_| q(coef(rng, -3, 3))).collect();
    let domain = if rng.gen_bool(0.4) {
        let v = vars(n, k, false);
        vec![Condition::new(poly(&format!("{} + {}", v[0], v[n]), &v), Relation::Ge)]
    } else {
        vec![]
    };
    let map = AffineMap { n, k, r, s, b, domain };
    let size = rng.gen_range(1..=5);
    let pts = points(rng, n, size, false);
    Instance::Linear { map, s: Arc::new(SmallSet::base(n, pts)) }
}

fn open_cell(conditions: Vec<Condition>) -> RegularCell {
    RegularCell { conditions, open: true, regular: true, strongly_regular: true, h_regularity: vec![], graph: None }
}

pub fn indep_instance(rng: &mut ChaCha8Rng) -> Instance {
    let n = rng.gen_range(1..=2);
    let k = rng.gen_range(1..=2);
    let v = vars(n, k, false);
    let nv = n + k;
    // weighted sums collide on suitable points; the square keeps it nonlinear
    let mut text = format!("{}*{}", coef(rng, 1, 2), v[0]);
    if n == 2 {
        text.push_str(&format!(" + {}*{}", coef(rng, 1, 2), v[1]));
    }
    text.push_str(&format!(" + {}*{}", coef(rng, -2, 2), v[n]));
    if rng.gen_bool(0.5) {
        text.push_str(&format!(" + {}^2", v[0]));
    }
    let h = poly(&text, &v);
    let mut cells = Vec::new();
    let c = coef(rng, -1, 1);
    if n == 2 {
        let d = poly(&format!("{} - {}", v[0], v[1]), &v);
        cells.push(open_cell(vec![Condition::new(d.clone(), Relation::Lt)]));
        cells.push(open_cell(vec![Condition::new(d.clone(), Relation::Gt)]));
        cells.push(RegularCell {
            conditions: vec![Condition::new(d, Relation::Eq)],
            open: false,
            regular: true,
            strongly_regular: false,
            h_regularity: vec![],
            graph: Some(CellGraph { coordinate: 1, value: QPoly::var(nv, 0) }),
        });
    } else {
        // split along the graph a_1 = g + c
        let d = poly(&format!("{} - {} - {c}", v[n], v[0]), &v);
        cells.push(open_cell(vec![Condition::new(d.clone(), Relation::Lt)]));
        cells.push(open_cell(vec![Condition::new(d.clone(), Relation::Gt)]));
        cells.push(RegularCell {
            conditions: vec![Condition::new(d, Relation::Eq)],
            open: false,
            regular: true,
            strongly_regular: false,
            h_regularity: vec![],
            graph: Some(CellGraph { coordinate: n, value: poly(&format!("{} + {c}", v[0]), &v) }),
        });
    }
    let size = rng.gen_range(2..=5);
    let pts = points(rng, n, size, false);
    let instance = ChoiceInstance { h: MapDescriptor::polynomial(n, k, vec![h]), s: Arc::new(SmallSet::base(n, pts)), domain: vec![] };
    let probe = (0..3).map(|_| (0..k).map(|_| q(coef(rng, -2, 2))).collect()).collect();
    Instance::Indep { instance, cells, probe, class_cap: 5 }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn rcf_corpus(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = rng_for(seed, 1);
    (0..count).map(|i| rcf_instance(&mut rng, i)).collect()
}

pub fn linear_corpus(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = rng_for(seed, 2);
    (0..count).map(|_| linear_instance(&mut rng)).collect()
}

pub fn indep_corpus(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = rng_for(seed, 3);
    (0..count).map(|_| indep_instance(&mut rng)).collect()
}

/// Named instances cycling through the three cases.
pub fn corpus(count: usize, seed: u64) -> Vec<(String, Instance)> {
    let per = count.div_ceil(3);
    let r = rcf_corpus(per, seed);
    let l = linear_corpus(per, seed);
    let d = indep_corpus(per, seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let (name, inst) = match i % 3 {
            0 => ("rcf", r[i / 3].clone()),
            1 => ("linear", l[i / 3].clone()),
            _ => ("indep", d[i / 3].clone()),
        };
        out.push((format!("{i:03}_{name}"), inst));
    }
    out
}
