//! Acceptance criteria, one test each. Every test prints a single
//! `criterion N: PASS|FAIL` line and fails when the criterion is not met.

use std::sync::Arc;
use std::time::{Duration, Instant};

use ufss::algebra::{parse_qpoly, precedes, sigma, sigma_inv, OrderIndex, ParamPoly, RatFunc, Rational};
use ufss::engines::calculus::{append_param, append_param_decomposition, push_graph, push_graph_decomposition};
use ufss::engines::linear::decompose_linear;
use ufss::engines::independent::{decompose_independent, IndependentOptions};
use ufss::gen;
use ufss::model::{
    DecompositionResult, DefSet, Evaluator, Piece, SmallSet, Tag, Trace, Ufss, XDesc, ZDesc,
};
use ufss::pipeline::{self, decompose_ufss, parse_instance, Instance};
use ufss::verify::{
    verify_against_brute, verify_all, verify_choice, verify_injectivity, verify_small_containment,
    verify_termination_trace, verify_union, SampleGrid, Status,
};

fn report(n: u32, ok: bool, detail: String) {
    println!("criterion {n}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

/// Indices of `k` parameters ordered by an independent key: total degree,
/// then the tuple `(i_1, ..., i_k, r)`.
fn enumerate_by_key(k: usize, max_degree: u32) -> Vec<OrderIndex> {
    let mut all: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..=k {
        all = all.into_iter().flat_map(|v| (0..=max_degree).map(move |e| [v.clone(), vec![e]].concat())).collect();
    }
    all.retain(|v| v.iter().sum::<u32>() <= max_degree);
    all.sort_by_key(|v| (v.iter().sum::<u32>(), v.clone()));
    all.iter().map(|v| OrderIndex::from_exponent_vector(v)).collect()
}

#[test]
fn criterion_1_order_machinery() {
    let start = Instant::now();
    let mut problems = Vec::new();
    for (k, deg) in [(1usize, 45u32), (2, 18), (3, 11)] {
        let oracle = enumerate_by_key(k, deg);
        assert!(oracle.len() >= 1000);
        let seq: Vec<OrderIndex> = (0..1000u64).map(|n| sigma(n, k)).collect();
        if seq[..] != oracle[..1000] {
            problems.push(format!("sigma disagrees with the key enumeration for k = {k}"));
        }
        for (n, a) in seq.iter().enumerate() {
            if sigma_inv(a) != n as u64 {
                problems.push(format!("sigma_inv(sigma({n})) != {n} for k = {k}"));
            }
        }
        for i in 0..seq.len() {
            if precedes(&seq[i], &seq[i]).unwrap() {
                problems.push(format!("irreflexivity fails at {i}, k = {k}"));
            }
            for j in i + 1..seq.len() {
                let (ij, ji) = (precedes(&seq[i], &seq[j]).unwrap(), precedes(&seq[j], &seq[i]).unwrap());
                if !ij || ji {
                    problems.push(format!("order fails on ({i}, {j}), k = {k}"));
                }
            }
        }
    }
    let t = start.elapsed();
    report(1, problems.is_empty() && t < Duration::from_secs(1), format!("{:?}, {} problem(s) {:?}", t, problems.len(), problems.first()));
}

#[test]
fn criterion_2_linear_engine() {
    let start = Instant::now();
    let corpus = gen::linear_corpus(50, 2);
    let mut failures = Vec::new();
    let mut min_points = usize::MAX;
    for (i, inst) in corpus.iter().enumerate() {
        let Instance::Linear { map, s } = inst else { unreachable!() };
        let grid = SampleGrid::default_for(map.k, i as u64);
        min_points = min_points.min(grid.points(map.k).len());
        let choice = map.to_choice_instance(s.clone());
        let dec = decompose_linear(map, s).unwrap();
        let out = pipeline::decompose(inst).unwrap();
        let rep = verify_choice(&choice, &dec, &grid).merge(pipeline::verify(inst, &out.result, &grid).unwrap());
        if !rep.passed() {
            failures.push((i, rep.first_failure().cloned()));
        }
    }
    let t = start.elapsed();
    report(
        2,
        failures.is_empty() && min_points >= 100 && t < Duration::from_secs(30),
        format!("50 instances, >= {min_points} points each, {} failure(s) {:?}, {t:?}", failures.len(), failures.first()),
    );
}

#[test]
fn criterion_3_independent_engine() {
    let start = Instant::now();
    let corpus = gen::indep_corpus(30, 3);
    let mut failures = Vec::new();
    let mut min_points = usize::MAX;
    for (i, inst) in corpus.iter().enumerate() {
        let Instance::Indep { instance, cells, probe, class_cap } = inst else { unreachable!() };
        assert!(cells.iter().filter(|c| c.open).all(|c| c.strongly_regular));
        let grid = SampleGrid::default_for(instance.h.k, i as u64);
        min_points = min_points.min(grid.points(instance.h.k).len());
        let opts = IndependentOptions { class_cap: *class_cap, probe: probe.clone() };
        let dec = decompose_independent(cells, instance, &opts).unwrap();
        let out = pipeline::decompose(inst).unwrap();
        let rep = verify_choice(instance, &dec, &grid).merge(pipeline::verify(inst, &out.result, &grid).unwrap());
        if !rep.passed() {
            failures.push((i, rep.first_failure().cloned()));
        }
    }
    let t = start.elapsed();
    report(
        3,
        failures.is_empty() && min_points >= 100 && t < Duration::from_secs(30),
        format!("30 instances, >= {min_points} points each, {} failure(s) {:?}, {t:?}", failures.len(), failures.first()),
    );
}

struct RcfRun {
    u: Ufss,
    result: DecompositionResult,
    grid: SampleGrid,
    elapsed: Duration,
}

fn rcf_runs() -> Vec<RcfRun> {
    gen::rcf_corpus(24, 4)
        .into_iter()
        .enumerate()
        .map(|(i, inst)| {
            let start = Instant::now();
            let Instance::Rcf { ufss } = inst else { unreachable!() };
            let result = decompose_ufss(&Arc::new(ufss.clone()), &mut Vec::new()).unwrap();
            let grid = SampleGrid::default_for(ufss.k, i as u64);
            RcfRun { u: ufss, result, grid, elapsed: start.elapsed() }
        })
        .collect()
}

#[test]
fn criterion_4_rcf_engine() {
    let start = Instant::now();
    let runs = rcf_runs();
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    let (mut collisions, mut v2, mut min_points) = (0, 0, usize::MAX);
    for (i, run) in runs.iter().enumerate() {
        let t = Instant::now();
        min_points = min_points.min(run.grid.points(run.u.k).len());
        let rep = verify_union(&run.u, &run.result, &run.grid)
            .merge(verify_injectivity(&run.result, &run.grid))
            .merge(verify_termination_trace(&run.result.trace));
        slowest = slowest.max(run.elapsed + t.elapsed());
        if !rep.passed() {
            failures.push((i, rep.first_failure().cloned()));
        }
        if run.result.trace.pairs_checked > 0 {
            collisions += 1;
        }
        if run.result.all_pieces().any(|p| p.has(Tag::V2Subst)) {
            v2 += 1;
        }
    }
    let t = start.elapsed();
    report(
        4,
        failures.is_empty()
            && runs.len() >= 20
            && collisions >= 5
            && v2 >= 2
            && min_points >= 100
            && slowest < Duration::from_secs(5)
            && t < Duration::from_secs(300),
        format!(
            "{} instances, {collisions} with collisions, {v2} via V2, >= {min_points} points, slowest {slowest:?}, total {t:?}, {} failure(s) {:?}",
            runs.len(),
            failures.len(),
            failures.first()
        ),
    );
}

#[test]
fn criterion_5_oracle_equivalence() {
    let runs = rcf_runs();
    let failures: Vec<_> = runs
        .iter()
        .enumerate()
        .filter_map(|(i, r)| {
            let rep = verify_against_brute(&r.u, &r.result, &r.grid);
            (!rep.passed()).then(|| (i, rep.first_failure().cloned()))
        })
        .collect();
    report(5, failures.is_empty(), format!("{} instances, {} mismatch(es) {:?}", runs.len(), failures.len(), failures.first()));
}

#[test]
fn criterion_6_descent_invariant() {
    let runs = rcf_runs();
    let (mut steps, mut bad, mut pairs, mut violations) = (0, 0, 0, 0);
    for r in &runs {
        let tr = &r.result.trace;
        pairs += tr.pairs_checked;
        violations += tr.descent_violations.len();
        for node in &tr.nodes {
            let Some(p) = node.parent else { continue };
            let parent = &tr.nodes[p];
            steps += 1;
            let lower = node.k < parent.k || (node.k == parent.k && precedes(&node.alpha, &parent.alpha).unwrap());
            if !lower {
                bad += 1;
            }
        }
    }
    report(
        6,
        bad == 0 && violations == 0 && steps > 0 && pairs > 0,
        format!("{steps} steps, {bad} non-decreasing; {pairs} collision pairs, {violations} without order descent"),
    );
}

/// Two output coordinates over `(x, y)`, with couplings and strict
/// conditions in `(x, y, z1, z2)`.
fn two_coordinate(p1: &str, p2: &str, couplings: &[&str], strict: &[&str]) -> Ufss {
    let one = |t: &str, z: &str| ParamPoly::from_joint(1, 1, &parse_qpoly(t, &["x", "y", z]).unwrap());
    let all = ["x", "y", "z1", "z2"];
    let d = DefSet {
        m: 1,
        k: 1,
        l: 2,
        p: vec![one(p1, "z1"), one(p2, "z2")],
        couplings: couplings.iter().map(|c| parse_qpoly(c, &all).unwrap()).collect(),
        strict: strict.iter().map(|c| parse_qpoly(c, &all).unwrap()).collect(),
        ambient: vec![],
        guards: vec![],
        nondegenerate: false,
    };
    d.validate().unwrap();
    let s = Arc::new(SmallSet::base(1, vec![vec![q(-1)], vec![q(1)], vec![q(2)]]));
    Ufss::new(ZDesc::set(d), XDesc::explicit(1, s), false)
}

#[test]
fn criterion_7_calculus_transforms() {
    let cases = [
        two_coordinate("z1 - x*y", "z2^2 - x^2", &[], &[]),
        two_coordinate("z1^2 - y", "z2 - x", &[], &["z1"]),
        two_coordinate("z1 - y", "z2 - x*y", &["z2 - x*z1"], &[]),
        two_coordinate("z1^2 - x^2", "z2^2 - y^2", &["z1 - z2"], &[]),
        two_coordinate("z1 - x", "z2^2 - x*y", &[], &["z2"]),
        two_coordinate("z1^2 + x*y*z1 - 1", "z2 - y", &[], &[]),
        two_coordinate("z1 - x - y", "z2 - x + y", &[], &["z1 - z2"]),
        two_coordinate("z1^3 - z1 - x*y", "z2 - x", &[], &[]),
        two_coordinate("z1 - x*y^2", "z2^2 - x*y", &[], &["z2 + 1"]),
        two_coordinate("z1^2 - x^2*y", "z2 + x*y - 1", &["z1*z2 - z1 + x*y*z1"], &[]),
    ];
    let grid = SampleGrid::parse("-2:2:1/4", 0).unwrap();
    let mut failures = Vec::new();
    let (mut products, mut restricted) = (0, 0);
    for (i, u) in cases.iter().enumerate() {
        let dec = decompose_ufss(&Arc::new(u.clone()), &mut Vec::new()).unwrap();
        products += dec.all_pieces().all(|p| p.has(Tag::Product)) as usize;
        restricted += dec.all_pieces().all(|p| p.has(Tag::Restrict)) as usize;
        let rep = verify_all(u, &dec, &grid).merge(verify_against_brute(u, &dec, &grid));
        if !rep.passed() {
            failures.push(format!("l = 2 case {i}: {:?}", rep.first_failure()));
        }
    }
    // graph and parameter extensions, then projection back
    let ev = Evaluator::new();
    let bases: Vec<Ufss> = gen::rcf_corpus(10, 5)
        .into_iter()
        .map(|i| match i {
            Instance::Rcf { ufss } => ufss,
            _ => unreachable!(),
        })
        .collect();
    let mut round_trips = 0;
    for (i, u) in bases.iter().enumerate() {
        let nv = u.m;
        let f = vec![RatFunc::from_poly(&ufss::algebra::QPoly::var(nv, 0).pow(2) + &ufss::algebra::QPoly::one(nv))];
        let pushed = push_graph(u, f.clone()).unwrap();
        let g = vec![RatFunc::from_poly(&ufss::algebra::QPoly::var(nv + u.k, 0) + &ufss::algebra::QPoly::var(nv + u.k, nv))];
        let appended = append_param(u, g.clone()).unwrap();
        let mut ok = true;
        for a in grid.points(u.k) {
            let xs = ev.x_fiber(&u.x, &a).unwrap();
            let pushed_xs = ev.x_fiber(&pushed.x, &a).unwrap();
            let projected: Vec<_> = pushed_xs.iter().map(|b| b[..nv].to_vec()).collect();
            ok &= *projected == **xs;
            for b in xs.iter() {
                let fiber = ev.fiber(&u.z, b, &a).unwrap();
                let fb: Vec<Rational> = f.iter().map(|h| h.eval(b).unwrap()).collect();
                ok &= *ev.fiber(&pushed.z, &[b.clone(), fb].concat(), &a).unwrap() == *fiber;
                let point: Vec<Rational> = b.iter().chain(&a).cloned().collect();
                let e = g[0].eval(&point).unwrap();
                let a_on = [a.clone(), vec![e.clone()]].concat();
                let a_off = [a.clone(), vec![&e + &q(1)]].concat();
                ok &= *ev.fiber(&appended.z, b, &a_on).unwrap() == *fiber;
                ok &= ev.fiber(&appended.z, b, &a_off).unwrap().is_empty();
                ok &= ev.x_fiber(&appended.x, &a_on).unwrap().contains(b);
                ok &= !ev.x_fiber(&appended.x, &a_off).unwrap().contains(b);
            }
        }
        // decompositions carry over
        let dec = decompose_ufss(&Arc::new(u.clone()), &mut Vec::new()).unwrap();
        let lifted = Arc::new(appended.clone());
        let via_param = append_param_decomposition(&lifted, dec.clone(), 1);
        let via_graph = push_graph_decomposition(dec);
        let small = SampleGrid::parse("-1:1:1/2", 0).unwrap();
        ok &= verify_union(&pushed, &via_graph, &grid).passed();
        ok &= verify_union(&appended, &via_param, &small).merge(verify_injectivity(&via_param, &small)).passed();
        if ok {
            round_trips += 1;
        } else {
            failures.push(format!("round trip {i}"));
        }
    }
    report(
        7,
        failures.is_empty() && products == 10 && restricted == 10 && round_trips == 10,
        format!("10 two-coordinate cases ({products} via products, {restricted} restricted), {round_trips}/10 round trips, failures {failures:?}"),
    );
}

fn zxy() -> Ufss {
    let p = parse_qpoly("z - x*y", &["x", "y", "z"]).unwrap();
    let s = Arc::new(SmallSet::base(1, vec![vec![q(1)], vec![q(2)]]));
    Ufss::new(ZDesc::set(DefSet::equation(ParamPoly::from_joint(1, 1, &p))), XDesc::explicit(1, s), false)
}

#[test]
fn criterion_8_negative_controls() {
    let ev = Evaluator::new();
    let u = zxy();
    let grid = SampleGrid::parse("-2:2:1/2", 0).unwrap();
    let dec = decompose_ufss(&Arc::new(u.clone()), &mut Vec::new()).unwrap();
    let mut confirmed = Vec::new();

    // a missing piece loses a root of the original
    let missing = DecompositionResult { pieces: dec.pieces[..1].to_vec(), ..Default::default() };
    let rep = verify_union(&u, &missing, &grid);
    let w = rep.checks[0].witness.clone();
    confirmed.push(rep.checks[0].status == Status::Fail && w.as_ref().is_some_and(|w| {
        let root = w.root.clone().unwrap();
        let in_original = ev.fiber(&u.z, w.b.as_ref().unwrap(), &w.a).unwrap().contains(&root);
        let in_pieces = missing.all_pieces().any(|p| {
            ev.x_fiber(&p.ufss.x, &w.a).unwrap().iter().any(|b| ev.fiber(&p.ufss.z, b, &w.a).unwrap().contains(&root))
        });
        in_original && !in_pieces
    }));

    // both members in one piece collide at a = 0
    let merged = DecompositionResult { pieces: vec![Piece::new(u.z.clone(), u.x.clone(), Tag::Linear)], ..Default::default() };
    let rep = verify_injectivity(&merged, &grid);
    let w = rep.checks[0].witness.clone();
    confirmed.push(rep.checks[0].status == Status::Fail && w.as_ref().is_some_and(|w| {
        let (b, c, root) = (w.b.clone().unwrap(), w.c.clone().unwrap(), w.root.clone().unwrap());
        b != c && ev.fiber(&u.z, &b, &w.a).unwrap().contains(&root) && ev.fiber(&u.z, &c, &w.a).unwrap().contains(&root)
    }));

    // a member outside the declared small set
    let wider = Arc::new(SmallSet::base(1, vec![vec![q(1)], vec![q(2)], vec![q(99)]]));
    let foreign = Ufss { x: XDesc::explicit(1, wider), ..u.clone() };
    let bad = DecompositionResult { pieces: vec![Piece::new(foreign.z.clone(), foreign.x.clone(), Tag::Linear)], ..Default::default() };
    let bad = DecompositionResult { pieces: vec![Piece { ufss: Ufss { s: u.s.clone(), ..bad.pieces[0].ufss.clone() }, provenance: vec![] }], ..bad };
    let rep = verify_small_containment(&bad, &grid);
    let w = rep.checks[0].witness.clone();
    confirmed.push(rep.checks[0].status == Status::Fail && w.as_ref().is_some_and(|w| match &w.b {
        Some(b) => !u.s.contains(b) && ev.x_fiber(&bad.pieces[0].ufss.x, &w.a).unwrap().contains(b),
        None => false,
    }));

    // a step that does not lower (k, alpha)
    let mut trace = Trace::default();
    let root = trace.push(None, "ROOT", 1, OrderIndex::new(vec![0], 1), 2);
    trace.push(Some(root), "V1-DESCENT", 1, OrderIndex::new(vec![1], 0), 2);
    let rep = verify_termination_trace(&trace);
    confirmed.push(
        rep.checks[0].status == Status::Fail
            && !precedes(&trace.nodes[1].alpha, &trace.nodes[0].alpha).unwrap()
            && rep.checks[0].witness.is_some(),
    );

    let n = confirmed.iter().filter(|c| **c).count();
    report(8, n == 4, format!("{n}/4 mutants rejected with a confirmed witness: {confirmed:?}"));
}

#[test]
fn criterion_9_determinism_and_serialization() {
    let mut problems = Vec::new();
    for inst in gen::rcf_corpus(6, 9).iter().chain(&gen::linear_corpus(3, 9)).chain(&gen::indep_corpus(3, 9)) {
        let a = pipeline::decompose(inst).unwrap();
        let b = pipeline::decompose(inst).unwrap();
        let (ja, jb) = (serde_json::to_string(&a.result).unwrap(), serde_json::to_string(&b.result).unwrap());
        if ja != jb {
            problems.push("decomposition bytes differ".to_string());
        }
        let k = inst.original().unwrap().k;
        let grid = SampleGrid::default_for(k, 11).with_random(5);
        let ra = serde_json::to_string(&pipeline::verify(inst, &a.result, &grid).unwrap()).unwrap();
        let rb = serde_json::to_string(&pipeline::verify(inst, &b.result, &grid).unwrap()).unwrap();
        if ra != rb {
            problems.push("report bytes differ".to_string());
        }
        let back = pipeline::parse_decomposition(&ja).unwrap();
        if serde_json::to_string(&back).unwrap() != ja {
            problems.push("decomposition does not round-trip".to_string());
        }
    }
    let fuzz = gen::corpus(200, 12345);
    let again = gen::corpus(200, 12345);
    let mut identical = 0;
    for ((name, inst), (_, twin)) in fuzz.iter().zip(&again) {
        let text = inst.to_json();
        if text != twin.to_json() {
            problems.push(format!("{name}: generator is not deterministic"));
        }
        match parse_instance(&text) {
            Ok(back) if back == *inst && back.to_json() == text => identical += 1,
            Ok(_) => problems.push(format!("{name}: parse/serialize changed the instance")),
            Err(e) => problems.push(format!("{name}: {e}")),
        }
    }
    report(9, problems.is_empty() && identical == 200, format!("{identical}/200 round trips, problems {:?}", problems.first()));
}
