//! Exact checks of a decomposition against the defining conditions.

use std::collections::BTreeMap;
use std::thread;

use super::grid::SampleGrid;
use super::report::{Check, VerificationReport, Witness};
use crate::algebra::{precedes, sigma_inv, Rational};
use crate::error::Error;
use crate::model::{DecompositionResult, Evaluator, Piece, Point, Trace, Tuple, Ufss};

/// Runs `f` at every point, split over threads with one evaluator each, and
/// returns the first witness in grid order.
pub(crate) fn first_witness<F>(points: &[Vec<Rational>], f: F) -> Option<Witness>
where
    F: Fn(&Evaluator, &[Rational]) -> Option<Witness> + Sync,
{
    let threads = thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(points.len().max(1));
    let chunk = points.len().div_ceil(threads).max(1);
    let results: Vec<Option<Witness>> = thread::scope(|s| {
        let handles: Vec<_> = points
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                s.spawn(move || {
                    let ev = Evaluator::new();
                    part.iter().find_map(|a| f(&ev, a))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("verification worker panicked")).collect()
    });
    results.into_iter().flatten().next()
}

fn error_witness(a: &[Rational], e: &Error) -> Witness {
    let b = match e {
        Error::Degenerate { b, .. } => Some(b.clone()),
        _ => None,
    };
    Witness { a: a.to_vec(), b, note: format!("evaluation failed: {e}"), ..Witness::default() }
}

/// Union of all piece fibers at `a`, with the first source of each root.
fn pieces_cover(
    ev: &Evaluator,
    pieces: &[&Piece],
    a: &[Rational],
) -> Result<BTreeMap<Tuple, (usize, Point)>, Error> {
    let mut out = BTreeMap::new();
    for (i, p) in pieces.iter().enumerate() {
        for b in ev.x_fiber(&p.ufss.x, a)?.iter() {
            for t in ev.fiber(&p.ufss.z, b, a)?.iter() {
                out.entry(t.clone()).or_insert_with(|| (i, b.clone()));
            }
        }
    }
    Ok(out)
}

/// Fibers of `u` at `a` keyed by root, each with its least source.
pub(crate) fn original_cover(ev: &Evaluator, u: &Ufss, a: &[Rational]) -> Result<BTreeMap<Tuple, Point>, Error> {
    let mut out = BTreeMap::new();
    for b in ev.x_fiber(&u.x, a)?.iter() {
        for t in ev.fiber(&u.z, b, a)?.iter() {
            out.entry(t.clone()).or_insert_with(|| b.clone());
        }
    }
    Ok(out)
}

/// Both sides cover exactly the same roots at every grid point.
pub fn verify_union(original: &Ufss, result: &DecompositionResult, grid: &SampleGrid) -> VerificationReport {
    let points = grid.points(original.k);
    let pieces: Vec<&Piece> = result.all_pieces().collect();
    let w = first_witness(&points, |ev, a| {
        let lhs = match original_cover(ev, original, a) {
            Ok(v) => v,
            Err(e) => return Some(error_witness(a, &e)),
        };
        let rhs = match pieces_cover(ev, &pieces, a) {
            Ok(v) => v,
            Err(e) => return Some(error_witness(a, &e)),
        };
        if let Some((t, b)) = lhs.iter().find(|(t, _)| !rhs.contains_key(*t)) {
            return Some(Witness {
                a: a.to_vec(),
                b: Some(b.clone()),
                root: Some(t.clone()),
                note: format!("root {t:?} of b = {b:?} is missing from the pieces"),
                ..Witness::default()
            });
        }
        if let Some((t, (i, b))) = rhs.iter().find(|(t, _)| !lhs.contains_key(*t)) {
            return Some(Witness {
                piece: Some(*i),
                a: a.to_vec(),
                b: Some(b.clone()),
                root: Some(t.clone()),
                note: format!("piece {i} produces the foreign root {t:?}"),
                ..Witness::default()
            });
        }
        None
    });
    VerificationReport::single(match w {
        None => Check::pass("union", points.len()),
        Some(w) => Check::fail("union", points.len(), w),
    })
}

/// Distinct members of one piece never share a root.
pub fn verify_injectivity(result: &DecompositionResult, grid: &SampleGrid) -> VerificationReport {
    let pieces: Vec<&Piece> = result.all_pieces().collect();
    let mut samples = 0;
    for (i, p) in pieces.iter().enumerate() {
        let points = grid.points(p.ufss.k);
        samples += points.len();
        let w = first_witness(&points, |ev, a| {
            let xs = match ev.x_fiber(&p.ufss.x, a) {
                Ok(v) => v,
                Err(e) => return Some(Witness { piece: Some(i), ..error_witness(a, &e) }),
            };
            let mut owner: BTreeMap<Tuple, Point> = BTreeMap::new();
            for b in xs.iter() {
                let fib = match ev.fiber(&p.ufss.z, b, a) {
                    Ok(v) => v,
                    Err(e) => return Some(Witness { piece: Some(i), ..error_witness(a, &e) }),
                };
                for t in fib.iter() {
                    if let Some(c) = owner.insert(t.clone(), b.clone()) {
                        return Some(Witness {
                            piece: Some(i),
                            a: a.to_vec(),
                            b: Some(c),
                            c: Some(b.clone()),
                            root: Some(t.clone()),
                            note: format!("piece {i}: two members share the root {t:?}"),
                        });
                    }
                }
            }
            None
        });
        if let Some(w) = w {
            return VerificationReport::single(Check::fail("injectivity", samples, w));
        }
    }
    VerificationReport::single(Check::pass("injectivity", samples))
}

/// Every X fiber stays inside the piece's small set, and every small set
/// derives from base sets by images, products and subsets.
pub fn verify_small_containment(result: &DecompositionResult, grid: &SampleGrid) -> VerificationReport {
    let pieces: Vec<&Piece> = result.all_pieces().collect();
    let mut samples = 0;
    for (i, p) in pieces.iter().enumerate() {
        if let Err(msg) = p.ufss.x.structural_check() {
            let w = Witness { piece: Some(i), note: format!("piece {i}: {msg}"), ..Witness::default() };
            return VerificationReport::single(Check::fail("small-containment", samples, w));
        }
        if !p.ufss.s.derivation_is_sound() {
            let w = Witness { piece: Some(i), note: format!("piece {i}: unsound derivation"), ..Witness::default() };
            return VerificationReport::single(Check::fail("small-containment", samples, w));
        }
        let points = grid.points(p.ufss.k);
        samples += points.len();
        let w = first_witness(&points, |ev, a| {
            let xs = match ev.x_fiber(&p.ufss.x, a) {
                Ok(v) => v,
                Err(e) => return Some(Witness { piece: Some(i), ..error_witness(a, &e) }),
            };
            xs.iter().find(|b| !p.ufss.s.contains(b)).map(|b| Witness {
                piece: Some(i),
                a: a.to_vec(),
                b: Some(b.clone()),
                note: format!("piece {i}: {b:?} is not in its small set"),
                ..Witness::default()
            })
        });
        if let Some(w) = w {
            return VerificationReport::single(Check::fail("small-containment", samples, w));
        }
    }
    VerificationReport::single(Check::pass("small-containment", samples))
}

/// Every recursion step lowers `(k, alpha)` and depth stays within the
/// position of the starting index.
pub fn verify_termination_trace(trace: &Trace) -> VerificationReport {
    let n = trace.nodes.len();
    if let Some(v) = trace.descent_violations.first() {
        let w = Witness { note: format!("collision order {:?} is not below {:?}", v.order, v.alpha), ..Witness::default() };
        return VerificationReport::single(Check::fail("termination", n, w));
    }
    for node in &trace.nodes {
        if let Some(pid) = node.parent {
            let parent = &trace.nodes[pid];
            let lower = node.k < parent.k
                || (node.k == parent.k && precedes(&node.alpha, &parent.alpha).unwrap_or(false));
            if !lower {
                let w = Witness {
                    note: format!(
                        "node {} ({}, {:?}) does not descend from node {} ({}, {:?})",
                        node.id, node.k, node.alpha, pid, parent.k, parent.alpha
                    ),
                    ..Witness::default()
                };
                return VerificationReport::single(Check::fail("termination", n, w));
            }
        }
        let root = &trace.nodes[trace.root_of(node.id)];
        let bound = sigma_inv(&root.alpha) + root.k as u64 + 1;
        if node.depth as u64 > bound {
            let w = Witness {
                note: format!("node {} has depth {} above the bound {bound}", node.id, node.depth),
                ..Witness::default()
            };
            return VerificationReport::single(Check::fail("termination", n, w));
        }
    }
    VerificationReport::single(Check::pass("termination", n))
}

/// Union, injectivity, containment and termination together.
pub fn verify_all(original: &Ufss, result: &DecompositionResult, grid: &SampleGrid) -> VerificationReport {
    verify_union(original, result, grid)
        .merge(verify_injectivity(result, grid))
        .merge(verify_small_containment(result, grid))
        .merge(verify_termination_trace(&result.trace))
}
