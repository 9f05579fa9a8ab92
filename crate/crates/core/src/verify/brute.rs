//! Pointwise reference decomposition by plain enumeration.

use serde::{Deserialize, Serialize};

use super::checks::{first_witness, original_cover};
use super::grid::SampleGrid;
use super::report::{Check, VerificationReport, Witness};
use crate::algebra::Rational;
use crate::error::Error;
use crate::model::{DecompositionResult, Evaluator, Piece, Point, Tuple, Ufss};

/// Each root at `a` assigned to its lexicographically least source.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub a: Vec<Rational>,
    pub assignment: Vec<(Tuple, Point)>,
    /// Members whose fiber was infinite.
    pub degenerate: Vec<Point>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BruteForce {
    pub samples: Vec<Sample>,
}

fn sample(ev: &Evaluator, u: &Ufss, a: &[Rational]) -> Result<Sample, Error> {
    let mut degenerate = Vec::new();
    let mut assignment: Vec<(Tuple, Point)> = Vec::new();
    for b in ev.x_fiber(&u.x, a)?.iter() {
        match ev.fiber(&u.z, b, a) {
            Ok(fib) => assignment.extend(fib.iter().map(|t| (t.clone(), b.clone()))),
            Err(Error::Degenerate { .. }) => degenerate.push(b.clone()),
            Err(e) => return Err(e),
        }
    }
    // members come in increasing order, so a stable sort keeps the least one first
    assignment.sort_by(|x, y| x.0.cmp(&y.0));
    assignment.dedup_by(|x, y| x.0 == y.0);
    Ok(Sample { a: a.to_vec(), assignment, degenerate })
}

pub fn brute_force_decompose(u: &Ufss, grid: &SampleGrid) -> Result<BruteForce, Error> {
    let ev = Evaluator::new();
    let samples = grid.points(u.k).iter().map(|a| sample(&ev, u, a)).collect::<Result<_, _>>()?;
    Ok(BruteForce { samples })
}

/// The pieces cover exactly the reference roots at every sample.
pub fn verify_against_brute(u: &Ufss, result: &DecompositionResult, grid: &SampleGrid) -> VerificationReport {
    let points = grid.points(u.k);
    let pieces: Vec<&Piece> = result.all_pieces().collect();
    let w = first_witness(&points, |ev, a| {
        let reference = match sample(ev, u, a) {
            Ok(s) => s,
            Err(e) => return Some(Witness { a: a.to_vec(), note: format!("reference failed: {e}"), ..Witness::default() }),
        };
        if let Some(b) = reference.degenerate.first() {
            return Some(Witness {
                a: a.to_vec(),
                b: Some(b.clone()),
                note: "degenerate member in the reference".into(),
                ..Witness::default()
            });
        }
        let mut got: Vec<Tuple> = Vec::new();
        for p in &pieces {
            let sub = Ufss { injective: true, ..p.ufss.clone() };
            match original_cover(ev, &sub, a) {
                Ok(c) => got.extend(c.into_keys()),
                Err(e) => return Some(Witness { a: a.to_vec(), note: format!("piece failed: {e}"), ..Witness::default() }),
            }
        }
        got.sort();
        got.dedup();
        let want: Vec<Tuple> = reference.assignment.into_iter().map(|(t, _)| t).collect();
        (got != want).then(|| {
            let root = want.iter().find(|t| !got.contains(t)).or_else(|| got.iter().find(|t| !want.contains(t))).cloned();
            Witness { a: a.to_vec(), root, note: "cover differs from the reference".into(), ..Witness::default() }
        })
    });
    VerificationReport::single(match w {
        None => Check::pass("oracle-equivalence", points.len()),
        Some(w) => Check::fail("oracle-equivalence", points.len(), w),
    })
}
