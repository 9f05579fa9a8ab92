//! Checks of weak definable choice: the pieces cover `h(S ∩ Z_a, a)`, each
//! `h_i(-, a)` is injective on `X_{i,a}`, and `X_{i,a} ⊆ Y_i`.

use std::collections::BTreeMap;

use super::checks::first_witness;
use super::grid::SampleGrid;
use super::report::{Check, VerificationReport, Witness};
use crate::model::{ChoiceDecomposition, ChoiceInstance, Point, Tuple};

pub fn verify_choice(inst: &ChoiceInstance, dec: &ChoiceDecomposition, grid: &SampleGrid) -> VerificationReport {
    let points = grid.points(inst.h.k);
    let cover = first_witness(&points, |ev, a| {
        let fail = |note: String| Some(Witness { a: a.to_vec(), note, ..Witness::default() });
        let want = match inst.image(ev, a) {
            Ok(v) => v,
            Err(e) => return fail(format!("image failed: {e}")),
        };
        let got = match dec.cover(ev, a) {
            Ok(v) => v,
            Err(e) => return fail(format!("cover failed: {e}")),
        };
        (want != got).then(|| {
            let root = want.iter().find(|t| !got.contains(t)).or_else(|| got.iter().find(|t| !want.contains(t)));
            Witness { a: a.to_vec(), root: root.cloned(), note: "cover differs from h(S ∩ Z_a, a)".into(), ..Witness::default() }
        })
    });
    let inj = first_witness(&points, |ev, a| {
        for (i, p) in dec.pieces.iter().enumerate() {
            let xs = match ev.x_fiber(&p.x, a) {
                Ok(v) => v,
                Err(e) => return Some(Witness { piece: Some(i), a: a.to_vec(), note: e.to_string(), ..Witness::default() }),
            };
            let mut seen: BTreeMap<Tuple, Point> = BTreeMap::new();
            for b in xs.iter() {
                if !p.y.contains(b) {
                    return Some(Witness {
                        piece: Some(i),
                        a: a.to_vec(),
                        b: Some(b.clone()),
                        note: format!("piece {i}: member outside Y"),
                        ..Witness::default()
                    });
                }
                let v = match p.h.eval(ev, b, a) {
                    Ok(Some(v)) => v,
                    Ok(None) => {
                        return Some(Witness {
                            piece: Some(i),
                            a: a.to_vec(),
                            b: Some(b.clone()),
                            note: format!("piece {i}: h undefined on a member"),
                            ..Witness::default()
                        })
                    }
                    Err(e) => return Some(Witness { piece: Some(i), a: a.to_vec(), note: e.to_string(), ..Witness::default() }),
                };
                if let Some(c) = seen.insert(v.clone(), b.clone()) {
                    return Some(Witness {
                        piece: Some(i),
                        a: a.to_vec(),
                        b: Some(c),
                        c: Some(b.clone()),
                        root: Some(v),
                        note: format!("piece {i}: h is not injective"),
                    });
                }
            }
        }
        None
    });
    let n = points.len();
    let c1 = cover.map_or_else(|| Check::pass("choice-cover", n), |w| Check::fail("choice-cover", n, w));
    let c2 = inj.map_or_else(|| Check::pass("choice-injectivity", n), |w| Check::fail("choice-injectivity", n, w));
    VerificationReport { checks: vec![c1, c2] }
}
