//! Lexicographic-minimum representatives over regular cells: each value of
//! `h(-, a)` on `S ∩ Z_a` keeps its least source.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::calculus::graph_set;
use crate::algebra::QPoly;
use crate::error::{Error, Result};
use crate::model::{
    ChoiceDecomposition, ChoiceInstance, ChoicePiece, Condition, DecompositionResult, Evaluator, MapDescriptor,
    MapPiece, Piece, Predicate, Relation, Tag, Ufss, XDesc, ZDesc,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Monotonicity {
    Constant,
    StrictInc,
    StrictDec,
}

/// A non-open cell given as the graph `x_coordinate = value(others)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellGraph {
    pub coordinate: usize,
    pub value: QPoly,
}

/// One cell of a decomposition of the domain, supplied as input data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularCell {
    pub conditions: Vec<Condition>,
    pub open: bool,
    pub regular: bool,
    pub strongly_regular: bool,
    /// Behavior of `h` in each coordinate of `(g, a)`; empty when unknown.
    #[serde(default)]
    pub h_regularity: Vec<Monotonicity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<CellGraph>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndependentOptions {
    /// Largest collision class tolerated at a probe point.
    pub class_cap: usize,
    pub probe: Vec<Vec<crate::algebra::Rational>>,
}

impl Default for IndependentOptions {
    fn default() -> Self {
        IndependentOptions { class_cap: 64, probe: vec![] }
    }
}

fn check_cell(cell: &RegularCell, comps: &[QPoly], nvars: usize) -> Result<()> {
    if cell.open && !cell.strongly_regular {
        return Err(Error::Contract("open cells must be strongly regular".into()));
    }
    if cell.strongly_regular && !cell.regular {
        return Err(Error::Contract("strongly regular cell marked not regular".into()));
    }
    if !cell.h_regularity.is_empty() {
        if !cell.regular {
            return Err(Error::Contract("regularity of h is only meaningful on a regular cell".into()));
        }
        if cell.h_regularity.len() != nvars {
            return Err(Error::Arity(format!("{} regularity tags for {nvars} coordinates", cell.h_regularity.len())));
        }
        for (i, m) in cell.h_regularity.iter().enumerate() {
            if *m == Monotonicity::Constant && comps.iter().any(|c| c.involves(i)) {
                return Err(Error::Contract(format!("h is tagged constant in coordinate {i} but depends on it")));
            }
        }
    }
    if cell.conditions.iter().any(|c| c.poly.nvars() != nvars) {
        return Err(Error::Arity("cell conditions must be over (g, a)".into()));
    }
    if let Some(g) = &cell.graph {
        if cell.open {
            return Err(Error::Contract("an open cell is not a graph".into()));
        }
        if g.coordinate >= nvars || g.value.nvars() != nvars || g.value.involves(g.coordinate) {
            return Err(Error::Contract("cell graph must solve one coordinate in terms of the others".into()));
        }
    }
    Ok(())
}

/// `x_c := value`, then drop `x_c`.
fn project(p: &QPoly, g: &CellGraph) -> QPoly {
    p.substitute(g.coordinate, &g.value).remove_var(g.coordinate)
}

struct CellPiece {
    choice: ChoicePiece,
    ufss: Ufss,
}

fn cell_piece(inst: &ChoiceInstance, cell: &RegularCell, domain: &[Condition], comps: &[QPoly]) -> CellPiece {
    let (m, k) = (inst.h.m, inst.h.k);
    let mut conds: Vec<Condition> = inst.domain.clone();
    conds.extend(cell.conditions.iter().cloned());
    conds.extend(domain.iter().cloned());
    let z = ZDesc::set(graph_set(m, k, &[], comps));
    let x = match &cell.graph {
        // a parameter determined by the rest: choose in the reduced family
        // and pin the parameter afterwards
        Some(g) if g.coordinate >= m => {
            let j = g.coordinate - m;
            let rc: Vec<Condition> = conds.iter().map(|c| Condition::new(project(&c.poly, g), c.rel)).collect();
            // the solved parameter rides along as an extra output, so only
            // members over the same full parameter count as colliding
            let mut rcomps: Vec<QPoly> = comps.iter().map(|c| project(c, g)).collect();
            rcomps.push(g.value.remove_var(g.coordinate));
            let rz = ZDesc::set(graph_set(m, k - 1, &[], &rcomps));
            let base = Arc::new(XDesc::Explicit { k: k - 1, s: inst.s.clone(), conditions: rc });
            let reduced = XDesc::filtered(base, Predicate::LexMin { z: rz });
            let pin = Condition::new(&QPoly::var(m + k, g.coordinate) - &g.value, Relation::Eq);
            XDesc::filtered(
                Arc::new(XDesc::DropParam { inner: reduced, param: j }),
                Predicate::Conditions { conditions: vec![pin] },
            )
        }
        _ => {
            let base = Arc::new(XDesc::Explicit { k, s: inst.s.clone(), conditions: conds.clone() });
            XDesc::filtered(base, Predicate::LexMin { z: z.clone() })
        }
    };
    let h = MapDescriptor {
        m,
        k,
        l: comps.len(),
        pieces: vec![MapPiece::Polynomial { domain: conds, components: comps.to_vec() }],
    };
    CellPiece { choice: ChoicePiece { h, x: x.clone(), y: inst.s.clone() }, ufss: Ufss::new(z, x, true) }
}

/// Largest set of members of `S ∩ Z_a` sharing one value, at the probes.
fn check_classes(inst: &ChoiceInstance, opts: &IndependentOptions) -> Result<()> {
    let ev = Evaluator::new();
    for a in opts.probe.iter().filter(|a| a.len() == inst.h.k) {
        let mut values = Vec::new();
        for g in inst.s.points() {
            let p: Vec<_> = g.iter().chain(a).cloned().collect();
            if crate::model::condition::all_hold(&inst.domain, &p) {
                if let Some(v) = inst.h.eval(&ev, g, a)? {
                    values.push(v);
                }
            }
        }
        values.sort();
        let mut run = 0;
        for (i, v) in values.iter().enumerate() {
            run = if i > 0 && values[i - 1] == *v { run + 1 } else { 1 };
            if run > opts.class_cap {
                return Err(Error::Contract(format!("collision class above {} at a = {a:?}", opts.class_cap)));
            }
        }
    }
    Ok(())
}

fn build(cells: &[RegularCell], inst: &ChoiceInstance, opts: &IndependentOptions) -> Result<Vec<CellPiece>> {
    inst.h.validate()?;
    if inst.s.dim != inst.h.m {
        return Err(Error::Arity(format!("S has dimension {}, map expects {}", inst.s.dim, inst.h.m)));
    }
    check_classes(inst, opts)?;
    let nvars = inst.h.m + inst.h.k;
    let mut out = Vec::new();
    for cell in cells {
        for branch in &inst.h.pieces {
            let MapPiece::Polynomial { domain, components } = branch else {
                return Err(Error::Contract("independent cells need polynomial map branches".into()));
            };
            check_cell(cell, components, nvars)?;
            out.push(cell_piece(inst, cell, domain, components));
        }
    }
    Ok(out)
}

/// One lex-min piece per cell and map branch; `Y_i = S`.
pub fn decompose_independent(
    cells: &[RegularCell],
    inst: &ChoiceInstance,
    opts: &IndependentOptions,
) -> Result<ChoiceDecomposition> {
    Ok(ChoiceDecomposition { pieces: build(cells, inst, opts)?.into_iter().map(|p| p.choice).collect() })
}

pub fn independent_result(
    cells: &[RegularCell],
    inst: &ChoiceInstance,
    opts: &IndependentOptions,
) -> Result<DecompositionResult> {
    let pieces = build(cells, inst, opts)?
        .into_iter()
        .map(|p| Piece { ufss: p.ufss, provenance: vec![Tag::LexMin] })
        .collect();
    Ok(DecompositionResult { pieces, ..Default::default() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_qpoly, Rational};
    use crate::model::SmallSet;
    use crate::verify::{verify_all, verify_choice, SampleGrid};
    use crate::engines::calculus::choice_to_ufss;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn open_cell() -> RegularCell {
        RegularCell { conditions: vec![], open: true, regular: true, strongly_regular: true, h_regularity: vec![], graph: None }
    }

    #[test]
    fn colliding_pair_keeps_lex_min() {
        let h = parse_qpoly("y1 + y2 + a", &["y1", "y2", "a"]).unwrap();
        let s = Arc::new(SmallSet::base(2, vec![vec![q(1), q(2)], vec![q(2), q(1)]]));
        let inst = ChoiceInstance { h: MapDescriptor::polynomial(2, 1, vec![h]), s, domain: vec![] };
        let dec = decompose_independent(&[open_cell()], &inst, &IndependentOptions::default()).unwrap();
        let ev = Evaluator::new();
        for a in -2..=2 {
            assert_eq!(*ev.x_fiber(&dec.pieces[0].x, &[q(a)]).unwrap(), vec![vec![q(1), q(2)]]);
        }
        let grid = SampleGrid::parse("-2:2:1/3", 0).unwrap();
        assert!(verify_choice(&inst, &dec, &grid).passed());
        let res = independent_result(&[open_cell()], &inst, &IndependentOptions::default()).unwrap();
        let u = choice_to_ufss(&inst).unwrap();
        let rep = verify_all(&u, &res, &grid);
        assert!(rep.passed(), "{}", rep.summary_table());
    }

    #[test]
    fn parameter_graph_cell_reduces() {
        // the cell a = g, h = g^2 + a, so h = g^2 + g on the cell
        let vars = ["g", "a"];
        let h = parse_qpoly("g^2 + a", &vars).unwrap();
        let pts = [-2, -1, 0, 1, 2].iter().map(|&v| vec![q(v)]).collect();
        let s = Arc::new(SmallSet::base(1, pts));
        let cell = RegularCell {
            conditions: vec![Condition::new(parse_qpoly("a - g", &vars).unwrap(), Relation::Eq)],
            open: false,
            regular: true,
            strongly_regular: false,
            h_regularity: vec![],
            graph: Some(CellGraph { coordinate: 1, value: parse_qpoly("g", &vars).unwrap() }),
        };
        let inst = ChoiceInstance { h: MapDescriptor::polynomial(1, 1, vec![h]), s, domain: cell.conditions.clone() };
        let dec = decompose_independent(&[cell], &inst, &IndependentOptions::default()).unwrap();
        let grid = SampleGrid::parse("-3:3:1/2", 0).unwrap();
        let rep = verify_choice(&inst, &dec, &grid);
        assert!(rep.passed(), "{}", rep.summary_table());
    }

    #[test]
    fn contract_violations() {
        let h = parse_qpoly("g + a", &["g", "a"]).unwrap();
        let s = Arc::new(SmallSet::base(1, vec![vec![q(0)]]));
        let inst = ChoiceInstance { h: MapDescriptor::polynomial(1, 1, vec![h]), s, domain: vec![] };
        let bad = RegularCell { strongly_regular: false, ..open_cell() };
        assert!(matches!(
            decompose_independent(&[bad], &inst, &IndependentOptions::default()),
            Err(Error::Contract(_))
        ));
        let tagged = RegularCell { h_regularity: vec![Monotonicity::Constant, Monotonicity::StrictInc], ..open_cell() };
        assert!(decompose_independent(&[tagged], &inst, &IndependentOptions::default()).is_err());
        let opts = IndependentOptions { class_cap: 0, probe: vec![vec![q(0)]] };
        assert!(decompose_independent(&[open_cell()], &inst, &opts).is_err());
    }
}
