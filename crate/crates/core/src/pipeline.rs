//! Instance files and the fixed reduction order: strict conditions are
//! stripped and restored by restriction, several output coordinates are
//! reduced to one by products, and only then is the engine run.

use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::algebra::Rational;
use crate::engines::calculus::{choice_to_ufss, reduce_l_to_1, restrict_sub};
use crate::engines::independent::{independent_result, IndependentOptions, RegularCell};
use crate::engines::linear::{linear_result, AffineMap};
use crate::engines::rcf::rcf_decompose;
use crate::error::{Error, Result};
use crate::model::{ChoiceInstance, DecompositionResult, SmallSet, Ufss, ZDesc};
use crate::verify::{verify_against_brute, verify_all, SampleGrid, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Rcf,
    Linear,
    Indep,
}

fn default_cap() -> usize {
    IndependentOptions::default().class_cap
}

/// Contents of an instance file, tagged by `"case"`. A bare family without
/// the tag is read as an `rcf` instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum Instance {
    Rcf {
        ufss: Ufss,
    },
    Linear {
        map: AffineMap,
        #[serde(rename = "S")]
        s: Arc<SmallSet>,
    },
    Indep {
        instance: ChoiceInstance,
        cells: Vec<RegularCell>,
        #[serde(default)]
        probe: Vec<Vec<Rational>>,
        #[serde(default = "default_cap")]
        class_cap: usize,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RcfBody {
    #[serde(rename = "case")]
    _case: String,
    ufss: Ufss,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LinearBody {
    #[serde(rename = "case")]
    _case: String,
    map: AffineMap,
    #[serde(rename = "S")]
    s: Arc<SmallSet>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IndepBody {
    #[serde(rename = "case")]
    _case: String,
    instance: ChoiceInstance,
    cells: Vec<RegularCell>,
    #[serde(default)]
    probe: Vec<Vec<Rational>>,
    #[serde(default = "default_cap")]
    class_cap: usize,
}

fn located<T: DeserializeOwned>(v: &serde_json::Value, prefix: &str) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let mut pointer = prefix.to_string();
        for seg in e.path().iter() {
            use serde_path_to_error::Segment;
            match seg {
                Segment::Seq { index } => pointer.push_str(&format!("/{index}")),
                Segment::Map { key } => pointer.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
                Segment::Enum { variant } => pointer.push_str(&format!("/{variant}")),
                Segment::Unknown => pointer.push_str("/?"),
            }
        }
        Error::Parse { pointer, message: e.into_inner().to_string() }
    })
}

impl Instance {
    pub fn case(&self) -> Case {
        match self {
            Instance::Rcf { .. } => Case::Rcf,
            Instance::Linear { .. } => Case::Linear,
            Instance::Indep { .. } => Case::Indep,
        }
    }

    /// The family whose union every decomposition must reproduce.
    pub fn original(&self) -> Result<Ufss> {
        match self {
            Instance::Rcf { ufss } => Ok(ufss.clone()),
            Instance::Linear { map, s } => choice_to_ufss(&map.to_choice_instance(s.clone())),
            Instance::Indep { instance, .. } => choice_to_ufss(instance),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Instance::Rcf { ufss } => {
                ufss.check_arity()?;
                ufss.x.structural_check().map_err(Error::Contract)
            }
            Instance::Linear { map, s } => {
                map.validate()?;
                if s.dim != map.n {
                    return Err(Error::Arity(format!("S has dimension {}, map expects {}", s.dim, map.n)));
                }
                Ok(())
            }
            Instance::Indep { instance, .. } => instance.h.validate(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instances serialize")
    }
}

/// Parses and validates an instance file.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let v: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse { pointer: String::new(), message: e.to_string() })?;
    let inst = match v.get("case").map(|c| c.as_str()) {
        None => Instance::Rcf { ufss: located(&v, "")? },
        Some(Some("rcf")) => {
            let b: RcfBody = located(&v, "")?;
            Instance::Rcf { ufss: b.ufss }
        }
        Some(Some("linear")) => {
            let b: LinearBody = located(&v, "")?;
            Instance::Linear { map: b.map, s: b.s }
        }
        Some(Some("indep")) => {
            let b: IndepBody = located(&v, "")?;
            Instance::Indep { instance: b.instance, cells: b.cells, probe: b.probe, class_cap: b.class_cap }
        }
        Some(_) => {
            return Err(Error::Parse { pointer: "/case".into(), message: "expected rcf, linear or indep".into() })
        }
    };
    inst.validate()?;
    Ok(inst)
}

/// Parses a decomposition file.
pub fn parse_decomposition(text: &str) -> Result<DecompositionResult> {
    let v: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse { pointer: String::new(), message: e.to_string() })?;
    let dec: DecompositionResult = located(&v, "")?;
    for p in dec.all_pieces() {
        p.ufss.check_arity()?;
    }
    Ok(dec)
}

/// A decomposition and the reductions applied, in order.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub result: DecompositionResult,
    pub steps: Vec<String>,
}

/// Strict conditions, then output coordinates, then the engine.
pub fn decompose_ufss(u: &Arc<Ufss>, steps: &mut Vec<String>) -> Result<DecompositionResult> {
    u.check_arity()?;
    let ZDesc::Set(d) = &*u.z else {
        return Err(Error::NotNormalized("the input family must be a normal-form set".into()));
    };
    if !d.strict.is_empty() {
        steps.push(format!("restrict_sub: strip {} strict condition(s)", d.strict.len()));
        let relaxed = Arc::new(Ufss { z: ZDesc::set(d.without_strict()), injective: false, ..(**u).clone() });
        let inner = decompose_ufss(&relaxed, steps)?;
        return Ok(restrict_sub(u, inner).split_fallback());
    }
    if d.l > 1 {
        steps.push(format!("reduce_l_to_1: {} coordinates", d.l));
        return reduce_l_to_1(u, |ui| {
            let mut inner = Vec::new();
            decompose_ufss(ui, &mut inner)
        });
    }
    steps.push("engine: rcf".into());
    rcf_decompose(u)
}

pub fn decompose(inst: &Instance) -> Result<Outcome> {
    let mut steps = Vec::new();
    let result = match inst {
        Instance::Rcf { ufss } => decompose_ufss(&Arc::new(ufss.clone()), &mut steps)?,
        Instance::Linear { map, s } => {
            steps.push("engine: linear".into());
            linear_result(map, s)?
        }
        Instance::Indep { instance, cells, probe, class_cap } => {
            steps.push("engine: indep".into());
            let opts = IndependentOptions { class_cap: *class_cap, probe: probe.clone() };
            independent_result(cells, instance, &opts)?
        }
    };
    Ok(Outcome { result, steps })
}

/// All checks, including comparison against the enumerative reference.
pub fn verify(inst: &Instance, result: &DecompositionResult, grid: &SampleGrid) -> Result<VerificationReport> {
    let u = inst.original()?;
    Ok(verify_all(&u, result, grid).merge(verify_against_brute(&u, result, grid)))
}
