//! Check outcomes with concrete witnesses.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::Rational;
use crate::model::{Point, Tuple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

/// The offending `(a, b, c)` and, where relevant, a root.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub piece: Option<usize>,
    pub a: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<Tuple>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Parameter points (or items) examined.
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Check {
    pub fn pass(name: &str, samples: usize) -> Check {
        Check { name: name.into(), status: Status::Pass, samples, witness: None }
    }

    pub fn fail(name: &str, samples: usize, witness: Witness) -> Check {
        Check { name: name.into(), status: Status::Fail, samples, witness: Some(witness) }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn single(c: Check) -> Self {
        VerificationReport { checks: vec![c] }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn merge(mut self, other: VerificationReport) -> Self {
        self.checks.extend(other.checks);
        self
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.status == Status::Fail)
    }

    pub fn summary_table(&self) -> String {
        let w = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        let mut s = String::new();
        let _ = writeln!(s, "{:<w$}  {:<6}  {:>8}  witness", "check", "status", "samples");
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            let wit = c.witness.as_ref().map(|x| x.note.clone()).unwrap_or_default();
            let _ = writeln!(s, "{:<w$}  {:<6}  {:>8}  {}", c.name, status, c.samples, wit);
        }
        let _ = writeln!(s, "overall: {}", if self.passed() { "PASS" } else { "FAIL" });
        s
    }
}
