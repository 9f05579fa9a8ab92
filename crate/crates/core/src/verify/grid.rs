//! Rational sample points for the parameter space.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::Rational;
use crate::error::{AlgebraError, Result};

/// One coordinate range `lo, lo + step, ..., <= hi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub lo: Rational,
    pub hi: Rational,
    pub step: Rational,
}

impl Range {
    pub fn values(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        let mut v = self.lo.clone();
        while v <= self.hi {
            out.push(v.clone());
            v = &v + &self.step;
        }
        out
    }
}

/// Lattice points, seeded random offsets inside the same box, and explicit
/// points. All coordinates are rational.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub ranges: Vec<Range>,
    #[serde(default)]
    pub seed: u64,
    /// Number of extra random points drawn from `seed`.
    #[serde(default)]
    pub random: usize,
    #[serde(default)]
    pub explicit_points: Vec<Vec<Rational>>,
}

impl SampleGrid {
    /// Parses `"lo:hi:step,lo:hi:step"`; a single range is reused for every
    /// coordinate.
    pub fn parse(text: &str, seed: u64) -> Result<SampleGrid> {
        let mut ranges = Vec::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let f: Vec<&str> = part.split(':').collect();
            if f.len() != 3 {
                return Err(AlgebraError::Parse(format!("range {part:?} is not lo:hi:step")).into());
            }
            let lo: Rational = f[0].trim().parse()?;
            let hi: Rational = f[1].trim().parse()?;
            let step: Rational = f[2].trim().parse()?;
            if step.sign() <= 0 || hi < lo {
                return Err(AlgebraError::Parse(format!("range {part:?} is empty or has a nonpositive step")).into());
            }
            ranges.push(Range { lo, hi, step });
        }
        Ok(SampleGrid { ranges, seed, random: 0, explicit_points: vec![] })
    }

    /// At least 100 points for one or two parameters.
    pub fn default_for(k: usize, seed: u64) -> SampleGrid {
        match k {
            0 | 1 => SampleGrid::parse("-2:2:1/25", seed).expect("valid"),
            _ => SampleGrid::parse("-2:2:1/2", seed).expect("valid").with_random(40),
        }
    }

    pub fn with_random(mut self, count: usize) -> Self {
        self.random = count;
        self
    }

    pub fn with_points(mut self, pts: Vec<Vec<Rational>>) -> Self {
        self.explicit_points = pts;
        self
    }

    fn range(&self, i: usize) -> Option<&Range> {
        if self.ranges.len() == 1 {
            self.ranges.first()
        } else {
            self.ranges.get(i)
        }
    }

    /// Deterministic point list for `k` parameters, without duplicates.
    pub fn points(&self, k: usize) -> Vec<Vec<Rational>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut pts: Vec<Vec<Rational>> = vec![vec![]];
        for i in 0..k {
            let vals = self.range(i).map(Range::values).unwrap_or_else(|| vec![Rational::from_int(0)]);
            pts = pts
                .into_iter()
                .flat_map(|p| {
                    vals.iter().map(move |v| {
                        let mut q = p.clone();
                        q.push(v.clone());
                        q
                    })
                })
                .collect();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..self.random {
            let p = (0..k)
                .map(|i| match self.range(i) {
                    Some(r) => {
                        let t = Rational::new(rng.gen_range(0..=96i64), 96).expect("nonzero");
                        &r.lo + &(&(&r.hi - &r.lo) * &t)
                    }
                    None => Rational::from_int(0),
                })
                .collect();
            pts.push(p);
        }
        pts.extend(self.explicit_points.iter().filter(|p| p.len() == k).cloned());
        let mut seen = std::collections::HashSet::new();
        pts.retain(|p| seen.insert(p.clone()));
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_and_seeded_points() {
        let g = SampleGrid::parse("-2:2:1/2", 7).unwrap();
        assert_eq!(g.points(1).len(), 9);
        assert_eq!(g.points(2).len(), 81);
        let g = g.with_random(5);
        assert_eq!(g.points(1), g.points(1));
        assert!(g.points(1).len() <= 14 && g.points(1).len() > 9);
        assert_eq!(g.points(0), vec![Vec::<Rational>::new()]);
        assert!(SampleGrid::parse("1:0:1", 0).is_err());
        assert!(SampleGrid::parse("0:1", 0).is_err());
    }
}
