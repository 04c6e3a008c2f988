//! DTLZ1-4 and WFG1-9 benchmark problems with analytic normalization
//! bounds.

mod dtlz;
mod wfg;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::objective::{NormalizationBounds, ObjectiveVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemName {
    Dtlz1,
    Dtlz2,
    Dtlz3,
    Dtlz4,
    Wfg1,
    Wfg2,
    Wfg3,
    Wfg4,
    Wfg5,
    Wfg6,
    Wfg7,
    Wfg8,
    Wfg9,
}

impl ProblemName {
    pub const ALL: [ProblemName; 13] = [
        ProblemName::Dtlz1,
        ProblemName::Dtlz2,
        ProblemName::Dtlz3,
        ProblemName::Dtlz4,
        ProblemName::Wfg1,
        ProblemName::Wfg2,
        ProblemName::Wfg3,
        ProblemName::Wfg4,
        ProblemName::Wfg5,
        ProblemName::Wfg6,
        ProblemName::Wfg7,
        ProblemName::Wfg8,
        ProblemName::Wfg9,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ProblemName::Dtlz1 => "DTLZ1",
            ProblemName::Dtlz2 => "DTLZ2",
            ProblemName::Dtlz3 => "DTLZ3",
            ProblemName::Dtlz4 => "DTLZ4",
            ProblemName::Wfg1 => "WFG1",
            ProblemName::Wfg2 => "WFG2",
            ProblemName::Wfg3 => "WFG3",
            ProblemName::Wfg4 => "WFG4",
            ProblemName::Wfg5 => "WFG5",
            ProblemName::Wfg6 => "WFG6",
            ProblemName::Wfg7 => "WFG7",
            ProblemName::Wfg8 => "WFG8",
            ProblemName::Wfg9 => "WFG9",
        }
    }

    pub fn is_dtlz(&self) -> bool {
        matches!(
            self,
            ProblemName::Dtlz1 | ProblemName::Dtlz2 | ProblemName::Dtlz3 | ProblemName::Dtlz4
        )
    }
}

impl fmt::Display for ProblemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        ProblemName::ALL
            .iter()
            .copied()
            .find(|p| p.as_str() == upper)
            .ok_or_else(|| Error::Input(format!("unknown problem '{s}'")))
    }
}

/// WFG position-parameter count for `m` objectives.
pub fn wfg_position_params(m: usize) -> usize {
    2 * (m - 1)
}

/// WFG distance-parameter count.
pub const WFG_DISTANCE_PARAMS: usize = 20;

/// A concrete benchmark instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    name: ProblemName,
    m: usize,
    d: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    bounds: NormalizationBounds,
}

impl ProblemSpec {
    /// Builds the problem with the conventional decision-variable count:
    /// `m + 4` for DTLZ1, `m + 9` for DTLZ2-4 and `2(m - 1) + 20` for WFG.
    pub fn new(name: ProblemName, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::param(format!("problems need m >= 2, got {m}")));
        }
        let d = match name {
            ProblemName::Dtlz1 => m + 4,
            ProblemName::Dtlz2 | ProblemName::Dtlz3 | ProblemName::Dtlz4 => m + 9,
            _ => wfg_position_params(m) + WFG_DISTANCE_PARAMS,
        };
        let lower = vec![0.0; d];
        let upper = if name.is_dtlz() {
            vec![1.0; d]
        } else {
            (1..=d).map(|i| 2.0 * i as f64).collect()
        };
        Ok(ProblemSpec {
            name,
            m,
            d,
            lower,
            upper,
            bounds: analytic_bounds(name, m),
        })
    }

    pub fn name(&self) -> ProblemName {
        self.name
    }

    pub fn num_objectives(&self) -> usize {
        self.m
    }

    pub fn num_variables(&self) -> usize {
        self.d
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn bounds(&self) -> &NormalizationBounds {
        &self.bounds
    }

    /// Evaluates `x`, checking its length and box bounds.
    pub fn evaluate(&self, x: &[f64]) -> Result<ObjectiveVector> {
        if x.len() != self.d {
            return Err(Error::Input(format!(
                "{} expects {} variables, got {}",
                self.name,
                self.d,
                x.len()
            )));
        }
        for (i, ((v, lo), hi)) in x.iter().zip(&self.lower).zip(&self.upper).enumerate() {
            if !(v >= lo && v <= hi) {
                return Err(Error::Input(format!(
                    "variable {i} = {v} outside [{lo}, {hi}]"
                )));
            }
        }
        Ok(self.evaluate_unchecked(x))
    }

    pub(crate) fn evaluate_unchecked(&self, x: &[f64]) -> ObjectiveVector {
        let f = match self.name {
            ProblemName::Dtlz1 => dtlz::dtlz1(x, self.m),
            ProblemName::Dtlz2 => dtlz::dtlz2(x, self.m),
            ProblemName::Dtlz3 => dtlz::dtlz3(x, self.m),
            ProblemName::Dtlz4 => dtlz::dtlz4(x, self.m),
            wfg => wfg::evaluate(wfg, x, self.m, wfg_position_params(self.m)),
        };
        ObjectiveVector::from_vec_unchecked(f)
    }

    /// `n` points on the analytic Pareto front, sampled uniformly at random.
    pub fn sample_pareto_reference(&self, n: usize, seed: u64) -> Result<Vec<ObjectiveVector>> {
        if n == 0 {
            return Err(Error::param("reference sample size must be >= 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match self.name {
            ProblemName::Dtlz1 => Ok((0..n)
                .map(|_| {
                    // Uniform on the simplex via normalized exponentials.
                    let e: Vec<f64> = (0..self.m).map(|_| rng.sample::<f64, _>(Exp1)).collect();
                    let sum: f64 = e.iter().sum();
                    ObjectiveVector::from_vec_unchecked(e.iter().map(|v| 0.5 * v / sum).collect())
                })
                .collect()),
            ProblemName::Dtlz2 | ProblemName::Dtlz3 | ProblemName::Dtlz4 => Ok((0..n)
                .map(|_| {
                    let g: Vec<f64> = (0..self.m)
                        .map(|_| rng.sample::<f64, _>(StandardNormal).abs())
                        .collect();
                    let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
                    ObjectiveVector::from_vec_unchecked(g.iter().map(|v| v / norm).collect())
                })
                .collect()),
            other => Err(Error::NotSupported(format!(
                "reference front sampling for {other}"
            ))),
        }
    }
}

/// Analytic ideal and nadir of the true Pareto front.
pub fn analytic_bounds(name: ProblemName, m: usize) -> NormalizationBounds {
    let ideal = ObjectiveVector::splat(0.0, m);
    let nadir = match name {
        ProblemName::Dtlz1 => ObjectiveVector::splat(0.5, m),
        ProblemName::Dtlz2 | ProblemName::Dtlz3 | ProblemName::Dtlz4 => {
            ObjectiveVector::splat(1.0, m)
        }
        _ => ObjectiveVector::from_vec_unchecked((1..=m).map(|i| 2.0 * i as f64).collect()),
    };
    NormalizationBounds::new(ideal, nadir).expect("analytic bounds are ordered")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decision_variable_counts() {
        assert_eq!(ProblemSpec::new(ProblemName::Dtlz1, 3).unwrap().num_variables(), 7);
        assert_eq!(ProblemSpec::new(ProblemName::Dtlz4, 5).unwrap().num_variables(), 14);
        assert_eq!(ProblemSpec::new(ProblemName::Wfg9, 3).unwrap().num_variables(), 24);
        assert_eq!(ProblemSpec::new(ProblemName::Wfg1, 5).unwrap().num_variables(), 28);
    }

    #[test]
    fn analytic_bounds_examples() {
        assert_eq!(analytic_bounds(ProblemName::Dtlz1, 3).nadir().as_slice(), &[0.5; 3]);
        assert_eq!(analytic_bounds(ProblemName::Dtlz3, 5).nadir().as_slice(), &[1.0; 5]);
        assert_eq!(
            analytic_bounds(ProblemName::Wfg7, 3).nadir().as_slice(),
            &[2.0, 4.0, 6.0]
        );
        for p in ProblemName::ALL {
            assert!(analytic_bounds(p, 4).ideal().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn names_parse_case_insensitively() {
        assert_eq!("wfg9".parse::<ProblemName>().unwrap(), ProblemName::Wfg9);
        assert_eq!(" DTLZ2 ".parse::<ProblemName>().unwrap(), ProblemName::Dtlz2);
        assert!("ZDT1".parse::<ProblemName>().is_err());
    }

    #[test]
    fn evaluate_rejects_bad_input() {
        let p = ProblemSpec::new(ProblemName::Dtlz2, 3).unwrap();
        assert!(p.evaluate(&[0.5; 11]).is_err());
        let mut x = vec![0.5; 12];
        x[3] = 1.5;
        assert!(p.evaluate(&x).is_err());
        x[3] = f64::NAN;
        assert!(p.evaluate(&x).is_err());
    }

    #[test]
    fn reference_samples_lie_on_front() {
        let p1 = ProblemSpec::new(ProblemName::Dtlz1, 3).unwrap();
        let pts = p1.sample_pareto_reference(3, 9).unwrap();
        assert_eq!(pts.len(), 3);
        for p in &pts {
            assert!((p.iter().sum::<f64>() - 0.5).abs() < 1e-12);
        }
        let p2 = ProblemSpec::new(ProblemName::Dtlz2, 4).unwrap();
        for p in p2.sample_pareto_reference(200, 1).unwrap() {
            assert!((p.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0).abs() < 1e-12);
        }
        assert_eq!(p2.sample_pareto_reference(1, 5).unwrap().len(), 1);
        assert_eq!(
            p2.sample_pareto_reference(4, 5).unwrap(),
            p2.sample_pareto_reference(4, 5).unwrap()
        );
        let w = ProblemSpec::new(ProblemName::Wfg4, 3).unwrap();
        assert!(matches!(w.sample_pareto_reference(3, 1), Err(Error::NotSupported(_))));
    }
}
