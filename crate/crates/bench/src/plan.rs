//! Experiment plans: which problems, algorithms, sizes and seeds to run.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use triset::problems::{ProblemName, ProblemSpec};
use triset::scalarize::{lattice_resolution_for_size, Scalarizer};
use triset::selection::SelectionMethod;

use crate::error::{Error, Result};

/// Population and archive sizes used by default for 3 and 5 objectives.
pub fn table_sizes(m: usize) -> Option<[usize; 4]> {
    match m {
        3 => Some([15, 91, 990, 5050]),
        5 => Some([15, 210, 1001, 5985]),
        _ => None,
    }
}

/// Default evaluation budget for `m` objectives.
pub fn default_budget(m: usize) -> Option<usize> {
    match m {
        3 => Some(50_000),
        5 => Some(200_000),
        _ => None,
    }
}

pub const DEFAULT_SEEDS: std::ops::RangeInclusive<u64> = 1..=51;
pub const DEFAULT_K: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "tch", alias = "MOEA/D-TCH")]
    Tch,
    #[serde(rename = "pbi", alias = "MOEA/D-PBI")]
    Pbi,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Tch => "tch",
            Algorithm::Pbi => "pbi",
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Algorithm::Tch => "MOEA/D-TCH",
            Algorithm::Pbi => "MOEA/D-PBI",
        }
    }

    pub fn scalarizer(&self) -> Scalarizer {
        match self {
            Algorithm::Tch => Scalarizer::Tchebycheff,
            Algorithm::Pbi => Scalarizer::pbi(),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.trim_start_matches("moea/d-").trim_start_matches("moead-") {
            "tch" => Ok(Algorithm::Tch),
            "pbi" => Ok(Algorithm::Pbi),
            _ => Err(Error::plan(format!("unknown algorithm '{s}'"))),
        }
    }
}

pub(crate) mod by_name {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemEntry {
    #[serde(with = "by_name")]
    pub problem: ProblemName,
    pub m: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectionEntry {
    #[serde(with = "by_name")]
    pub method: SelectionMethod,
    pub k: usize,
}

fn default_algorithms() -> Vec<Algorithm> {
    vec![Algorithm::Tch, Algorithm::Pbi]
}

fn default_selections() -> Vec<SelectionEntry> {
    SelectionMethod::ALL
        .into_iter()
        .map(|method| SelectionEntry { method, k: DEFAULT_K })
        .collect()
}

fn default_seeds() -> Vec<u64> {
    DEFAULT_SEEDS.collect()
}

fn default_scale() -> f64 {
    1.0
}

/// A JSON-serializable experiment description. Missing size lists and
/// budgets fall back to the defaults for each problem's objective count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    pub problems: Vec<ProblemEntry>,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub populations: Option<Vec<usize>>,
    #[serde(default)]
    pub archives: Option<Vec<usize>>,
    #[serde(default = "default_selections")]
    pub selections: Vec<SelectionEntry>,
    #[serde(default)]
    pub budget: Option<usize>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Scales budgets and the number of seeds, in (0, 1].
    #[serde(default = "default_scale")]
    pub budget_scale: f64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl ExperimentPlan {
    pub fn new(problems: Vec<ProblemEntry>) -> Self {
        ExperimentPlan {
            problems,
            algorithms: default_algorithms(),
            populations: None,
            archives: None,
            selections: default_selections(),
            budget: None,
            seeds: default_seeds(),
            budget_scale: 1.0,
            out: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }

    /// Expands the plan into one entry per MOEA/D run after checking every
    /// size combination.
    pub fn resolve(&self) -> Result<ResolvedPlan> {
        if self.problems.is_empty() {
            return Err(Error::plan("no problems"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::plan("no algorithms"));
        }
        if self.seeds.is_empty() {
            return Err(Error::plan("empty seed list"));
        }
        if !(self.budget_scale > 0.0 && self.budget_scale <= 1.0) {
            return Err(Error::plan(format!(
                "budget scale {} outside (0, 1]",
                self.budget_scale
            )));
        }
        let unique = |name: &str, n: usize, d: usize| {
            if n == d {
                Ok(())
            } else {
                Err(Error::plan(format!("duplicate {name}")))
            }
        };
        unique("seeds", self.seeds.len(), self.seeds.iter().collect::<BTreeSet<_>>().len())?;
        unique("problems", self.problems.len(), self.problems.iter().map(|p| (p.problem, p.m)).collect::<BTreeSet<_>>().len())?;
        unique("algorithms", self.algorithms.len(), self.algorithms.iter().collect::<BTreeSet<_>>().len())?;
        unique(
            "selections",
            self.selections.len(),
            self.selections.iter().map(|s| (s.method, s.k)).collect::<BTreeSet<_>>().len(),
        )?;
        let n_seeds = ((self.seeds.len() as f64 * self.budget_scale).ceil() as usize).clamp(1, self.seeds.len());
        let seeds = &self.seeds[..n_seeds];

        let mut runs = Vec::new();
        for entry in &self.problems {
            let m = entry.m;
            ProblemSpec::new(entry.problem, m)?;
            let sizes = |given: &Option<Vec<usize>>, what: &str| -> Result<Vec<usize>> {
                let list = match given {
                    Some(v) => v.clone(),
                    None => table_sizes(m)
                        .ok_or_else(|| Error::plan(format!("no default {what} sizes for m = {m}")))?
                        .to_vec(),
                };
                if list.is_empty() {
                    return Err(Error::plan(format!("empty {what} size list")));
                }
                if list.iter().collect::<BTreeSet<_>>().len() != list.len() {
                    return Err(Error::plan(format!("duplicate {what} sizes")));
                }
                for &n in &list {
                    if lattice_resolution_for_size(m, n).is_none() {
                        return Err(Error::plan(format!(
                            "{what} size {n} is not a simplex-lattice size for m = {m}"
                        )));
                    }
                }
                Ok(list)
            };
            let pops = sizes(&self.populations, "population")?;
            let archives = sizes(&self.archives, "archive")?;
            for s in &self.selections {
                if s.k == 0 {
                    return Err(Error::plan("selection size k must be positive"));
                }
                if let Some(a) = archives.iter().find(|&&a| a < s.k) {
                    return Err(Error::plan(format!(
                        "selection size {} exceeds archive size {a}",
                        s.k
                    )));
                }
            }
            let base = match self.budget {
                Some(b) => b,
                None => default_budget(m)
                    .ok_or_else(|| Error::plan(format!("no default budget for m = {m}")))?,
            };
            let scaled = (base as f64 * self.budget_scale).round() as usize;
            for &algorithm in &self.algorithms {
                for &population in &pops {
                    if scaled < population {
                        return Err(Error::plan(format!(
                            "budget {scaled} smaller than population size {population}"
                        )));
                    }
                    for &seed in seeds {
                        runs.push(RunSpec {
                            problem: entry.problem,
                            m,
                            algorithm,
                            population,
                            archives: archives.clone(),
                            budget: scaled,
                            seed,
                        });
                    }
                }
            }
        }
        Ok(ResolvedPlan {
            runs,
            selections: self.selections.clone(),
        })
    }
}

/// One MOEA/D run feeding several archives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunSpec {
    pub problem: ProblemName,
    pub m: usize,
    pub algorithm: Algorithm,
    pub population: usize,
    pub archives: Vec<usize>,
    pub budget: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedPlan {
    pub runs: Vec<RunSpec>,
    pub selections: Vec<SelectionEntry>,
}
