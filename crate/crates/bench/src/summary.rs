//! Per-cell statistics and significance tests over run records.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize, Serializer};
use triset::problems::ProblemName;

use crate::error::Result;
use crate::plan::{by_name, Algorithm};
use crate::records::{self, exact, ArchiveRecord, Row, SelectionRecord};
use crate::stats::wilcoxon_rank_sum;

pub const SUMMARY_FILE: &str = "summary.csv";
pub const SIGNIFICANCE_FILE: &str = "significance.csv";

/// Fewest matched runs for which a comparison is tested.
pub const MIN_RUNS_FOR_TEST: usize = 5;

/// Set labels used in the `set` column besides the selection methods.
pub const POPULATION_SET: &str = "population";
pub const ARCHIVE_SET: &str = "archive";

fn exact_opt<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => exact(x, s),
        None => s.serialize_str(""),
    }
}

/// Statistics of one solution set over all seeds. `archive` is 0 for the
/// final population; `k` is the set's nominal size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    #[serde(with = "by_name")]
    pub problem: ProblemName,
    pub m: usize,
    pub algorithm: Algorithm,
    pub population: usize,
    pub archive: usize,
    pub set: String,
    pub k: usize,
    pub runs: usize,
    #[serde(serialize_with = "exact")]
    pub hv_mean: f64,
    #[serde(serialize_with = "exact")]
    pub hv_median: f64,
    #[serde(serialize_with = "exact")]
    pub hv_min: f64,
    #[serde(serialize_with = "exact")]
    pub hv_max: f64,
    #[serde(serialize_with = "exact_opt")]
    pub loss_mean: Option<f64>,
}

impl Row for SummaryRow {}

/// A selected-subset distribution tested against a baseline of the same
/// nominal size over matched seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificanceRow {
    #[serde(with = "by_name")]
    pub problem: ProblemName,
    pub m: usize,
    pub algorithm: Algorithm,
    pub population: usize,
    pub archive: usize,
    pub set: String,
    pub k: usize,
    /// [`POPULATION_SET`] or [`ARCHIVE_SET`].
    pub baseline: String,
    pub baseline_population: usize,
    pub baseline_archive: usize,
    pub runs: usize,
    #[serde(serialize_with = "exact")]
    pub mean_selected: f64,
    #[serde(serialize_with = "exact")]
    pub mean_baseline: f64,
    #[serde(serialize_with = "exact")]
    pub p_value: f64,
    /// `better`, `worse` or `same` at the 5% level.
    pub outcome: String,
}

impl Row for SignificanceRow {}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Summary {
    pub rows: Vec<SummaryRow>,
    pub significance: Vec<SignificanceRow>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

/// Order-independent statistics: values are sorted before summing.
pub fn stats(values: &[f64]) -> Option<Stats> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let median = if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) };
    Some(Stats {
        mean: v.iter().sum::<f64>() / n as f64,
        median,
        min: v[0],
        max: v[n - 1],
    })
}

type Panel = (ProblemName, usize, Algorithm);
type SetKey = (Panel, usize, usize, String, usize);

/// Seed-indexed samples of one set.
#[derive(Default)]
struct Sample {
    hv: BTreeMap<u64, f64>,
    loss: BTreeMap<u64, f64>,
}

pub fn summarize(archives: &[ArchiveRecord], selections: &[SelectionRecord]) -> Summary {
    let mut sets: BTreeMap<SetKey, Sample> = BTreeMap::new();
    for r in archives {
        let panel = (r.problem, r.m, r.algorithm);
        sets.entry((panel, r.population, 0, POPULATION_SET.to_string(), r.population))
            .or_default()
            .hv
            .insert(r.seed, r.hv_population);
        sets.entry((panel, r.population, r.archive, ARCHIVE_SET.to_string(), r.archive))
            .or_default()
            .hv
            .insert(r.seed, r.hv_archive);
    }
    for r in selections {
        let s = sets
            .entry(((r.problem, r.m, r.algorithm), r.population, r.archive, r.method.to_string(), r.k))
            .or_default();
        s.hv.insert(r.seed, r.hv_selected);
        s.loss.insert(r.seed, r.loss_selected);
    }

    let mut summary = Summary::default();
    for ((panel, population, archive, set, k), sample) in &sets {
        let hv: Vec<f64> = sample.hv.values().copied().collect();
        let Some(st) = stats(&hv) else { continue };
        let loss: Vec<f64> = sample.loss.values().copied().collect();
        summary.rows.push(SummaryRow {
            problem: panel.0,
            m: panel.1,
            algorithm: panel.2,
            population: *population,
            archive: *archive,
            set: set.clone(),
            k: *k,
            runs: hv.len(),
            hv_mean: st.mean,
            hv_median: st.median,
            hv_min: st.min,
            hv_max: st.max,
            loss_mean: stats(&loss).map(|s| s.mean),
        });
        if set == POPULATION_SET || set == ARCHIVE_SET {
            continue;
        }
        let baselines = [
            (POPULATION_SET, *k, 0usize),
            (ARCHIVE_SET, *population, *k),
        ];
        for (label, b_pop, b_arc) in baselines {
            let Some(base) = sets.get(&(*panel, b_pop, b_arc, label.to_string(), *k)) else {
                continue;
            };
            let (xs, ys): (Vec<f64>, Vec<f64>) = sample
                .hv
                .iter()
                .filter_map(|(seed, x)| base.hv.get(seed).map(|y| (*x, *y)))
                .unzip();
            if xs.len() < MIN_RUNS_FOR_TEST {
                continue;
            }
            let test = wilcoxon_rank_sum(&xs, &ys).expect("samples are non-empty and finite");
            let (mx, my) = (stats(&xs).expect("non-empty").mean, stats(&ys).expect("non-empty").mean);
            let centre = xs.len() as f64 * (xs.len() + ys.len() + 1) as f64 / 2.0;
            let outcome = match (test.reject(), test.rank_sum > centre) {
                (false, _) => "same",
                (true, true) => "better",
                (true, false) => "worse",
            };
            summary.significance.push(SignificanceRow {
                problem: panel.0,
                m: panel.1,
                algorithm: panel.2,
                population: *population,
                archive: *archive,
                set: set.clone(),
                k: *k,
                baseline: label.to_string(),
                baseline_population: b_pop,
                baseline_archive: b_arc,
                runs: xs.len(),
                mean_selected: mx,
                mean_baseline: my,
                p_value: test.p_value,
                outcome: outcome.to_string(),
            });
        }
    }
    summary
}

impl Summary {
    pub fn find(&self, problem: ProblemName, m: usize, algorithm: Algorithm, population: usize, archive: usize, set: &str, k: usize) -> Option<&SummaryRow> {
        self.rows.iter().find(|r| {
            r.problem == problem
                && r.m == m
                && r.algorithm == algorithm
                && r.population == population
                && r.archive == archive
                && r.set == set
                && r.k == k
        })
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        records::write_file(&dir.join(SUMMARY_FILE), &self.rows)?;
        records::write_file(&dir.join(SIGNIFICANCE_FILE), &self.significance)
    }

    pub fn read(dir: &Path) -> Result<Self> {
        Ok(Summary {
            rows: read_if_present(&dir.join(SUMMARY_FILE))?,
            significance: read_if_present(&dir.join(SIGNIFICANCE_FILE))?,
        })
    }
}

/// Empty tables are written as empty files, so a missing file also reads
/// as no rows.
pub fn read_if_present<T: Row>(path: &Path) -> Result<Vec<T>> {
    if path.exists() {
        records::read_file(path)
    } else {
        Ok(Vec::new())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use triset::selection::SelectionMethod;

    fn records(seeds: std::ops::Range<u64>) -> (Vec<ArchiveRecord>, Vec<SelectionRecord>) {
        let mut a = Vec::new();
        let mut s = Vec::new();
        for seed in seeds {
            for pop in [15, 91] {
                a.push(ArchiveRecord {
                    problem: ProblemName::Dtlz1,
                    m: 3,
                    algorithm: Algorithm::Tch,
                    population: pop,
                    archive: 15,
                    seed,
                    evaluations: 100,
                    hv_population: 0.5 + seed as f64 * 1e-3,
                    hv_archive: 0.6 + seed as f64 * 1e-3,
                    candidates: 15,
                });
                s.push(SelectionRecord {
                    problem: ProblemName::Dtlz1,
                    m: 3,
                    algorithm: Algorithm::Tch,
                    population: pop,
                    archive: 15,
                    seed,
                    method: SelectionMethod::HvGreedy,
                    k: 15,
                    selected: 15,
                    hv_selected: 0.9 + seed as f64 * 1e-3,
                    loss_selected: 0.01,
                    tie_breaks: 0,
                });
            }
        }
        (a, s)
    }

    #[test]
    fn single_record_mean() {
        let (a, s) = records(3..4);
        let sum = summarize(&a[..1], &s[..1]);
        let row = sum.find(ProblemName::Dtlz1, 3, Algorithm::Tch, 15, 15, "hv", 15).unwrap();
        assert_eq!(row.hv_mean, 0.903);
        assert_eq!(row.runs, 1);
        assert!(sum.significance.is_empty());
    }

    #[test]
    fn order_independent() {
        let (mut a, mut s) = records(1..12);
        let first = summarize(&a, &s);
        a.reverse();
        s.rotate_left(5);
        assert_eq!(summarize(&a, &s), first);
    }

    #[test]
    fn significance_against_both_baselines() {
        let (a, s) = records(1..12);
        let sum = summarize(&a, &s);
        let rows: Vec<_> = sum.significance.iter().filter(|r| r.population == 15).collect();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.outcome == "better" && r.runs == 11));
        // the size-15 population baseline is shared by every population size
        let rows: Vec<_> = sum.significance.iter().filter(|r| r.population == 91).collect();
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].baseline_population, rows[0].baseline_archive), (15, 0));
    }

    #[test]
    fn summary_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let (a, s) = records(1..8);
        let sum = summarize(&a, &s);
        sum.write(dir.path()).unwrap();
        assert_eq!(Summary::read(dir.path()).unwrap(), sum);
    }
}
