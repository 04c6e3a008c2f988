//! Executes run matrices.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use triset::archive::{ScalarizingArchive, SolutionSink};
use triset::indicators::{expected_loss, hypervolume_exact, hypervolume_mc, DEFAULT_HV_REFERENCE};
use triset::moead::{run, MoeadConfig};
use triset::objective::ObjectiveVector;
use triset::problems::ProblemSpec;
use triset::scalarize::{lattice_resolution_for_size, simplex_lattice};
use triset::selection::{select, SubsetRequest};

use crate::error::{Error, Result};
use crate::plan::{ResolvedPlan, RunSpec, SelectionEntry};
use crate::records::{
    self, ArchiveRecord, RunRecord, SelectionRecord, TimingRecord, JOURNAL_FILE, RECORDS_FILE, SELECTIONS_FILE,
    TIMINGS_FILE,
};

/// Environment variable holding the worker count for [`run_matrix`].
pub const WORKERS_ENV: &str = "TRISET_WORKERS";

/// Objective counts above this use sampled hypervolume.
pub const EXACT_HV_MAX_OBJECTIVES: usize = 4;
pub const MC_HV_SAMPLES: usize = 100_000;

/// Worker count from [`WORKERS_ENV`]; `None` when unset or invalid.
pub fn workers_from_env() -> Option<usize> {
    std::env::var(WORKERS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Hypervolume in normalized space against the default reference point.
pub fn normalized_hv<P: AsRef<[f64]>>(points: &[P], m: usize, seed: u64) -> Result<f64> {
    let reference = vec![DEFAULT_HV_REFERENCE; m];
    if m <= EXACT_HV_MAX_OBJECTIVES {
        Ok(hypervolume_exact(points, &reference)?)
    } else {
        Ok(hypervolume_mc(points, &reference, MC_HV_SAMPLES, seed)?.value)
    }
}

fn archive_for(m: usize, size: usize, spec: &RunSpec) -> Result<ScalarizingArchive> {
    let h = lattice_resolution_for_size(m, size)
        .ok_or_else(|| Error::plan(format!("archive size {size} is not a lattice size for m = {m}")))?;
    Ok(ScalarizingArchive::new(simplex_lattice(m, h)?, spec.algorithm.scalarizer())?)
}

/// Runs MOEA/D once, feeding every archive size of `spec` from the same
/// solution stream, then scores the population, the archives and the
/// subsets chosen from each archive.
pub fn execute_run(spec: &RunSpec, selections: &[SelectionEntry]) -> Result<RunRecord> {
    let start = Instant::now();
    let m = spec.m;
    let problem = ProblemSpec::new(spec.problem, m)?;
    let config = MoeadConfig::for_population(m, spec.population, spec.algorithm.scalarizer(), spec.budget, spec.seed)?;
    let mut archives = spec
        .archives
        .iter()
        .map(|&size| archive_for(m, size, spec))
        .collect::<Result<Vec<_>>>()?;
    let state = {
        let mut sinks: Vec<&mut dyn SolutionSink> = archives.iter_mut().map(|a| a as &mut dyn SolutionSink).collect();
        run(config, &problem, &mut sinks)?
    };

    let bounds = problem.bounds();
    let population: Vec<ObjectiveVector> = state.population.iter().map(|s| s.f.clone()).collect();
    let hv_population = normalized_hv(&bounds.normalize_all(&population)?, m, spec.seed)?;

    let mut archive_rows = Vec::with_capacity(archives.len());
    let mut selection_rows = Vec::new();
    for (archive, &size) in archives.iter().zip(&spec.archives) {
        let candidates = bounds.normalize_all(&archive.extract_candidates())?;
        let hv_archive = normalized_hv(&candidates, m, spec.seed)?;
        archive_rows.push(ArchiveRecord {
            problem: spec.problem,
            m,
            algorithm: spec.algorithm,
            population: spec.population,
            archive: size,
            seed: spec.seed,
            evaluations: state.evals_used,
            hv_population,
            hv_archive,
            candidates: candidates.len(),
        });
        for sel in selections {
            let k = sel.k.min(candidates.len());
            let subset = select(&SubsetRequest {
                candidates: candidates.clone(),
                k,
                method: sel.method,
                hv_reference: Some(ObjectiveVector::splat(DEFAULT_HV_REFERENCE, m)),
                seed: spec.seed,
            })?;
            let chosen = subset.points(&candidates);
            selection_rows.push(SelectionRecord {
                problem: spec.problem,
                m,
                algorithm: spec.algorithm,
                population: spec.population,
                archive: size,
                seed: spec.seed,
                method: sel.method,
                k: sel.k,
                selected: chosen.len(),
                hv_selected: normalized_hv(&chosen, m, spec.seed)?,
                loss_selected: expected_loss(&chosen, &candidates)?,
                tie_breaks: subset.tie_breaks,
            });
        }
    }
    Ok(RunRecord {
        archives: archive_rows,
        selections: selection_rows,
        timing: TimingRecord {
            problem: spec.problem,
            m,
            algorithm: spec.algorithm,
            population: spec.population,
            seed: spec.seed,
            wall_seconds: start.elapsed().as_secs_f64(),
        },
    })
}

/// Sorted results of a whole matrix.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MatrixOutput {
    pub archives: Vec<ArchiveRecord>,
    pub selections: Vec<SelectionRecord>,
    pub timings: Vec<TimingRecord>,
}

impl MatrixOutput {
    fn from_runs(runs: Vec<RunRecord>) -> Self {
        let mut out = MatrixOutput::default();
        for r in runs {
            out.archives.extend(r.archives);
            out.selections.extend(r.selections);
            out.timings.push(r.timing);
        }
        records::sort_archive_records(&mut out.archives);
        records::sort_selection_records(&mut out.selections);
        out.timings
            .sort_by_key(|t| (t.problem, t.m, t.algorithm, t.population, t.seed));
        out
    }

    /// Writes `records.csv`, `selections.csv` and `timings.csv`. The first
    /// two depend only on the plan; wall times live in the third.
    pub fn write(&self, dir: &Path) -> Result<()> {
        records::write_file(&dir.join(RECORDS_FILE), &self.archives)?;
        records::write_file(&dir.join(SELECTIONS_FILE), &self.selections)?;
        records::write_file(&dir.join(TIMINGS_FILE), &self.timings)
    }
}

/// Runs every cell of `plan` in memory on `workers` threads (0 picks the
/// rayon default).
pub fn run_cells(plan: &ResolvedPlan, workers: usize) -> Result<MatrixOutput> {
    run_with(plan, workers, |_| Ok(()))
}

fn run_with<F>(plan: &ResolvedPlan, workers: usize, on_done: F) -> Result<MatrixOutput>
where
    F: Fn(&RunRecord) -> Result<()> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Data(format!("cannot start workers: {e}")))?;
    let runs = pool.install(|| {
        plan.runs
            .par_iter()
            .map(|spec| {
                let r = execute_run(spec, &plan.selections)?;
                on_done(&r)?;
                Ok(r)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(MatrixOutput::from_runs(runs))
}

/// Runs every cell of `plan`, appending each finished run to a JSON-lines
/// journal in `out`, then writes the sorted CSV tables.
pub fn run_matrix(plan: &ResolvedPlan, out: &Path, workers: usize) -> Result<MatrixOutput> {
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let journal_path = out.join(JOURNAL_FILE);
    let journal = File::create(&journal_path).map_err(|e| Error::io(&journal_path, e))?;
    let journal = Mutex::new(BufWriter::new(journal));
    let output = run_with(plan, workers, |r| {
        let line = serde_json::to_string(r)?;
        let mut j = journal.lock().expect("journal lock");
        writeln!(j, "{line}")
            .and_then(|_| j.flush())
            .map_err(|e| Error::io(&journal_path, e))
    })?;
    output.write(out)?;
    Ok(output)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plan::Algorithm;
    use triset::problems::ProblemName;
    use triset::selection::SelectionMethod;

    fn small(seed: u64) -> RunSpec {
        RunSpec {
            problem: ProblemName::Dtlz2,
            m: 3,
            algorithm: Algorithm::Tch,
            population: 15,
            archives: vec![15, 91],
            budget: 1500,
            seed,
        }
    }

    #[test]
    fn single_run_produces_consistent_records() {
        let sel = [
            SelectionEntry { method: SelectionMethod::HvGreedy, k: 15 },
            SelectionEntry { method: SelectionMethod::DistanceGreedy, k: 15 },
        ];
        let r = execute_run(&small(1), &sel).unwrap();
        assert_eq!(r.archives.len(), 2);
        assert_eq!(r.selections.len(), 4);
        let box_volume = 1.1f64.powi(3);
        for s in &r.selections {
            let a = r.archives.iter().find(|a| a.archive == s.archive).unwrap();
            assert!(s.hv_selected <= a.hv_archive + 1e-12);
            assert!(a.hv_archive <= box_volume);
            assert_eq!(s.selected, s.k.min(a.candidates));
        }
        assert_eq!(execute_run(&small(1), &sel).unwrap().archives, r.archives);
    }
}
