//! Whitespace-delimited data files for line and box plots.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::records::{ArchiveRecord, SelectionRecord};
use crate::summary::{Summary, ARCHIVE_SET, POPULATION_SET};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PlotOutcome {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "NaN".to_string(), |x| format!("{x:.16e}"))
}

/// Writes one `.dat` file per (problem, m, algorithm) panel with the mean
/// hypervolume of the final population and of every archive size against
/// the population size, plus one `.runs` file per selected-subset cell with
/// the per-seed values of the subset and its two same-size baselines.
pub fn emit_plot_data(
    summary: &Summary,
    archives: &[ArchiveRecord],
    selections: &[SelectionRecord],
    dir: &Path,
) -> Result<PlotOutcome> {
    let mut outcome = PlotOutcome::default();
    if summary.rows.is_empty() {
        outcome.warnings.push("summary is empty; no plot data written".into());
        return Ok(outcome);
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut write = |name: String, text: String| -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        outcome.files.push(path);
        Ok(())
    };

    let mut panels: BTreeMap<_, Vec<_>> = BTreeMap::new();
    for r in &summary.rows {
        panels.entry((r.problem, r.m, r.algorithm)).or_default().push(r);
    }
    for ((problem, m, algorithm), rows) in &panels {
        let pops: BTreeSet<usize> = rows.iter().map(|r| r.population).collect();
        let sizes: BTreeSet<usize> = rows.iter().filter(|r| r.set == ARCHIVE_SET).map(|r| r.archive).collect();
        let mean = |pop: usize, set: &str, archive: usize| {
            rows.iter()
                .find(|r| r.population == pop && r.set == set && r.archive == archive)
                .map(|r| r.hv_mean)
        };
        let mut text = format!("# {problem} m={m} {} mean hypervolume\n# pop {POPULATION_SET}", algorithm.label());
        for a in &sizes {
            let _ = write!(text, " archive_{a}");
        }
        text.push('\n');
        for &p in &pops {
            let _ = write!(text, "{p} {}", cell(mean(p, POPULATION_SET, 0)));
            for &a in &sizes {
                let _ = write!(text, " {}", cell(mean(p, ARCHIVE_SET, a)));
            }
            text.push('\n');
        }
        write(format!("{}_m{m}_{algorithm}.dat", problem.as_str().to_ascii_lowercase()), text)?;
    }

    let mut by_cell: BTreeMap<_, BTreeMap<u64, f64>> = BTreeMap::new();
    for s in selections {
        by_cell
            .entry((s.problem, s.m, s.algorithm, s.population, s.archive, s.method, s.k))
            .or_default()
            .insert(s.seed, s.hv_selected);
    }
    let population_hv = |r: &ArchiveRecord| ((r.problem, r.m, r.algorithm, r.population, r.seed), r.hv_population);
    let pop_hv: BTreeMap<_, f64> = archives.iter().map(population_hv).collect();
    let arc_hv: BTreeMap<_, f64> = archives
        .iter()
        .map(|r| ((r.problem, r.m, r.algorithm, r.population, r.archive, r.seed), r.hv_archive))
        .collect();
    for ((problem, m, algorithm, pop, arc, method, k), runs) in &by_cell {
        let mut text = format!(
            "# {problem} m={m} {} population={pop} archive={arc} {method} k={k}\n# seed selected population_{k} archive_{k}\n",
            algorithm.label()
        );
        for (seed, hv) in runs {
            let p = pop_hv.get(&(*problem, *m, *algorithm, *k, *seed)).copied();
            let a = arc_hv.get(&(*problem, *m, *algorithm, *pop, *k, *seed)).copied();
            let _ = writeln!(text, "{seed} {} {} {}", cell(Some(*hv)), cell(p), cell(a));
        }
        write(
            format!(
                "{}_m{m}_{algorithm}_p{pop}_a{arc}_{method}_k{k}.runs",
                problem.as_str().to_ascii_lowercase()
            ),
            text,
        )?;
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plan::Algorithm;
    use crate::summary::summarize;
    use triset::problems::ProblemName;

    fn archive_rows() -> Vec<ArchiveRecord> {
        let mut rows = Vec::new();
        for pop in [15, 91, 990, 5050] {
            for archive in [15, 91, 990, 5050] {
                rows.push(ArchiveRecord {
                    problem: ProblemName::Dtlz1,
                    m: 3,
                    algorithm: Algorithm::Tch,
                    population: pop,
                    archive,
                    seed: 1,
                    evaluations: 1,
                    hv_population: 0.5,
                    hv_archive: 0.7,
                    candidates: archive,
                });
            }
        }
        rows
    }

    #[test]
    fn panel_layout() {
        let dir = tempfile::tempdir().unwrap();
        let rows = archive_rows();
        let summary = summarize(&rows, &[]);
        let out = emit_plot_data(&summary, &rows, &[], dir.path()).unwrap();
        assert_eq!(out.files.len(), 1);
        let text = fs::read_to_string(&out.files[0]).unwrap();
        let data: Vec<Vec<&str>> = text
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| l.split_whitespace().collect())
            .collect();
        assert_eq!(data.len(), 4);
        assert!(data.iter().all(|r| r.len() == 6));

        let again = emit_plot_data(&summary, &rows, &[], dir.path()).unwrap();
        assert_eq!(fs::read_to_string(&again.files[0]).unwrap(), text);
    }

    #[test]
    fn empty_summary_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let out = emit_plot_data(&Summary::default(), &[], &[], &dir.path().join("plots")).unwrap();
        assert!(out.files.is_empty());
        assert_eq!(out.warnings.len(), 1);
        assert!(!dir.path().join("plots").exists());
    }
}
