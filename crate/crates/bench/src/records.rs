//! Result rows written by the run matrix. Column layouts are listed in
//! `SCHEMA.md` at the crate root.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize, Serializer};
use triset::problems::ProblemName;
use triset::selection::SelectionMethod;

use crate::error::{Error, Result};
use crate::plan::{by_name, Algorithm};

pub const RECORDS_FILE: &str = "records.csv";
pub const SELECTIONS_FILE: &str = "selections.csv";
pub const TIMINGS_FILE: &str = "timings.csv";
pub const JOURNAL_FILE: &str = "journal.jsonl";

/// Floats are written with 17 significant digits so they read back exactly.
pub(crate) fn exact<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&format_args!("{v:.16e}"))
}

/// Indicator values of one archive attached to one MOEA/D run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveRecord {
    #[serde(with = "by_name")]
    pub problem: ProblemName,
    pub m: usize,
    pub algorithm: Algorithm,
    pub population: usize,
    pub archive: usize,
    pub seed: u64,
    pub evaluations: usize,
    #[serde(serialize_with = "exact")]
    pub hv_population: f64,
    #[serde(serialize_with = "exact")]
    pub hv_archive: f64,
    /// Distinct nondominated solutions held by the archive.
    pub candidates: usize,
}

/// One subset chosen from one archive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionRecord {
    #[serde(with = "by_name")]
    pub problem: ProblemName,
    pub m: usize,
    pub algorithm: Algorithm,
    pub population: usize,
    pub archive: usize,
    pub seed: u64,
    #[serde(with = "by_name")]
    pub method: SelectionMethod,
    pub k: usize,
    /// Can fall below `k` when the archive holds fewer distinct solutions.
    pub selected: usize,
    #[serde(serialize_with = "exact")]
    pub hv_selected: f64,
    #[serde(serialize_with = "exact")]
    pub loss_selected: f64,
    pub tie_breaks: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRecord {
    #[serde(with = "by_name")]
    pub problem: ProblemName,
    pub m: usize,
    pub algorithm: Algorithm,
    pub population: usize,
    pub seed: u64,
    pub wall_seconds: f64,
}

/// Everything produced by one MOEA/D run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub archives: Vec<ArchiveRecord>,
    pub selections: Vec<SelectionRecord>,
    pub timing: TimingRecord,
}

type CellKey = (ProblemName, usize, Algorithm, usize, usize, u64);

impl ArchiveRecord {
    pub fn key(&self) -> CellKey {
        (self.problem, self.m, self.algorithm, self.population, self.archive, self.seed)
    }

    fn validate(&self) -> Result<()> {
        finite_non_negative(&[self.hv_population, self.hv_archive])
    }
}

impl SelectionRecord {
    pub fn key(&self) -> (CellKey, SelectionMethod, usize) {
        (
            (self.problem, self.m, self.algorithm, self.population, self.archive, self.seed),
            self.method,
            self.k,
        )
    }

    fn validate(&self) -> Result<()> {
        finite_non_negative(&[self.hv_selected, self.loss_selected])
    }
}

fn finite_non_negative(values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite() && *v >= 0.0) {
        Ok(())
    } else {
        Err(Error::Data(format!("indicator values must be finite and >= 0, got {values:?}")))
    }
}

pub trait Row: Serialize + DeserializeOwned {
    fn check(&self) -> Result<()> {
        Ok(())
    }
}

impl Row for ArchiveRecord {
    fn check(&self) -> Result<()> {
        self.validate()
    }
}

impl Row for SelectionRecord {
    fn check(&self) -> Result<()> {
        self.validate()
    }
}

impl Row for TimingRecord {}

pub fn write_rows<T: Row, W: Write>(rows: &[T], out: W) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads rows and checks value ranges. An empty input gives no rows.
pub fn read_rows<T: Row, R: Read>(input: R) -> Result<Vec<T>> {
    let mut reader = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for r in reader.deserialize() {
        let row: T = r.map_err(|e| Error::Data(e.to_string()))?;
        row.check()?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_file<T: Row>(path: &Path, rows: &[T]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    if rows.is_empty() {
        // csv writes no header for an empty serde stream
        return Ok(());
    }
    write_rows(rows, std::io::BufWriter::new(file)).map_err(|e| Error::csv(path, e))
}

pub fn read_file<T: Row>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_rows(std::io::BufReader::new(file)).map_err(|e| match e {
        Error::Data(msg) => Error::Data(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn sort_archive_records(rows: &mut [ArchiveRecord]) {
    rows.sort_by_key(|r| r.key());
}

pub fn sort_selection_records(rows: &mut [SelectionRecord]) {
    rows.sort_by_key(|r| r.key());
}
