//! Plain-text storage for solution sets.
//!
//! A file starts with one metadata line, then a CSV header and one row per
//! solution:
//!
//! ```text
//! # m=3 d=7 problem=DTLZ1 kind=archive
//! eval,f1,f2,f3,x1,x2,x3,x4,x5,x6,x7
//! 12,5.0e-1,0e0,0e0,...
//! ```
//!
//! `m` and `d` are required; other `key=value` pairs are kept as-is.
//! Values are written in shortest round-trip form, so reading a file back
//! gives bit-identical vectors.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::objective::{ObjectiveVector, Solution};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolutionSet {
    pub num_objectives: usize,
    pub num_variables: usize,
    /// Extra metadata such as `problem` or `kind`. Keys and values must not
    /// contain whitespace or `=`.
    pub metadata: BTreeMap<String, String>,
    pub solutions: Vec<Solution>,
}

impl SolutionSet {
    pub fn new(num_objectives: usize, num_variables: usize) -> Self {
        SolutionSet {
            num_objectives,
            num_variables,
            ..Default::default()
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    pub fn objectives(&self) -> Vec<ObjectiveVector> {
        self.solutions.iter().map(|s| s.f.clone()).collect()
    }

    /// A set holding objective vectors only.
    pub fn from_objectives(points: &[ObjectiveVector]) -> Result<Self> {
        let m = points.first().ok_or(Error::Empty("point set"))?.len();
        let mut set = SolutionSet::new(m, 0);
        for (i, p) in points.iter().enumerate() {
            crate::error::check_dim(m, p.len())?;
            set.solutions.push(Solution {
                x: Vec::new(),
                f: p.clone(),
                eval_index: i,
            });
        }
        Ok(set)
    }

    fn header(&self) -> Vec<String> {
        std::iter::once("eval".to_string())
            .chain((1..=self.num_objectives).map(|i| format!("f{i}")))
            .chain((1..=self.num_variables).map(|i| format!("x{i}")))
            .collect()
    }
}

fn valid_token(s: &str) -> bool {
    !s.is_empty() && !s.contains(|c: char| c.is_whitespace() || c == '=')
}

pub fn write_solution_set<W: Write>(set: &SolutionSet, mut out: W) -> Result<()> {
    if set.num_objectives == 0 {
        return Err(Error::param("a solution set needs at least one objective"));
    }
    let mut meta = format!("# m={} d={}", set.num_objectives, set.num_variables);
    for (k, v) in &set.metadata {
        if !valid_token(k) || !valid_token(v) || k == "m" || k == "d" {
            return Err(Error::Input(format!("bad metadata entry '{k}={v}'")));
        }
        meta.push_str(&format!(" {k}={v}"));
    }
    writeln!(out, "{meta}").map_err(io_err)?;

    let mut w = csv::Writer::from_writer(out);
    w.write_record(set.header()).map_err(csv_err)?;
    let mut row = Vec::with_capacity(1 + set.num_objectives + set.num_variables);
    for s in &set.solutions {
        crate::error::check_dim(set.num_objectives, s.f.len())?;
        crate::error::check_dim(set.num_variables, s.x.len())?;
        row.clear();
        row.push(s.eval_index.to_string());
        row.extend(s.f.iter().chain(&s.x).map(|v| format!("{v:e}")));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(io_err)?;
    Ok(())
}

pub fn read_solution_set<R: Read>(input: R) -> Result<SolutionSet> {
    let mut text = String::new();
    let mut input = input;
    input
        .read_to_string(&mut text)
        .map_err(|e| Error::parse(0, e.to_string()))?;
    parse_solution_set(&text)
}

pub fn parse_solution_set(text: &str) -> Result<SolutionSet> {
    let (first, rest) = text.split_once('\n').unwrap_or((text, ""));
    let first = first.trim_end_matches('\r');
    let body = first
        .strip_prefix('#')
        .ok_or_else(|| Error::parse(1, "expected a '#' metadata line"))?;

    let mut m = None;
    let mut d = None;
    let mut metadata = BTreeMap::new();
    for pair in body.split_whitespace() {
        let (k, v) = pair
            .split_once('=')
            .filter(|(k, v)| valid_token(k) && valid_token(v))
            .ok_or_else(|| Error::parse(1, format!("malformed metadata entry '{pair}'")))?;
        let count = || {
            v.parse::<usize>()
                .map_err(|_| Error::parse(1, format!("'{k}' must be a count, got '{v}'")))
        };
        let duplicate = match k {
            "m" => m.replace(count()?).is_some(),
            "d" => d.replace(count()?).is_some(),
            _ => metadata.insert(k.to_string(), v.to_string()).is_some(),
        };
        if duplicate {
            return Err(Error::parse(1, format!("duplicate metadata key '{k}'")));
        }
    }
    let m = m.ok_or_else(|| Error::parse(1, "missing 'm'"))?;
    let d = d.ok_or_else(|| Error::parse(1, "missing 'd'"))?;
    if m == 0 {
        return Err(Error::parse(1, "'m' must be positive"));
    }
    let mut set = SolutionSet {
        num_objectives: m,
        num_variables: d,
        metadata,
        solutions: Vec::new(),
    };
    let width = 1usize
        .checked_add(m)
        .and_then(|w| w.checked_add(d))
        .filter(|&w| w <= 1 << 20)
        .ok_or_else(|| Error::parse(1, "too many columns"))?;

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(rest.as_bytes());
    let mut records = reader.records();
    match records.next() {
        None => return Err(Error::parse(2, "missing header")),
        Some(r) => {
            let r = r.map_err(|e| Error::parse(2, e.to_string()))?;
            if r.len() != width || !r.iter().zip(set.header()).all(|(a, b)| a == b) {
                return Err(Error::parse(2, "header does not match m and d"));
            }
        }
    }
    for r in records {
        let line = |r: &csv::StringRecord| r.position().map_or(0, |p| p.line() as usize + 1);
        let r = r.map_err(|e| {
            let l = e.position().map_or(0, |p| p.line() as usize + 1);
            Error::parse(l, e.to_string())
        })?;
        let ln = line(&r);
        if r.len() != width {
            return Err(Error::parse(
                ln,
                format!("expected {width} fields, found {}", r.len()),
            ));
        }
        let eval_index = r[0]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::parse(ln, format!("bad evaluation index '{}'", &r[0])))?;
        let mut values = Vec::with_capacity(m + d);
        for field in r.iter().skip(1) {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| Error::parse(ln, format!("bad number '{field}'")))?;
            if !v.is_finite() {
                return Err(Error::parse(ln, format!("non-finite value '{field}'")));
            }
            values.push(v);
        }
        let x = values.split_off(m);
        set.solutions.push(Solution {
            x,
            f: ObjectiveVector::new(values).map_err(|e| Error::parse(ln, e.to_string()))?,
            eval_index,
        });
    }
    Ok(set)
}

fn io_err(e: std::io::Error) -> Error {
    Error::Input(e.to_string())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Input(e.to_string())
}
