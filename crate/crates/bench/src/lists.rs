//! Parsers for the comma-separated list arguments of the command line.

use std::str::FromStr;

use triset::problems::ProblemName;

use crate::error::{Error, Result};
use crate::plan::{Algorithm, ProblemEntry, SelectionEntry};

/// Longest seed list [`parse_seeds`] will expand.
pub const MAX_SEEDS: u64 = 1_000_000;

/// Parses `"1-5,9,12-13"` into seeds in the given order. Ranges are
/// inclusive.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for part in items(s) {
        let (a, b) = match part.split_once('-') {
            Some((a, b)) => (number::<u64>(a)?, number::<u64>(b)?),
            None => {
                let v = number(part)?;
                (v, v)
            }
        };
        if a > b {
            return Err(Error::plan(format!("descending seed range '{part}'")));
        }
        if b - a >= MAX_SEEDS - out.len() as u64 {
            return Err(Error::plan(format!("more than {MAX_SEEDS} seeds")));
        }
        out.extend(a..=b);
    }
    Ok(out)
}

pub fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    items(s).map(number).collect()
}

/// Parses `"DTLZ1:3,WFG4:5"`.
pub fn parse_problems(s: &str) -> Result<Vec<ProblemEntry>> {
    items(s)
        .map(|part| {
            let (name, m) = part
                .split_once(':')
                .ok_or_else(|| Error::plan(format!("expected NAME:M, got '{part}'")))?;
            Ok(ProblemEntry {
                problem: ProblemName::from_str(name)?,
                m: number(m)?,
            })
        })
        .collect()
}

pub fn parse_algorithms(s: &str) -> Result<Vec<Algorithm>> {
    items(s).map(Algorithm::from_str).collect()
}

/// Parses `"distance:15,hv:15"`.
pub fn parse_selections(s: &str) -> Result<Vec<SelectionEntry>> {
    items(s)
        .map(|part| {
            let (method, k) = part
                .split_once(':')
                .ok_or_else(|| Error::plan(format!("expected METHOD:K, got '{part}'")))?;
            Ok(SelectionEntry {
                method: method.parse()?,
                k: number(k)?,
            })
        })
        .collect()
}

fn items(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty())
}

fn number<T: FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::plan(format!("'{s}' is not a valid number")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use triset::selection::SelectionMethod;

    #[test]
    fn seeds() {
        assert_eq!(parse_seeds("1-3, 7,9-9").unwrap(), vec![1, 2, 3, 7, 9]);
        assert_eq!(parse_seeds("1-51").unwrap().len(), 51);
        assert!(parse_seeds("").unwrap().is_empty());
        assert!(parse_seeds("3-1").is_err());
        assert!(parse_seeds("x").is_err());
        assert!(parse_seeds("0-18446744073709551615").is_err());
        assert!(parse_seeds("0-600000,0-600000").is_err());
    }

    #[test]
    fn problems_and_selections() {
        let p = parse_problems("dtlz1:3,WFG3:5").unwrap();
        assert_eq!(p[1].problem, ProblemName::Wfg3);
        assert_eq!(p[1].m, 5);
        assert!(parse_problems("DTLZ1").is_err());
        let s = parse_selections("hv:15,loss:3").unwrap();
        assert_eq!(s[0].method, SelectionMethod::HvGreedy);
        assert_eq!(s[1].k, 3);
        assert_eq!(parse_algorithms("tch, pbi").unwrap(), vec![Algorithm::Tch, Algorithm::Pbi]);
    }
}
