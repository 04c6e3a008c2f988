//! Choosing the final `k` solutions from a candidate set.
//!
//! All methods break ties toward the lower candidate index, so callers
//! should pass candidates in canonical order (as returned by the archives'
//! `extract_candidates`). Selection is meant to run in normalized objective
//! space.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::indicators::{exclusive_contribution, expected_loss, hypervolume_exact};
use crate::objective::{weakly_dominates, ObjectiveVector};
use crate::scalarize::binomial;

/// Samples per contribution estimate when hypervolume contributions are
/// estimated rather than computed.
pub const HV_MC_SAMPLES: usize = 100_000;

/// Largest objective count for which greedy contributions are exact.
pub const HV_EXACT_MAX_OBJECTIVES: usize = 4;

/// Largest number of subsets the brute-force oracle will enumerate.
pub const ORACLE_MAX_SUBSETS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SelectionMethod {
    DistanceGreedy,
    HvGreedy,
    LossGreedy,
}

impl SelectionMethod {
    pub const ALL: [SelectionMethod; 3] = [
        SelectionMethod::DistanceGreedy,
        SelectionMethod::HvGreedy,
        SelectionMethod::LossGreedy,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SelectionMethod::DistanceGreedy => "distance",
            SelectionMethod::HvGreedy => "hv",
            SelectionMethod::LossGreedy => "loss",
        }
    }
}

impl fmt::Display for SelectionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SelectionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "distance" | "distance-greedy" | "dist" => Ok(SelectionMethod::DistanceGreedy),
            "hv" | "hv-greedy" | "hypervolume" => Ok(SelectionMethod::HvGreedy),
            "loss" | "loss-greedy" | "igd+" | "igdplus" => Ok(SelectionMethod::LossGreedy),
            other => Err(Error::Input(format!("unknown selection method '{other}'"))),
        }
    }
}

/// A selection problem over a candidate set.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetRequest {
    pub candidates: Vec<ObjectiveVector>,
    pub k: usize,
    pub method: SelectionMethod,
    /// Required by [`SelectionMethod::HvGreedy`].
    pub hv_reference: Option<ObjectiveVector>,
    /// Picks the starting extreme for distance-based selection and seeds
    /// Monte Carlo contribution estimates.
    pub seed: u64,
}

/// Selected candidate indices, in selection order.
#[derive(Debug, Clone, PartialEq)]
pub struct Subset {
    pub indices: Vec<usize>,
    /// Final value of the method's criterion: hypervolume for the
    /// hypervolume method, expected loss for the loss method, and the
    /// distance of the last added point to its nearest selected point for
    /// the distance method.
    pub score: f64,
    /// Greedy steps (or oracle comparisons) that were decided by index.
    pub tie_breaks: usize,
}

impl Subset {
    pub fn points<P: Clone>(&self, candidates: &[P]) -> Vec<P> {
        self.indices.iter().map(|&i| candidates[i].clone()).collect()
    }
}

/// Dispatches on `request.method`.
pub fn select(request: &SubsetRequest) -> Result<Subset> {
    let s = &request.candidates;
    match request.method {
        SelectionMethod::DistanceGreedy => distance_greedy(s, request.k, request.seed),
        SelectionMethod::HvGreedy => {
            let r = request
                .hv_reference
                .as_ref()
                .ok_or_else(|| Error::param("hypervolume selection needs a reference point"))?;
            hv_greedy(s, request.k, r, request.seed)
        }
        SelectionMethod::LossGreedy => loss_greedy(s, request.k),
    }
}

fn validate<P: AsRef<[f64]>>(candidates: &[P], k: usize) -> Result<usize> {
    let first = candidates.first().ok_or(Error::Empty("candidate set"))?;
    let m = first.as_ref().len();
    for c in candidates {
        check_dim(m, c.as_ref().len())?;
    }
    if k == 0 || k > candidates.len() {
        return Err(Error::param(format!(
            "k = {k} outside [1, {}]",
            candidates.len()
        )));
    }
    Ok(m)
}

/// Index of the best value of each objective, ties to the lower index.
pub fn extreme_indices<P: AsRef<[f64]>>(candidates: &[P]) -> Vec<usize> {
    let Some(first) = candidates.first() else {
        return Vec::new();
    };
    (0..first.as_ref().len())
        .map(|j| {
            let mut best = 0;
            for (i, c) in candidates.iter().enumerate() {
                if c.as_ref()[j] < candidates[best].as_ref()[j] {
                    best = i;
                }
            }
            best
        })
        .collect()
}

/// Distance-based greedy selection starting from one of the extreme
/// solutions, chosen uniformly by `seed`.
pub fn distance_greedy<P: AsRef<[f64]>>(candidates: &[P], k: usize, seed: u64) -> Result<Subset> {
    let m = validate(candidates, k)?;
    let extremes = extreme_indices(candidates);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = extremes[rng.random_range(0..m)];
    distance_greedy_from(candidates, k, start)
}

/// Distance-based greedy selection from a given first member: repeatedly
/// adds the candidate farthest from its nearest selected member.
pub fn distance_greedy_from<P: AsRef<[f64]>>(candidates: &[P], k: usize, start: usize) -> Result<Subset> {
    validate(candidates, k)?;
    if start >= candidates.len() {
        return Err(Error::param(format!("start index {start} out of range")));
    }
    let dist = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    };
    let n = candidates.len();
    let mut selected = vec![false; n];
    let mut nearest = vec![f64::INFINITY; n];
    let mut indices = Vec::with_capacity(k);
    let mut tie_breaks = 0;
    let mut score = 0.0;
    let mut next = start;
    loop {
        selected[next] = true;
        indices.push(next);
        if indices.len() == k {
            break;
        }
        let added = candidates[next].as_ref();
        for (i, c) in candidates.iter().enumerate() {
            if !selected[i] {
                nearest[i] = nearest[i].min(dist(added, c.as_ref()));
            }
        }
        let mut best: Option<usize> = None;
        for i in 0..n {
            if selected[i] {
                continue;
            }
            match best {
                None => best = Some(i),
                Some(b) if nearest[i] > nearest[b] => best = Some(i),
                Some(b) if nearest[i] == nearest[b] => tie_breaks += 1,
                _ => {}
            }
        }
        next = best.expect("k <= n leaves an unselected candidate");
        score = nearest[next];
    }
    Ok(Subset {
        indices,
        score,
        tie_breaks,
    })
}

/// How a greedy step scores the hypervolume a candidate adds.
enum Contribution<'a> {
    Exact,
    MonteCarlo { seed: u64, samples: usize, reference: &'a [f64] },
}

impl Contribution<'_> {
    fn evaluate(&self, index: usize, p: &[f64], selected: &[&[f64]], reference: &[f64]) -> f64 {
        match self {
            Contribution::Exact => exclusive_contribution(p, selected, reference),
            Contribution::MonteCarlo { seed, samples, reference } => {
                mc_contribution(p, selected, reference, *seed, index as u64, *samples)
            }
        }
    }
}

/// Estimated exclusive contribution of `p` using a fixed sample stream per
/// candidate, so estimates shrink monotonically as the selection grows.
fn mc_contribution(p: &[f64], selected: &[&[f64]], reference: &[f64], seed: u64, stream: u64, samples: usize) -> f64 {
    if !p.iter().zip(reference).all(|(a, r)| a < r) {
        return 0.0;
    }
    let volume: f64 = p.iter().zip(reference).map(|(a, r)| r - a).product();
    if selected.is_empty() {
        return volume;
    }
    // Only selected points that overlap p's box can cover samples.
    let overlapping: Vec<Vec<f64>> = selected
        .iter()
        .map(|q| p.iter().zip(q.iter()).map(|(a, b)| a.max(*b)).collect::<Vec<f64>>())
        .filter(|l| l.iter().zip(reference).all(|(a, r)| a < r))
        .collect();
    if overlapping.is_empty() {
        return volume;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut sample = vec![0.0; p.len()];
    let mut uncovered = 0usize;
    for _ in 0..samples {
        for (i, s) in sample.iter_mut().enumerate() {
            *s = p[i] + rng.random::<f64>() * (reference[i] - p[i]);
        }
        if !overlapping.iter().any(|q| weakly_dominates(q, &sample)) {
            uncovered += 1;
        }
    }
    volume * uncovered as f64 / samples as f64
}

/// Hypervolume-based greedy selection: adds the candidate with the largest
/// hypervolume contribution at each step.
///
/// Contributions are exact for up to four objectives and estimated from
/// [`HV_MC_SAMPLES`] seeded samples beyond that. Since contributions can
/// only shrink as the selection grows, stale values are used as upper
/// bounds and only candidates that could still win are re-scored.
pub fn hv_greedy<P: AsRef<[f64]>>(candidates: &[P], k: usize, reference: &[f64], seed: u64) -> Result<Subset> {
    let m = validate(candidates, k)?;
    check_dim(m, reference.len())?;
    let mode = if m <= HV_EXACT_MAX_OBJECTIVES {
        Contribution::Exact
    } else {
        Contribution::MonteCarlo {
            seed,
            samples: HV_MC_SAMPLES,
            reference,
        }
    };
    hv_greedy_with(candidates, k, reference, &mode)
}

fn hv_greedy_with<P: AsRef<[f64]>>(candidates: &[P], k: usize, reference: &[f64], mode: &Contribution<'_>) -> Result<Subset> {
    let n = candidates.len();
    let mut bound: Vec<f64> = candidates
        .iter()
        .enumerate()
        .map(|(i, c)| mode.evaluate(i, c.as_ref(), &[], reference))
        .collect();
    let mut selected = vec![false; n];
    let mut indices: Vec<usize> = Vec::with_capacity(k);
    let mut tie_breaks = 0;
    let mut order: Vec<usize> = (0..n).collect();

    while indices.len() < k {
        let chosen: Vec<&[f64]> = indices.iter().map(|&i| candidates[i].as_ref()).collect();
        order.retain(|&i| !selected[i]);
        order.sort_by(|&a, &b| bound[b].total_cmp(&bound[a]).then(a.cmp(&b)));
        let mut best: Option<(usize, f64)> = None;
        for &j in &order {
            if let Some((bi, bv)) = best {
                if bound[j] < bv || (bound[j] == bv && j > bi) {
                    break;
                }
            }
            let fresh = if chosen.is_empty() {
                bound[j]
            } else {
                mode.evaluate(j, candidates[j].as_ref(), &chosen, reference)
            };
            bound[j] = fresh;
            match best {
                None => best = Some((j, fresh)),
                Some((bi, bv)) => {
                    if fresh > bv || (fresh == bv && j < bi) {
                        if fresh == bv {
                            tie_breaks += 1;
                        }
                        best = Some((j, fresh));
                    } else if fresh == bv {
                        tie_breaks += 1;
                    }
                }
            }
        }
        let (j, _) = best.expect("an unselected candidate remains");
        selected[j] = true;
        indices.push(j);
    }
    let points: Vec<&[f64]> = indices.iter().map(|&i| candidates[i].as_ref()).collect();
    let score = hypervolume_exact(&points, reference)?;
    Ok(Subset {
        indices,
        score,
        tie_breaks,
    })
}

/// Expected-loss greedy selection: adds the candidate that lowers the
/// expected loss over the whole candidate set the most.
pub fn loss_greedy<P: AsRef<[f64]>>(candidates: &[P], k: usize) -> Result<Subset> {
    validate(candidates, k)?;
    let n = candidates.len();
    let mut current = vec![f64::INFINITY; n];
    let mut selected = vec![false; n];
    let mut indices = Vec::with_capacity(k);
    let mut tie_breaks = 0;
    let mut best_total = f64::INFINITY;
    let loss = |a: &[f64], s: &[f64]| -> f64 {
        a.iter()
            .zip(s)
            .map(|(x, y)| {
                let d = (x - y).max(0.0);
                d * d
            })
            .sum::<f64>()
            .sqrt()
    };
    while indices.len() < k {
        let mut best: Option<(usize, f64)> = None;
        for a in 0..n {
            if selected[a] {
                continue;
            }
            let pa = candidates[a].as_ref();
            let total: f64 = candidates
                .iter()
                .zip(&current)
                .map(|(s, &cur)| cur.min(loss(pa, s.as_ref())))
                .sum();
            match best {
                None => best = Some((a, total)),
                Some((_, bv)) if total < bv => best = Some((a, total)),
                Some((_, bv)) if total == bv => tie_breaks += 1,
                _ => {}
            }
        }
        let (a, total) = best.expect("an unselected candidate remains");
        selected[a] = true;
        indices.push(a);
        best_total = total;
        let pa = candidates[a].as_ref();
        for (cur, s) in current.iter_mut().zip(candidates) {
            *cur = cur.min(loss(pa, s.as_ref()));
        }
    }
    Ok(Subset {
        indices,
        score: best_total / n as f64,
        tie_breaks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleCriterion {
    MaxHv,
    MinLoss,
}

/// Exhaustive search over all `k`-subsets. Ties go to the lexicographically
/// smallest index tuple.
pub fn exact_subset_oracle<P: AsRef<[f64]>>(
    candidates: &[P],
    k: usize,
    criterion: OracleCriterion,
    reference: Option<&[f64]>,
) -> Result<Subset> {
    let m = validate(candidates, k)?;
    let count = binomial(candidates.len() as u64, k as u64);
    if count > ORACLE_MAX_SUBSETS {
        return Err(Error::TooLarge(format!(
            "{count} subsets exceed the oracle limit of {ORACLE_MAX_SUBSETS}"
        )));
    }
    let reference = match criterion {
        OracleCriterion::MaxHv => {
            let r = reference.ok_or_else(|| Error::param("hypervolume oracle needs a reference point"))?;
            check_dim(m, r.len())?;
            Some(r)
        }
        OracleCriterion::MinLoss => None,
    };
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut tie_breaks = 0;
    for combo in (0..candidates.len()).combinations(k) {
        let pts: Vec<&[f64]> = combo.iter().map(|&i| candidates[i].as_ref()).collect();
        let score = match criterion {
            OracleCriterion::MaxHv => hypervolume_exact(&pts, reference.expect("checked above"))?,
            OracleCriterion::MinLoss => expected_loss(&pts, candidates)?,
        };
        let better = match &best {
            None => true,
            Some((_, b)) => match criterion {
                OracleCriterion::MaxHv => score > *b,
                OracleCriterion::MinLoss => score < *b,
            },
        };
        if better {
            best = Some((combo, score));
        } else if best.as_ref().is_some_and(|(_, b)| *b == score) {
            tie_breaks += 1;
        }
    }
    let (indices, score) = best.expect("at least one subset");
    Ok(Subset {
        indices,
        score,
        tie_breaks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: [[f64; 2]; 3] = [[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]];
    const LINE: [[f64; 2]; 3] = [[0.0, 2.0], [1.0, 1.0], [2.0, 0.0]];
    const REF: [f64; 2] = [1.1, 1.1];

    fn sorted(mut v: Vec<usize>) -> Vec<usize> {
        v.sort();
        v
    }

    #[test]
    fn distance_examples() {
        let all = distance_greedy(&TRIANGLE, 3, 7).unwrap();
        assert_eq!(sorted(all.indices), vec![0, 1, 2]);
        let two = distance_greedy_from(&TRIANGLE, 2, 0).unwrap();
        assert_eq!(two.indices, vec![0, 2]);
        assert!((two.score - 2f64.sqrt()).abs() < 1e-15);
        for seed in 0..20 {
            let one = distance_greedy(&TRIANGLE, 1, seed).unwrap();
            assert!(one.indices == vec![0] || one.indices == vec![2]);
        }
    }

    #[test]
    fn distance_seed_reaches_both_extremes() {
        let starts: std::collections::BTreeSet<usize> = (0..64)
            .map(|seed| distance_greedy(&TRIANGLE, 1, seed).unwrap().indices[0])
            .collect();
        assert_eq!(starts.into_iter().collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn hv_examples() {
        let one = hv_greedy(&TRIANGLE, 1, &REF, 0).unwrap();
        assert_eq!(one.indices, vec![1]);
        assert!((one.score - 0.36).abs() < 1e-12);
        let two = hv_greedy(&TRIANGLE, 2, &REF, 0).unwrap();
        assert_eq!(two.indices, vec![1, 0]);
        assert!((two.score - 0.41).abs() < 1e-12);
        let all = hv_greedy(&TRIANGLE, 3, &REF, 0).unwrap();
        assert_eq!(sorted(all.indices), vec![0, 1, 2]);
    }

    #[test]
    fn loss_examples() {
        let one = loss_greedy(&LINE, 1).unwrap();
        assert_eq!(one.indices, vec![1]);
        assert!((one.score - 2.0 / 3.0).abs() < 1e-15);
        let all = loss_greedy(&LINE, 3).unwrap();
        assert_eq!(sorted(all.indices), vec![0, 1, 2]);
        assert_eq!(all.score, 0.0);
    }

    #[test]
    fn oracle_examples() {
        let o = exact_subset_oracle(&LINE, 1, OracleCriterion::MinLoss, None).unwrap();
        assert_eq!(o.indices, vec![1]);
        assert!((o.score - 2.0 / 3.0).abs() < 1e-15);
        let h = exact_subset_oracle(&TRIANGLE, 2, OracleCriterion::MaxHv, Some(&REF)).unwrap();
        assert!(h.indices.contains(&1));
        assert!((h.score - 0.41).abs() < 1e-12);
        assert_eq!(h.indices, vec![0, 1]);
        let full = exact_subset_oracle(&LINE, 3, OracleCriterion::MinLoss, None).unwrap();
        assert_eq!(full.indices, vec![0, 1, 2]);
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(distance_greedy(&TRIANGLE, 4, 0), Err(Error::Parameter(_))));
        assert!(matches!(hv_greedy(&TRIANGLE, 0, &REF, 0), Err(Error::Parameter(_))));
        assert!(matches!(loss_greedy(&TRIANGLE, 5), Err(Error::Parameter(_))));
        let empty: [[f64; 2]; 0] = [];
        assert!(matches!(loss_greedy(&empty, 1), Err(Error::Empty(_))));
        let many: Vec<[f64; 2]> = (0..40).map(|i| [i as f64, 40.0 - i as f64]).collect();
        assert!(matches!(
            exact_subset_oracle(&many, 20, OracleCriterion::MinLoss, None),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn monte_carlo_contributions_track_exact_ones() {
        let pts: Vec<[f64; 5]> = vec![
            [0.1, 0.5, 0.3, 0.7, 0.2],
            [0.6, 0.1, 0.4, 0.2, 0.5],
            [0.3, 0.3, 0.1, 0.5, 0.6],
        ];
        let r = [1.1; 5];
        let chosen: Vec<&[f64]> = vec![&pts[1], &pts[2]];
        let exact = exclusive_contribution(&pts[0], &chosen, &r);
        let est = mc_contribution(&pts[0], &chosen, &r, 11, 0, HV_MC_SAMPLES);
        assert!((exact - est).abs() < 0.01 * exact.max(1e-3), "{exact} vs {est}");
    }

    #[test]
    fn method_names_round_trip() {
        for m in SelectionMethod::ALL {
            assert_eq!(m.as_str().parse::<SelectionMethod>().unwrap(), m);
        }
        assert!("random".parse::<SelectionMethod>().is_err());
    }
}
