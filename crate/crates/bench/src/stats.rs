//! Two-sided Wilcoxon rank-sum test.

use statrs::function::erf::erfc;

use crate::error::{Error, Result};

pub const ALPHA: f64 = 0.05;

/// Largest combined sample size for which the null distribution is
/// enumerated instead of approximated.
pub const EXACT_MAX_TOTAL: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankSumMethod {
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSumTest {
    /// Rank sum of the first sample, with midranks for ties.
    pub rank_sum: f64,
    pub p_value: f64,
    pub method: RankSumMethod,
}

impl RankSumTest {
    pub fn reject(&self) -> bool {
        self.p_value < ALPHA
    }
}

/// Exact test for small samples, normal approximation otherwise.
pub fn wilcoxon_rank_sum(xs: &[f64], ys: &[f64]) -> Result<RankSumTest> {
    if xs.len() + ys.len() <= EXACT_MAX_TOTAL {
        rank_sum_exact(xs, ys)
    } else {
        rank_sum_normal(xs, ys)
    }
}

struct Ranked {
    /// Twice the midrank of every value, so ties stay integral.
    doubled: Vec<u64>,
    rank_sum_x: f64,
    tie_term: f64,
    all_tied: bool,
}

fn rank(xs: &[f64], ys: &[f64]) -> Result<Ranked> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::Data("rank-sum test needs two non-empty samples".into()));
    }
    if xs.iter().chain(ys).any(|v| v.is_nan()) {
        return Err(Error::Data("rank-sum test got a NaN".into()));
    }
    let mut all: Vec<(f64, bool)> = xs.iter().map(|&v| (v, true)).chain(ys.iter().map(|&v| (v, false))).collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = all.len();
    let mut doubled = vec![0u64; n];
    let mut rank_sum_x = 0.0;
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && all[j + 1].0 == all[i].0 {
            j += 1;
        }
        // positions i..=j share ranks i+1..=j+1
        let twice = (i + 1 + j + 1) as u64;
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        for (d, item) in doubled[i..=j].iter_mut().zip(&all[i..=j]) {
            *d = twice;
            if item.1 {
                rank_sum_x += twice as f64 / 2.0;
            }
        }
        i = j + 1;
    }
    Ok(Ranked {
        all_tied: all[0].0 == all[n - 1].0,
        doubled,
        rank_sum_x,
        tie_term,
    })
}

/// Exact null distribution of the rank sum, enumerated over every way of
/// assigning the observed (mid)ranks to the first sample.
pub fn rank_sum_exact(xs: &[f64], ys: &[f64]) -> Result<RankSumTest> {
    let r = rank(xs, ys)?;
    let (n1, n) = (xs.len(), xs.len() + ys.len());
    if n > 60 {
        return Err(Error::Data(format!("exact rank-sum test limited to 60 values, got {n}")));
    }
    if r.all_tied {
        return Ok(RankSumTest { rank_sum: r.rank_sum_x, p_value: 1.0, method: RankSumMethod::Exact });
    }
    let max_sum: u64 = r.doubled.iter().sum();
    let width = max_sum as usize + 1;
    // ways[j][s]: subsets of size j with doubled rank sum s
    let mut ways = vec![vec![0f64; width]; n1 + 1];
    ways[0][0] = 1.0;
    for &d in &r.doubled {
        let d = d as usize;
        for j in (1..=n1).rev() {
            let (lo, hi) = ways.split_at_mut(j);
            for s in (d..width).rev() {
                hi[0][s] += lo[j - 1][s - d];
            }
        }
    }
    let total: f64 = ways[n1].iter().sum();
    let mean2 = n1 as f64 * (n + 1) as f64;
    let observed = (2.0 * r.rank_sum_x - mean2).abs();
    let extreme: f64 = ways[n1]
        .iter()
        .enumerate()
        .filter(|(s, _)| (*s as f64 - mean2).abs() >= observed - 1e-9)
        .map(|(_, w)| w)
        .sum();
    Ok(RankSumTest {
        rank_sum: r.rank_sum_x,
        p_value: (extreme / total).min(1.0),
        method: RankSumMethod::Exact,
    })
}

/// Normal approximation with continuity and tie correction.
pub fn rank_sum_normal(xs: &[f64], ys: &[f64]) -> Result<RankSumTest> {
    let r = rank(xs, ys)?;
    let (n1, n2) = (xs.len() as f64, ys.len() as f64);
    let n = n1 + n2;
    let u = r.rank_sum_x - n1 * (n1 + 1.0) / 2.0;
    let mean = n1 * n2 / 2.0;
    let var = n1 * n2 / 12.0 * ((n + 1.0) - r.tie_term / (n * (n - 1.0)));
    let p_value = if r.all_tied || !(var > 0.0) {
        1.0
    } else {
        let z = ((u - mean).abs() - 0.5).max(0.0) / var.sqrt();
        erfc(z / std::f64::consts::SQRT_2).min(1.0)
    };
    Ok(RankSumTest {
        rank_sum: r.rank_sum_x,
        p_value,
        method: RankSumMethod::Normal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_versus_three() {
        let xs = [1.0, 2.0, 3.0];
        let ys = [4.0, 5.0, 6.0];
        let exact = wilcoxon_rank_sum(&xs, &ys).unwrap();
        assert_eq!(exact.method, RankSumMethod::Exact);
        assert!((exact.p_value - 0.1).abs() < 1e-12);
        assert_eq!(exact.rank_sum, 6.0);
        let normal = rank_sum_normal(&xs, &ys).unwrap();
        assert!((normal.p_value - 0.0809).abs() < 5e-5, "{}", normal.p_value);
        assert!(!exact.reject());
    }

    #[test]
    fn identical_samples() {
        let xs = [0.3, 0.1, 0.2, 0.5, 0.4];
        let t = wilcoxon_rank_sum(&xs, &xs).unwrap();
        assert!(!t.reject());
        assert!((t.p_value - 1.0).abs() < 1e-12);
        let same = [2.0; 30];
        assert_eq!(wilcoxon_rank_sum(&same, &same).unwrap().p_value, 1.0);
        assert_eq!(rank_sum_exact(&same[..5], &same[..5]).unwrap().p_value, 1.0);
    }

    #[test]
    fn complete_separation_of_51() {
        let xs: Vec<f64> = (0..51).map(|i| 100.0 + i as f64).collect();
        let ys: Vec<f64> = (0..51).map(|i| i as f64).collect();
        let t = wilcoxon_rank_sum(&xs, &ys).unwrap();
        assert_eq!(t.method, RankSumMethod::Normal);
        // scipy.stats.mannwhitneyu, asymptotic with continuity correction
        let expected = 3.3036815016661564e-18;
        assert!((t.p_value - expected).abs() < 1e-6 * expected, "{}", t.p_value);
        assert!(t.reject());
    }

    #[test]
    fn exact_handles_ties() {
        // brute-force enumeration of all 10 assignments gives 3/10
        let t = rank_sum_exact(&[1.0, 2.0], &[2.0, 3.0, 3.0]).unwrap();
        assert!((t.p_value - 0.3).abs() < 1e-12, "{}", t.p_value);
        let t = rank_sum_exact(&[1.0, 1.0], &[2.0, 3.0]).unwrap();
        assert!((t.p_value - 1.0 / 3.0).abs() < 1e-12, "{}", t.p_value);
    }

    #[test]
    fn symmetric_in_sample_order() {
        let xs = [0.9, 0.4, 0.7, 0.66, 0.2, 0.81];
        let ys = [0.3, 0.1, 0.5, 0.45, 0.25, 0.05, 0.6];
        for f in [rank_sum_exact, rank_sum_normal] {
            let a = f(&xs, &ys).unwrap().p_value;
            let b = f(&ys, &xs).unwrap().p_value;
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_sample_is_an_error() {
        assert!(wilcoxon_rank_sum(&[], &[1.0]).is_err());
    }
}
