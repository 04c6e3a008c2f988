use std::cmp::Ordering;
use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Result};
use crate::objective::{nondominated_indices, weakly_dominates};

/// Keeps the points strictly better than `reference` in every objective;
/// anything else bounds a box of zero volume.
pub(crate) fn clip_below_reference<P: AsRef<[f64]>>(points: &[P], reference: &[f64]) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|p| p.as_ref())
        .filter(|p| p.iter().zip(reference).all(|(a, r)| a < r))
        .map(|p| p.to_vec())
        .collect()
}

/// Exact hypervolume of the region dominated by `points` and bounded by
/// `reference`. Points not strictly better than the reference in every
/// objective contribute nothing.
pub fn hypervolume_exact<P: AsRef<[f64]>>(points: &[P], reference: &[f64]) -> Result<f64> {
    for p in points {
        check_dim(reference.len(), p.as_ref().len())?;
    }
    let clipped = clip_below_reference(points, reference);
    Ok(hv_filtered(clipped, reference))
}

fn hv_filtered(points: Vec<Vec<f64>>, reference: &[f64]) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let points = if points.len() > 1 {
        nondominated_indices(&points)
            .expect("non-empty and dimension-checked")
            .into_iter()
            .map(|i| points[i].clone())
            .collect()
    } else {
        points
    };
    hv_nondominated(points, reference)
}

fn hv_nondominated(mut points: Vec<Vec<f64>>, reference: &[f64]) -> f64 {
    match reference.len() {
        0 => 0.0,
        1 => reference[0] - points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min),
        2 => hv2d(&mut points, reference),
        3 => hv3d(&mut points, reference),
        _ => hv_recursive(points, reference),
    }
}

fn hv2d(points: &mut [Vec<f64>], reference: &[f64]) -> f64 {
    points.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut area = 0.0;
    let mut ceiling = reference[1];
    for p in points.iter() {
        if p[1] < ceiling {
            area += (reference[0] - p[0]) * (ceiling - p[1]);
            ceiling = p[1];
        }
    }
    area
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Sweep along the third objective while maintaining the 2-D staircase of
/// the points seen so far and its area.
fn hv3d(points: &mut [Vec<f64>], reference: &[f64]) -> f64 {
    points.sort_by(|a, b| a[2].total_cmp(&b[2]));
    let (rx, ry, rz) = (reference[0], reference[1], reference[2]);
    // x -> y, with y strictly decreasing in x.
    let mut stair: BTreeMap<Key, f64> = BTreeMap::new();
    let mut area = 0.0;
    let mut volume = 0.0;
    let mut removed: Vec<(f64, f64)> = Vec::new();

    for (idx, p) in points.iter().enumerate() {
        let (x, y) = (p[0], p[1]);
        let covered = stair
            .range(..=Key(x))
            .next_back()
            .is_some_and(|(_, &py)| py <= y);
        if !covered {
            let bound = stair
                .range(..Key(x))
                .next_back()
                .map_or(ry, |(_, &py)| py);
            removed.clear();
            let mut next_x = rx;
            for (k, &qy) in stair.range(Key(x)..) {
                if qy >= y {
                    removed.push((k.0, qy));
                } else {
                    next_x = k.0;
                    break;
                }
            }
            let mut cur_x = x;
            let mut cur_h = bound;
            for &(qx, qy) in &removed {
                area += (qx - cur_x) * (cur_h - y);
                cur_x = qx;
                cur_h = qy;
            }
            area += (next_x - cur_x) * (cur_h - y);
            for &(qx, _) in &removed {
                stair.remove(&Key(qx));
            }
            stair.insert(Key(x), y);
        }
        let next_z = points.get(idx + 1).map_or(rz, |q| q[2]);
        volume += area * (next_z - p[2]);
    }
    volume
}

/// Exclusive-contribution recursion: with points sorted by the last
/// objective in descending order, every limit point formed with a later
/// point shares the earlier point's last coordinate, so each exclusive
/// contribution is a slab times a hypervolume one dimension lower.
fn hv_recursive(mut points: Vec<Vec<f64>>, reference: &[f64]) -> f64 {
    let m = reference.len();
    let last = m - 1;
    points.sort_by(|a, b| b[last].total_cmp(&a[last]));
    let lower_ref = &reference[..last];
    let mut total = 0.0;
    for k in 0..points.len() {
        let p = &points[k];
        let height = reference[last] - p[last];
        if height <= 0.0 {
            continue;
        }
        let own: f64 = p[..last]
            .iter()
            .zip(lower_ref)
            .map(|(a, r)| r - a)
            .product();
        let limits: Vec<Vec<f64>> = points[k + 1..]
            .iter()
            .map(|q| p[..last].iter().zip(&q[..last]).map(|(a, b)| a.max(*b)).collect())
            .collect();
        let shadowed = hv_filtered(limits, lower_ref);
        total += height * (own - shadowed);
    }
    total
}

/// Hypervolume dominated by `p` alone and by none of `others`.
pub(crate) fn exclusive_contribution(p: &[f64], others: &[&[f64]], reference: &[f64]) -> f64 {
    if !p.iter().zip(reference).all(|(a, r)| a < r) {
        return 0.0;
    }
    let own: f64 = p.iter().zip(reference).map(|(a, r)| r - a).product();
    let limits: Vec<Vec<f64>> = others
        .iter()
        .map(|q| p.iter().zip(q.iter()).map(|(a, b)| a.max(*b)).collect())
        .filter(|l: &Vec<f64>| l.iter().zip(reference).all(|(a, r)| a < r))
        .collect();
    own - hv_filtered(limits, reference)
}

/// A Monte Carlo hypervolume estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// Hypervolume estimated by uniform sampling over the box spanned by the
/// componentwise minimum of `points` and `reference`.
pub fn hypervolume_mc<P: AsRef<[f64]>>(
    points: &[P],
    reference: &[f64],
    n_samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    for p in points {
        check_dim(reference.len(), p.as_ref().len())?;
    }
    let zero = MonteCarloEstimate {
        value: 0.0,
        std_error: 0.0,
    };
    let clipped = clip_below_reference(points, reference);
    if clipped.is_empty() || n_samples == 0 {
        return Ok(zero);
    }
    let m = reference.len();
    let lower: Vec<f64> = (0..m)
        .map(|i| clipped.iter().map(|p| p[i]).fold(f64::INFINITY, f64::min))
        .collect();
    let box_volume: f64 = lower.iter().zip(reference).map(|(l, r)| r - l).product();
    if !(box_volume > 0.0) {
        return Ok(zero);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample = vec![0.0; m];
    let mut hits = 0usize;
    for _ in 0..n_samples {
        for (i, s) in sample.iter_mut().enumerate() {
            *s = lower[i] + rng.random::<f64>() * (reference[i] - lower[i]);
        }
        if clipped.iter().any(|p| weakly_dominates(p, &sample)) {
            hits += 1;
        }
    }
    let frac = hits as f64 / n_samples as f64;
    Ok(MonteCarloEstimate {
        value: frac * box_volume,
        std_error: box_volume * (frac * (1.0 - frac) / n_samples as f64).sqrt(),
    })
}
