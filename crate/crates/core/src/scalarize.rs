//! Simplex-lattice weight vectors and the Tchebycheff / PBI scalarizing
//! functions shared by the MOEA/D main loop and the scalarizing archive.

use std::ops::Deref;

use crate::error::{check_dim, Error, Result};
use crate::objective::ObjectiveVector;

/// Floor applied to zero weights in the Tchebycheff function.
pub const MIN_WEIGHT: f64 = 1e-6;

/// Default PBI penalty.
pub const DEFAULT_PBI_THETA: f64 = 5.0;

/// A weight vector on the simplex lattice with resolution `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    w: Vec<f64>,
    numerators: Vec<u32>,
}

impl WeightVector {
    fn from_numerators(numerators: Vec<u32>, h: u32) -> Self {
        let w = numerators.iter().map(|&j| j as f64 / h as f64).collect();
        WeightVector { w, numerators }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }

    /// Integer numerators `j` with `w_i = j / H`.
    pub fn numerators(&self) -> &[u32] {
        &self.numerators
    }
}

impl Deref for WeightVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.w
    }
}

/// The scalarizing function used for decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scalarizer {
    Tchebycheff,
    Pbi { theta: f64 },
}

impl Scalarizer {
    pub fn pbi() -> Self {
        Scalarizer::Pbi {
            theta: DEFAULT_PBI_THETA,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Scalarizer::Pbi { theta } if !(theta > 0.0 && theta.is_finite()) => {
                Err(Error::param(format!("PBI theta must be positive, got {theta}")))
            }
            _ => Ok(()),
        }
    }

    /// Short algorithm tag: `tch` or `pbi`.
    pub fn tag(&self) -> &'static str {
        match self {
            Scalarizer::Tchebycheff => "tch",
            Scalarizer::Pbi { .. } => "pbi",
        }
    }

    /// Scalarizing value of `f` for weight `w` and reference point `z`;
    /// smaller is better.
    pub fn evaluate(&self, f: &[f64], w: &[f64], z: &[f64]) -> Result<f64> {
        check_dim(w.len(), f.len())?;
        check_dim(z.len(), f.len())?;
        Ok(match *self {
            Scalarizer::Tchebycheff => tchebycheff_unchecked(f, w, z),
            Scalarizer::Pbi { theta } => pbi_unchecked(f, w, z, theta),
        })
    }
}

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Number of lattice vectors for `m` objectives and resolution `h`.
pub fn lattice_size(m: usize, h: usize) -> u64 {
    binomial((m + h - 1) as u64, (m - 1) as u64)
}

/// The resolution `H` whose lattice has exactly `size` vectors, if any.
pub fn lattice_resolution_for_size(m: usize, size: usize) -> Option<usize> {
    if m < 2 {
        return None;
    }
    let mut h = 1;
    loop {
        let n = lattice_size(m, h);
        if n == size as u64 {
            return Some(h);
        }
        if n > size as u64 {
            return None;
        }
        h += 1;
    }
}

/// All weight vectors with components in `{0/H, ..., H/H}` summing to one,
/// in lexicographic order of their integer numerators.
pub fn simplex_lattice(m: usize, h: usize) -> Result<Vec<WeightVector>> {
    if m < 2 {
        return Err(Error::param(format!("lattice needs m >= 2, got {m}")));
    }
    if h == 0 {
        return Err(Error::param("lattice resolution H must be >= 1"));
    }
    let total = lattice_size(m, h);
    if total > 50_000_000 {
        return Err(Error::TooLarge(format!("lattice of {total} vectors")));
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut current = vec![0u32; m];
    fill_lattice(&mut out, &mut current, 0, h as u32, h as u32);
    Ok(out)
}

fn fill_lattice(out: &mut Vec<WeightVector>, current: &mut [u32], pos: usize, left: u32, h: u32) {
    if pos + 1 == current.len() {
        current[pos] = left;
        out.push(WeightVector::from_numerators(current.to_vec(), h));
        return;
    }
    for j in 0..=left {
        current[pos] = j;
        fill_lattice(out, current, pos + 1, left - j, h);
    }
}

/// Tchebycheff value `max_i max(w_i, 1e-6) * |f_i - z_i|`.
pub fn tchebycheff(f: &[f64], w: &[f64], z: &[f64]) -> Result<f64> {
    Scalarizer::Tchebycheff.evaluate(f, w, z)
}

/// Penalty-based boundary intersection `d1 + theta * d2`.
pub fn pbi(f: &[f64], w: &[f64], z: &[f64], theta: f64) -> Result<f64> {
    Scalarizer::Pbi { theta }.evaluate(f, w, z)
}

#[inline]
pub(crate) fn tchebycheff_unchecked(f: &[f64], w: &[f64], z: &[f64]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for i in 0..f.len() {
        let v = w[i].max(MIN_WEIGHT) * (f[i] - z[i]).abs();
        if v > best {
            best = v;
        }
    }
    best
}

#[inline]
pub(crate) fn pbi_unchecked(f: &[f64], w: &[f64], z: &[f64], theta: f64) -> f64 {
    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    let d1 = f
        .iter()
        .zip(z)
        .zip(w)
        .map(|((fi, zi), wi)| (fi - zi) * wi)
        .sum::<f64>()
        .abs()
        / norm;
    let d2 = f
        .iter()
        .zip(z)
        .zip(w)
        .map(|((fi, zi), wi)| {
            let diff = fi - (zi + d1 * wi / norm);
            diff * diff
        })
        .sum::<f64>()
        .sqrt();
    d1 + theta * d2
}

/// Componentwise minimum of the ideal estimate `z` and `f`.
pub fn update_ideal(z: &ObjectiveVector, f: &[f64]) -> Result<ObjectiveVector> {
    check_dim(z.len(), f.len())?;
    Ok(ObjectiveVector::from_vec_unchecked(
        z.iter().zip(f).map(|(a, b)| a.min(*b)).collect(),
    ))
}

/// A weight set prepared for repeated scalarization against many points.
///
/// Tchebycheff weights are stored already floored; PBI weights are stored
/// as unit vectors.
#[derive(Debug, Clone)]
pub(crate) struct WeightTable {
    scalarizer: Scalarizer,
    m: usize,
    flat: Vec<f64>,
}

impl WeightTable {
    pub(crate) fn new(scalarizer: Scalarizer, weights: &[WeightVector]) -> Self {
        let m = weights.first().map_or(0, |w| w.len());
        let mut flat = Vec::with_capacity(weights.len() * m);
        for w in weights {
            match scalarizer {
                Scalarizer::Tchebycheff => flat.extend(w.iter().map(|v| v.max(MIN_WEIGHT))),
                Scalarizer::Pbi { .. } => {
                    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
                    flat.extend(w.iter().map(|v| v / norm));
                }
            }
        }
        WeightTable { scalarizer, m, flat }
    }

    pub(crate) fn len(&self) -> usize {
        if self.m == 0 {
            0
        } else {
            self.flat.len() / self.m
        }
    }

    #[inline]
    pub(crate) fn value(&self, i: usize, f: &[f64], z: &[f64]) -> f64 {
        let w = &self.flat[i * self.m..(i + 1) * self.m];
        match self.scalarizer {
            Scalarizer::Tchebycheff => {
                let mut best = f64::NEG_INFINITY;
                for j in 0..self.m {
                    let v = w[j] * (f[j] - z[j]).abs();
                    if v > best {
                        best = v;
                    }
                }
                best
            }
            Scalarizer::Pbi { theta } => {
                // w is already a unit vector.
                let mut d1 = 0.0;
                for j in 0..self.m {
                    d1 += (f[j] - z[j]) * w[j];
                }
                let d1 = d1.abs();
                let mut d2 = 0.0;
                for j in 0..self.m {
                    let diff = f[j] - (z[j] + d1 * w[j]);
                    d2 += diff * diff;
                }
                d1 + theta * d2.sqrt()
            }
        }
    }
}
