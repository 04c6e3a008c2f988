//! Quality indicators and the expected-loss criterion.
//!
//! The expected loss of choosing from a subset `A` instead of the full
//! candidate set `S` is the mean, over `s` in `S`, of the smallest
//! one-sided distance `sqrt(sum_i max(0, a_i - s_i)^2)` from any `a` in `A`.
//! It coincides with IGD+ of `A` against the reference set `S`.

mod hypervolume;

pub use hypervolume::{hypervolume_exact, hypervolume_mc, MonteCarloEstimate};
pub(crate) use hypervolume::exclusive_contribution;

use crate::error::{check_dim, Error, Result};
use crate::objective::ObjectiveVector;

/// Default hypervolume reference coordinate in normalized space.
pub const DEFAULT_HV_REFERENCE: f64 = 1.1;

/// Indicator settings shared by the reporting code.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorContext {
    hv_reference: ObjectiveVector,
    reference_set: Option<Vec<ObjectiveVector>>,
}

impl IndicatorContext {
    pub fn new(hv_reference: ObjectiveVector, reference_set: Option<Vec<ObjectiveVector>>) -> Result<Self> {
        if hv_reference.iter().any(|&v| v <= 0.0) {
            return Err(Error::param("hypervolume reference must be positive in normalized space"));
        }
        if let Some(set) = &reference_set {
            if set.is_empty() {
                return Err(Error::Empty("reference set"));
            }
            for r in set {
                check_dim(hv_reference.len(), r.len())?;
            }
        }
        Ok(IndicatorContext {
            hv_reference,
            reference_set,
        })
    }

    /// `(1.1, ..., 1.1)` and no reference set.
    pub fn normalized_default(m: usize) -> Self {
        IndicatorContext {
            hv_reference: ObjectiveVector::splat(DEFAULT_HV_REFERENCE, m),
            reference_set: None,
        }
    }

    pub fn hv_reference(&self) -> &ObjectiveVector {
        &self.hv_reference
    }

    pub fn reference_set(&self) -> Option<&[ObjectiveVector]> {
        self.reference_set.as_deref()
    }
}

fn check_sets<A: AsRef<[f64]>, B: AsRef<[f64]>>(a: &[A], b: &[B], a_name: &'static str, b_name: &'static str) -> Result<usize> {
    let first = a.first().ok_or(Error::Empty(a_name))?;
    if b.is_empty() {
        return Err(Error::Empty(b_name));
    }
    let m = first.as_ref().len();
    for p in a {
        check_dim(m, p.as_ref().len())?;
    }
    for p in b {
        check_dim(m, p.as_ref().len())?;
    }
    Ok(m)
}

#[inline]
fn loss_pair_unchecked(a: &[f64], s: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (ai, si) in a.iter().zip(s) {
        let d = (ai - si).max(0.0);
        sum += d * d;
    }
    sum.sqrt()
}

/// Loss of settling for `a` when `s` was preferred: only the objectives in
/// which `a` is worse count.
pub fn loss_pair(a: &[f64], s: &[f64]) -> Result<f64> {
    check_dim(a.len(), s.len())?;
    Ok(loss_pair_unchecked(a, s))
}

fn subset_loss_unchecked<A: AsRef<[f64]>>(subset: &[A], s: &[f64]) -> f64 {
    subset
        .iter()
        .map(|a| loss_pair_unchecked(a.as_ref(), s))
        .fold(f64::INFINITY, f64::min)
}

/// Smallest loss over the members of `subset` for preferred point `s`.
pub fn subset_loss<A: AsRef<[f64]>>(subset: &[A], s: &[f64]) -> Result<f64> {
    check_sets(subset, std::slice::from_ref(&s), "subset", "point")?;
    Ok(subset_loss_unchecked(subset, s))
}

/// Mean subset loss over every candidate in `candidates`, each equally
/// likely to be the preferred one.
pub fn expected_loss<A: AsRef<[f64]>, S: AsRef<[f64]>>(subset: &[A], candidates: &[S]) -> Result<f64> {
    check_sets(subset, candidates, "subset", "candidate set")?;
    let total: f64 = candidates
        .iter()
        .map(|s| subset_loss_unchecked(subset, s.as_ref()))
        .sum();
    Ok(total / candidates.len() as f64)
}

/// IGD+ of `approximation` against `reference`.
///
/// Written independently of [`expected_loss`] but with the same
/// floating-point operation order, so the two agree bit for bit.
pub fn igd_plus<A: AsRef<[f64]>, R: AsRef<[f64]>>(approximation: &[A], reference: &[R]) -> Result<f64> {
    check_sets(approximation, reference, "approximation set", "reference set")?;
    let mut total = 0.0;
    for r in reference {
        let r = r.as_ref();
        let mut nearest = f64::INFINITY;
        for a in approximation {
            let mut sq = 0.0;
            for (ai, ri) in a.as_ref().iter().zip(r) {
                let plus = (ai - ri).max(0.0);
                sq += plus * plus;
            }
            nearest = nearest.min(sq.sqrt());
        }
        total += nearest;
    }
    Ok(total / reference.len() as f64)
}

/// Inverted generational distance with Euclidean point distances.
pub fn igd<A: AsRef<[f64]>, R: AsRef<[f64]>>(approximation: &[A], reference: &[R]) -> Result<f64> {
    check_sets(approximation, reference, "approximation set", "reference set")?;
    let total: f64 = reference
        .iter()
        .map(|r| {
            approximation
                .iter()
                .map(|a| {
                    a.as_ref()
                        .iter()
                        .zip(r.as_ref())
                        .map(|(x, y)| (x - y) * (x - y))
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(total / reference.len() as f64)
}
