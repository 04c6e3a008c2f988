//! Objective-space primitives: objective vectors, evaluated solutions,
//! Pareto dominance, non-dominated filtering and normalization.
//!
//! Every problem in this crate is a minimization problem.

use std::cmp::Ordering;
use std::ops::Deref;

use crate::error::{check_dim, Error, Result};

/// A point in objective space.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveVector(Vec<f64>);

impl ObjectiveVector {
    /// Builds an objective vector, rejecting empty or non-finite input.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("objective vector"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Input(format!("non-finite objective value {v}")));
        }
        Ok(ObjectiveVector(values))
    }

    pub(crate) fn from_vec_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()));
        ObjectiveVector(values)
    }

    /// A vector of `m` copies of `value`.
    pub fn splat(value: f64, m: usize) -> Self {
        ObjectiveVector(vec![value; m])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Lexicographic total order on the components, used as the canonical
    /// order of candidate sets.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        lex_cmp(&self.0, &other.0)
    }
}

impl Deref for ObjectiveVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for ObjectiveVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        ObjectiveVector::new(values)
    }
}

impl From<ObjectiveVector> for Vec<f64> {
    fn from(v: ObjectiveVector) -> Self {
        v.0
    }
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    a.len().cmp(&b.len())
}

/// A decision vector together with its objective vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: Vec<f64>,
    pub f: ObjectiveVector,
    /// Sequence number of the evaluation that produced this solution.
    pub eval_index: usize,
}

/// Ideal and nadir points framing the normalized objective space.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationBounds {
    ideal: ObjectiveVector,
    nadir: ObjectiveVector,
}

impl NormalizationBounds {
    pub fn new(ideal: ObjectiveVector, nadir: ObjectiveVector) -> Result<Self> {
        check_dim(ideal.len(), nadir.len())?;
        if ideal.iter().zip(nadir.iter()).any(|(lo, hi)| lo >= hi) {
            return Err(Error::param("ideal point must be strictly below the nadir point"));
        }
        Ok(NormalizationBounds { ideal, nadir })
    }

    pub fn ideal(&self) -> &ObjectiveVector {
        &self.ideal
    }

    pub fn nadir(&self) -> &ObjectiveVector {
        &self.nadir
    }

    pub fn dim(&self) -> usize {
        self.ideal.len()
    }

    /// Maps `f` into the frame where the ideal is all-zeros and the nadir
    /// all-ones.
    pub fn normalize(&self, f: &[f64]) -> Result<ObjectiveVector> {
        check_dim(self.dim(), f.len())?;
        let v = f
            .iter()
            .zip(self.ideal.iter().zip(self.nadir.iter()))
            .map(|(fi, (lo, hi))| (fi - lo) / (hi - lo))
            .collect();
        Ok(ObjectiveVector::from_vec_unchecked(v))
    }

    pub fn denormalize(&self, f: &[f64]) -> Result<ObjectiveVector> {
        check_dim(self.dim(), f.len())?;
        let v = f
            .iter()
            .zip(self.ideal.iter().zip(self.nadir.iter()))
            .map(|(fi, (lo, hi))| lo + fi * (hi - lo))
            .collect();
        Ok(ObjectiveVector::from_vec_unchecked(v))
    }

    pub fn normalize_all(&self, points: &[ObjectiveVector]) -> Result<Vec<ObjectiveVector>> {
        points.iter().map(|p| self.normalize(p)).collect()
    }
}

/// Free-function form of [`NormalizationBounds::normalize`].
pub fn normalize(f: &[f64], bounds: &NormalizationBounds) -> Result<ObjectiveVector> {
    bounds.normalize(f)
}

/// Pareto dominance for minimization: `u` is no worse everywhere and
/// strictly better somewhere.
pub fn dominates(u: &[f64], v: &[f64]) -> Result<bool> {
    check_dim(u.len(), v.len())?;
    Ok(dominates_unchecked(u, v))
}

#[inline]
pub(crate) fn dominates_unchecked(u: &[f64], v: &[f64]) -> bool {
    let mut strictly = false;
    for (a, b) in u.iter().zip(v) {
        if a > b {
            return false;
        }
        if a < b {
            strictly = true;
        }
    }
    strictly
}

/// `u` is componentwise no worse than `v`.
#[inline]
pub(crate) fn weakly_dominates(u: &[f64], v: &[f64]) -> bool {
    u.iter().zip(v).all(|(a, b)| a <= b)
}

fn same_bits(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}

/// Indices of the non-dominated, duplicate-free members of `points`, in
/// canonical (lexicographic) order of their objective vectors.
///
/// Duplicates are exact bitwise matches; the first occurrence is kept.
pub fn nondominated_indices<P: AsRef<[f64]>>(points: &[P]) -> Result<Vec<usize>> {
    let first = points.first().ok_or(Error::Empty("point set"))?;
    let m = first.as_ref().len();
    for p in points {
        check_dim(m, p.as_ref().len())?;
    }

    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| lex_cmp(points[a].as_ref(), points[b].as_ref()).then(a.cmp(&b)));

    // In lexicographic order a point can only be dominated by an earlier one.
    let mut kept: Vec<usize> = Vec::new();
    for &i in &order {
        let p = points[i].as_ref();
        if let Some(&last) = kept.last() {
            if same_bits(points[last].as_ref(), p) {
                continue;
            }
        }
        if kept
            .iter()
            .any(|&j| weakly_dominates(points[j].as_ref(), p))
        {
            continue;
        }
        kept.push(i);
    }
    Ok(kept)
}

/// Non-dominated, duplicate-free subset of `points` in canonical order.
pub fn nondominated_filter(points: &[ObjectiveVector]) -> Result<Vec<ObjectiveVector>> {
    Ok(nondominated_indices(points)?
        .into_iter()
        .map(|i| points[i].clone())
        .collect())
}

impl AsRef<[f64]> for ObjectiveVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for Solution {
    fn as_ref(&self) -> &[f64] {
        &self.f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ov(v: &[f64]) -> ObjectiveVector {
        ObjectiveVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&[1.0, 2.0], &[2.0, 3.0]).unwrap());
        assert!(!dominates(&[1.0, 3.0], &[3.0, 1.0]).unwrap());
        assert!(!dominates(&[3.0, 1.0], &[1.0, 3.0]).unwrap());
        assert!(!dominates(&[1.0, 2.0], &[1.0, 2.0]).unwrap());
        assert!(matches!(
            dominates(&[1.0], &[1.0, 2.0]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn filter_examples() {
        let s = vec![ov(&[1.0, 2.0]), ov(&[2.0, 1.0]), ov(&[2.0, 2.0])];
        assert_eq!(nondominated_filter(&s).unwrap(), vec![ov(&[1.0, 2.0]), ov(&[2.0, 1.0])]);

        let dup = vec![ov(&[1.0, 2.0]), ov(&[1.0, 2.0])];
        assert_eq!(nondominated_filter(&dup).unwrap(), vec![ov(&[1.0, 2.0])]);

        let antichain: Vec<_> = (0..5).map(|i| ov(&[i as f64, 4.0 - i as f64])).collect();
        assert_eq!(nondominated_filter(&antichain).unwrap(), antichain);

        assert_eq!(nondominated_filter(&[]), Err(Error::Empty("point set")));
    }

    #[test]
    fn weakly_dominated_point_with_equal_coordinate_is_removed() {
        let s = vec![ov(&[1.0, 2.0]), ov(&[1.0, 3.0])];
        assert_eq!(nondominated_filter(&s).unwrap(), vec![ov(&[1.0, 2.0])]);
    }

    #[test]
    fn normalize_examples() {
        let b = NormalizationBounds::new(ov(&[0.0; 3]), ov(&[0.5; 3])).unwrap();
        assert_eq!(b.normalize(&[0.0; 3]).unwrap().as_slice(), &[0.0; 3]);
        assert_eq!(b.normalize(&[0.5; 3]).unwrap().as_slice(), &[1.0; 3]);
        assert_eq!(
            b.normalize(&[0.25, 0.25, 0.0]).unwrap().as_slice(),
            &[0.5, 0.5, 0.0]
        );
    }

    #[test]
    fn invalid_bounds_rejected() {
        assert!(NormalizationBounds::new(ov(&[0.0, 1.0]), ov(&[1.0, 1.0])).is_err());
        assert!(ObjectiveVector::new(vec![f64::NAN, 1.0]).is_err());
        assert!(ObjectiveVector::new(vec![]).is_err());
    }
}
