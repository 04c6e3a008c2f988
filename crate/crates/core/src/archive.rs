//! External archives fed by the main loop's stream of evaluated solutions.
//!
//! [`ScalarizingArchive`] keeps one slot per weight vector of its own
//! lattice and replaces a slot whenever a newly generated solution has a
//! strictly better scalarizing value for that slot's weight.
//! [`UnboundedArchive`] keeps every non-dominated solution seen.

use std::sync::Arc;

use crate::error::{check_dim, Error, Result};
use crate::objective::{dominates_unchecked, nondominated_indices, weakly_dominates, ObjectiveVector, Solution};
use crate::scalarize::{Scalarizer, WeightTable, WeightVector};

/// Receiver of the main loop's evaluated solutions.
///
/// The initial population is delivered once through
/// [`observe_initial`](SolutionSink::observe_initial); every later solution
/// goes through [`observe`](SolutionSink::observe). `z` is the live ideal
/// estimate at the time of the call, already updated with the solution.
pub trait SolutionSink {
    fn observe_initial(&mut self, population: &[Solution], z: &ObjectiveVector);
    fn observe(&mut self, solution: &Solution, z: &ObjectiveVector);
}

/// Weight-indexed archive holding the best-so-far solution per weight.
#[derive(Debug, Clone)]
pub struct ScalarizingArchive {
    weights: Vec<WeightVector>,
    table: WeightTable,
    scalarizer: Scalarizer,
    slots: Vec<Arc<Solution>>,
    // Slot values under `cached_z`; recomputed when the ideal estimate moves.
    values: Vec<f64>,
    cached_z: Vec<f64>,
}

impl ScalarizingArchive {
    /// An archive with empty slots, filled by the first call to
    /// [`initialize`](Self::initialize) or [`offer`](Self::offer).
    pub fn new(weights: Vec<WeightVector>, scalarizer: Scalarizer) -> Result<Self> {
        let m = weights.first().ok_or(Error::Empty("archive weight set"))?.len();
        for w in &weights {
            check_dim(m, w.len())?;
        }
        scalarizer.validate()?;
        let table = WeightTable::new(scalarizer, &weights);
        Ok(ScalarizingArchive {
            weights,
            table,
            scalarizer,
            slots: Vec::new(),
            values: Vec::new(),
            cached_z: Vec::new(),
        })
    }

    /// Builds the archive and assigns each weight the best member of
    /// `population` (ties to the lower population index).
    pub fn with_population(
        weights: Vec<WeightVector>,
        scalarizer: Scalarizer,
        population: &[Solution],
        z: &ObjectiveVector,
    ) -> Result<Self> {
        let mut archive = Self::new(weights, scalarizer)?;
        archive.initialize(population, z)?;
        Ok(archive)
    }

    pub fn initialize(&mut self, population: &[Solution], z: &ObjectiveVector) -> Result<()> {
        if population.is_empty() {
            return Err(Error::Empty("initial population"));
        }
        let m = self.weights[0].len();
        check_dim(m, z.len())?;
        for s in population {
            check_dim(m, s.f.len())?;
        }
        let shared: Vec<Arc<Solution>> = population.iter().cloned().map(Arc::new).collect();
        self.slots.clear();
        self.values.clear();
        for i in 0..self.table.len() {
            let mut best = 0;
            let mut best_value = self.table.value(i, &shared[0].f, z);
            for (j, s) in shared.iter().enumerate().skip(1) {
                let v = self.table.value(i, &s.f, z);
                if v < best_value {
                    best = j;
                    best_value = v;
                }
            }
            self.slots.push(Arc::clone(&shared[best]));
            self.values.push(best_value);
        }
        self.cached_z = z.to_vec();
        Ok(())
    }

    /// Compares `solution` against every slot under `z` and replaces the
    /// slots it strictly improves. Returns the number of replaced slots.
    pub fn offer(&mut self, solution: &Solution, z: &ObjectiveVector) -> Result<usize> {
        check_dim(self.weights[0].len(), solution.f.len())?;
        check_dim(self.weights[0].len(), z.len())?;
        if self.slots.is_empty() {
            self.initialize(std::slice::from_ref(solution), z)?;
            return Ok(self.slots.len());
        }
        Ok(self.offer_unchecked(solution, z))
    }

    fn offer_unchecked(&mut self, solution: &Solution, z: &[f64]) -> usize {
        if self.cached_z.as_slice() != z {
            for (i, slot) in self.slots.iter().enumerate() {
                self.values[i] = self.table.value(i, &slot.f, z);
            }
            self.cached_z.clear();
            self.cached_z.extend_from_slice(z);
        }
        let mut shared: Option<Arc<Solution>> = None;
        let mut replaced = 0;
        for i in 0..self.slots.len() {
            let v = self.table.value(i, &solution.f, z);
            if v < self.values[i] {
                let s = shared.get_or_insert_with(|| Arc::new(solution.clone()));
                self.slots[i] = Arc::clone(s);
                self.values[i] = v;
                replaced += 1;
            }
        }
        replaced
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn is_initialized(&self) -> bool {
        !self.slots.is_empty()
    }

    pub fn weights(&self) -> &[WeightVector] {
        &self.weights
    }

    pub fn scalarizer(&self) -> Scalarizer {
        self.scalarizer
    }

    /// Current slot contents, one per weight vector.
    pub fn slots(&self) -> impl ExactSizeIterator<Item = &Solution> {
        self.slots.iter().map(|s| s.as_ref())
    }

    /// Non-dominated, duplicate-free slot solutions in canonical order.
    pub fn candidate_solutions(&self) -> Vec<Solution> {
        if self.slots.is_empty() {
            return Vec::new();
        }
        nondominated_indices(&self.slots.iter().map(|s| s.f.clone()).collect::<Vec<_>>())
            .expect("slots share one dimension")
            .into_iter()
            .map(|i| self.slots[i].as_ref().clone())
            .collect()
    }

    /// The candidate set `S` for subset selection.
    pub fn extract_candidates(&self) -> Vec<ObjectiveVector> {
        self.candidate_solutions().into_iter().map(|s| s.f).collect()
    }
}

impl SolutionSink for ScalarizingArchive {
    fn observe_initial(&mut self, population: &[Solution], z: &ObjectiveVector) {
        self.initialize(population, z)
            .expect("population matches the archive dimension");
    }

    fn observe(&mut self, solution: &Solution, z: &ObjectiveVector) {
        self.offer(solution, z)
            .expect("solution matches the archive dimension");
    }
}

/// Archive of every non-dominated solution offered so far.
#[derive(Debug, Clone, Default)]
pub struct UnboundedArchive {
    members: Vec<Solution>,
}

impl UnboundedArchive {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `solution` unless a member dominates or equals it; members
    /// it dominates are dropped.
    pub fn offer(&mut self, solution: &Solution) -> bool {
        let f = solution.f.as_slice();
        if self
            .members
            .iter()
            .any(|m| weakly_dominates(&m.f, f))
        {
            return false;
        }
        self.members.retain(|m| !dominates_unchecked(f, &m.f));
        self.members.push(solution.clone());
        true
    }

    pub fn members(&self) -> &[Solution] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in canonical order.
    pub fn candidate_solutions(&self) -> Vec<Solution> {
        let mut out = self.members.clone();
        out.sort_by(|a, b| a.f.lex_cmp(&b.f));
        out
    }

    pub fn extract_candidates(&self) -> Vec<ObjectiveVector> {
        self.candidate_solutions().into_iter().map(|s| s.f).collect()
    }
}

impl SolutionSink for UnboundedArchive {
    fn observe_initial(&mut self, population: &[Solution], _z: &ObjectiveVector) {
        for s in population {
            self.offer(s);
        }
    }

    fn observe(&mut self, solution: &Solution, _z: &ObjectiveVector) {
        self.offer(solution);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalarize::simplex_lattice;

    fn sol(f: &[f64], i: usize) -> Solution {
        Solution {
            x: vec![0.0],
            f: ObjectiveVector::new(f.to_vec()).unwrap(),
            eval_index: i,
        }
    }

    fn zero2() -> ObjectiveVector {
        ObjectiveVector::splat(0.0, 2)
    }

    #[test]
    fn single_member_population_fills_every_slot() {
        let weights = simplex_lattice(2, 4).unwrap();
        let a = ScalarizingArchive::with_population(weights, Scalarizer::Tchebycheff, &[sol(&[0.3, 0.4], 0)], &zero2()).unwrap();
        assert!(a.slots().all(|s| s.f.as_slice() == [0.3, 0.4]));
        assert_eq!(a.len(), 5);
    }

    #[test]
    fn extremes_assigned_by_hand_evaluation() {
        // Lattice order for H = 1 is (0,1) then (1,0).
        let weights = simplex_lattice(2, 1).unwrap();
        let pop = [sol(&[0.0, 1.0], 0), sol(&[1.0, 0.0], 1)];
        let a = ScalarizingArchive::with_population(weights, Scalarizer::Tchebycheff, &pop, &zero2()).unwrap();
        let slots: Vec<_> = a.slots().map(|s| s.f.to_vec()).collect();
        assert_eq!(slots, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn empty_population_rejected() {
        let weights = simplex_lattice(2, 1).unwrap();
        assert_eq!(
            ScalarizingArchive::with_population(weights, Scalarizer::Tchebycheff, &[], &zero2()).unwrap_err(),
            Error::Empty("initial population")
        );
    }

    #[test]
    fn offer_replacement_counts() {
        let weights = simplex_lattice(2, 1).unwrap();
        let pop = [sol(&[0.2, 0.6], 0), sol(&[0.6, 0.2], 1)];
        let mut a = ScalarizingArchive::with_population(weights, Scalarizer::Tchebycheff, &pop, &zero2()).unwrap();
        // Dominated by both slots.
        assert_eq!(a.offer(&sol(&[0.7, 0.7], 2), &zero2()).unwrap(), 0);
        // Identical to a slot.
        assert_eq!(a.offer(&sol(&[0.2, 0.6], 3), &zero2()).unwrap(), 0);
        // Improves only the (1,0) weight: 0.1 < 0.2 there, 0.9 > 0.2 on (0,1).
        assert_eq!(a.offer(&sol(&[0.1, 0.9], 4), &zero2()).unwrap(), 1);
        assert_eq!(a.slots().nth(1).unwrap().eval_index, 4);
    }

    #[test]
    fn candidates_drop_dominated_and_duplicate_slots() {
        let weights = simplex_lattice(2, 2).unwrap();
        let mut a = ScalarizingArchive::new(weights, Scalarizer::Tchebycheff).unwrap();
        a.initialize(&[sol(&[1.0, 1.0], 0)], &zero2()).unwrap();
        assert_eq!(a.extract_candidates().len(), 1);
    }

    #[test]
    fn unbounded_archive_offers() {
        let mut u = UnboundedArchive::new();
        assert!(u.offer(&sol(&[1.0, 4.0], 0)));
        assert!(u.offer(&sol(&[2.0, 3.0], 1)));
        assert!(u.offer(&sol(&[3.0, 2.5], 2)));
        assert!(u.offer(&sol(&[5.0, 0.5], 3)));
        assert_eq!(u.len(), 4);
        assert!(!u.offer(&sol(&[2.0, 3.0], 4)));
        // Dominates the first three members.
        assert!(u.offer(&sol(&[0.5, 2.0], 5)));
        assert_eq!(u.len(), 2);
        assert!(!u.offer(&sol(&[6.0, 6.0], 6)));
    }
}
