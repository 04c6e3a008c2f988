//! MOEA/D with Tchebycheff or PBI decomposition.
//!
//! Every evaluated solution is handed to the attached [`SolutionSink`]s
//! exactly once, so external archives see the full search stream.

mod variation;

pub use variation::{
    polynomial_mutation, polynomial_perturbation, sbx_children, sbx_crossover, sbx_spread_factor,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::archive::SolutionSink;
use crate::error::{Error, Result};
use crate::objective::{ObjectiveVector, Solution};
use crate::problems::ProblemSpec;
use crate::scalarize::{lattice_resolution_for_size, lattice_size, simplex_lattice, Scalarizer, WeightTable, WeightVector};

pub const DEFAULT_SBX_ETA: f64 = 30.0;
pub const DEFAULT_SBX_PROB: f64 = 1.0;
pub const DEFAULT_PM_ETA: f64 = 20.0;

/// Neighborhood size paired with a population size: 15 for 15, 20 for
/// 91/210, 200 for 990/1001 and 1000 for 5050/5985. Other sizes get
/// `min(20, N)`.
pub fn default_neighborhood_size(population_size: usize) -> usize {
    match population_size {
        15 => 15,
        91 | 210 => 20,
        990 | 1001 => 200,
        5050 | 5985 => 1000,
        n => n.min(20),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoeadConfig {
    pub lattice_h: usize,
    pub neighborhood_size: usize,
    pub scalarizer: Scalarizer,
    pub max_evaluations: usize,
    pub seed: u64,
    pub sbx_eta: f64,
    pub sbx_prob: f64,
    pub pm_eta: f64,
    /// Per-variable mutation probability; `None` means `1 / D`.
    pub pm_prob: Option<f64>,
}

impl MoeadConfig {
    pub fn new(
        lattice_h: usize,
        neighborhood_size: usize,
        scalarizer: Scalarizer,
        max_evaluations: usize,
        seed: u64,
    ) -> Self {
        MoeadConfig {
            lattice_h,
            neighborhood_size,
            scalarizer,
            max_evaluations,
            seed,
            sbx_eta: DEFAULT_SBX_ETA,
            sbx_prob: DEFAULT_SBX_PROB,
            pm_eta: DEFAULT_PM_ETA,
            pm_prob: None,
        }
    }

    /// Config for a population size that is an exact lattice size, with the
    /// paired neighborhood size.
    pub fn for_population(
        m: usize,
        population_size: usize,
        scalarizer: Scalarizer,
        max_evaluations: usize,
        seed: u64,
    ) -> Result<Self> {
        let h = lattice_resolution_for_size(m, population_size).ok_or_else(|| {
            Error::Configuration(format!(
                "population size {population_size} is not a simplex-lattice size for m = {m}"
            ))
        })?;
        Ok(Self::new(
            h,
            default_neighborhood_size(population_size),
            scalarizer,
            max_evaluations,
            seed,
        ))
    }

    pub fn population_size(&self, m: usize) -> usize {
        lattice_size(m, self.lattice_h) as usize
    }

    fn validate(&self, m: usize) -> Result<()> {
        self.scalarizer.validate()?;
        if self.lattice_h == 0 {
            return Err(Error::Configuration("lattice resolution must be >= 1".into()));
        }
        let n = self.population_size(m);
        if self.neighborhood_size < 2 || self.neighborhood_size > n {
            return Err(Error::Configuration(format!(
                "neighborhood size {} outside [2, {n}]",
                self.neighborhood_size
            )));
        }
        if self.max_evaluations < n {
            return Err(Error::Configuration(format!(
                "evaluation budget {} smaller than population size {n}",
                self.max_evaluations
            )));
        }
        for (name, v) in [("sbx_eta", self.sbx_eta), ("pm_eta", self.pm_eta)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Configuration(format!("{name} must be a non-negative number")));
            }
        }
        let probs = [Some(self.sbx_prob), self.pm_prob];
        if probs.into_iter().flatten().any(|p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::Configuration("probabilities must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Population, weights and ideal estimate of a MOEA/D run.
#[derive(Debug, Clone)]
pub struct MoeadState {
    pub weights: Vec<WeightVector>,
    /// One resident solution per weight vector.
    pub population: Vec<Solution>,
    /// Componentwise minimum over every evaluated solution.
    pub z: ObjectiveVector,
    pub neighborhoods: Vec<Vec<usize>>,
    pub evals_used: usize,
}

/// The `t` nearest weights (Euclidean) of every weight, self included,
/// ties to the lower index.
pub fn build_neighborhoods(weights: &[WeightVector], t: usize) -> Result<Vec<Vec<usize>>> {
    let n = weights.len();
    if t == 0 || t > n {
        return Err(Error::param(format!("neighborhood size {t} outside [1, {n}]")));
    }
    let mut out = Vec::with_capacity(n);
    let mut scored: Vec<(f64, usize)> = Vec::with_capacity(n);
    for wi in weights {
        scored.clear();
        scored.extend(weights.iter().enumerate().map(|(j, wj)| {
            let d: f64 = wi.iter().zip(wj.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
            (d, j)
        }));
        let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if t < n {
            scored.select_nth_unstable_by(t - 1, cmp);
        }
        let head = &mut scored[..t];
        head.sort_unstable_by(cmp);
        out.push(head.iter().map(|&(_, j)| j).collect());
    }
    Ok(out)
}

/// A MOEA/D run that can be advanced one subproblem or one generation at a
/// time.
pub struct Moead<'p> {
    problem: &'p ProblemSpec,
    config: MoeadConfig,
    pm_prob: f64,
    table: WeightTable,
    rng: ChaCha8Rng,
    state: MoeadState,
}

impl<'p> Moead<'p> {
    /// Creates the run and evaluates the random initial population; `sinks`
    /// receive that population.
    pub fn new(config: MoeadConfig, problem: &'p ProblemSpec, sinks: &mut [&mut dyn SolutionSink]) -> Result<Self> {
        let m = problem.num_objectives();
        config.validate(m)?;
        let weights = simplex_lattice(m, config.lattice_h)?;
        let neighborhoods = build_neighborhoods(&weights, config.neighborhood_size)?;
        let table = WeightTable::new(config.scalarizer, &weights);
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

        let (lower, upper) = (problem.lower(), problem.upper());
        let population: Vec<Solution> = (0..weights.len())
            .map(|i| {
                let x: Vec<f64> = lower
                    .iter()
                    .zip(upper)
                    .map(|(lo, hi)| lo + rng.random::<f64>() * (hi - lo))
                    .collect();
                let f = problem.evaluate_unchecked(&x);
                Solution { x, f, eval_index: i }
            })
            .collect();
        let mut z = population[0].f.to_vec();
        for s in &population {
            for (zi, fi) in z.iter_mut().zip(s.f.iter()) {
                *zi = zi.min(*fi);
            }
        }
        let z = ObjectiveVector::from_vec_unchecked(z);
        for sink in sinks.iter_mut() {
            sink.observe_initial(&population, &z);
        }

        let pm_prob = config
            .pm_prob
            .unwrap_or(1.0 / problem.num_variables() as f64);
        let evals_used = population.len();
        Ok(Moead {
            problem,
            config,
            pm_prob,
            table,
            rng,
            state: MoeadState {
                weights,
                population,
                z,
                neighborhoods,
                evals_used,
            },
        })
    }

    pub fn state(&self) -> &MoeadState {
        &self.state
    }

    pub fn into_state(self) -> MoeadState {
        self.state
    }

    pub fn is_finished(&self) -> bool {
        self.state.evals_used >= self.config.max_evaluations
    }

    /// Scalarizing value of `f` for subproblem `i` under the live ideal
    /// estimate.
    pub fn subproblem_value(&self, i: usize, f: &[f64]) -> f64 {
        self.table.value(i, f, &self.state.z)
    }

    /// One variation-evaluation-replacement step for subproblem `i`.
    pub fn evolve_subproblem(&mut self, i: usize, sinks: &mut [&mut dyn SolutionSink]) {
        let t = self.config.neighborhood_size;
        let a = self.rng.random_range(0..t);
        let mut b = self.rng.random_range(0..t - 1);
        if b >= a {
            b += 1;
        }
        let hood = &self.state.neighborhoods[i];
        let (p1, p2) = (&self.state.population[hood[a]], &self.state.population[hood[b]]);
        let (lower, upper) = (self.problem.lower(), self.problem.upper());
        let (child, _) = sbx_crossover(
            &p1.x,
            &p2.x,
            lower,
            upper,
            self.config.sbx_eta,
            self.config.sbx_prob,
            &mut self.rng,
        );
        let x = polynomial_mutation(&child, lower, upper, self.config.pm_eta, self.pm_prob, &mut self.rng);
        let f = self.problem.evaluate_unchecked(&x);
        let child = Solution {
            x,
            f,
            eval_index: self.state.evals_used,
        };
        self.state.evals_used += 1;

        if child.f.iter().zip(self.state.z.iter()).any(|(f, z)| f < z) {
            let z: Vec<f64> = self.state.z.iter().zip(child.f.iter()).map(|(a, b)| a.min(*b)).collect();
            self.state.z = ObjectiveVector::from_vec_unchecked(z);
        }
        for sink in sinks.iter_mut() {
            sink.observe(&child, &self.state.z);
        }

        let z = &self.state.z;
        for &j in &self.state.neighborhoods[i] {
            let new = self.table.value(j, &child.f, z);
            let old = self.table.value(j, &self.state.population[j].f, z);
            if new < old {
                self.state.population[j] = child.clone();
            }
        }
    }

    /// One sweep over all subproblems in index order.
    pub fn run_generation(&mut self, sinks: &mut [&mut dyn SolutionSink]) {
        for i in 0..self.state.population.len() {
            self.evolve_subproblem(i, sinks);
        }
    }

    /// Runs generations until the evaluation budget is spent.
    pub fn run_to_completion(mut self, sinks: &mut [&mut dyn SolutionSink]) -> MoeadState {
        while !self.is_finished() {
            self.run_generation(sinks);
        }
        self.state
    }
}

/// Runs MOEA/D on `problem`, streaming every evaluated solution to `sinks`.
///
/// The budget is checked after each full generation, so the run may use up
/// to `N - 1` evaluations beyond `max_evaluations`.
pub fn run(config: MoeadConfig, problem: &ProblemSpec, sinks: &mut [&mut dyn SolutionSink]) -> Result<MoeadState> {
    Ok(Moead::new(config, problem, sinks)?.run_to_completion(sinks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::ProblemName;

    #[test]
    fn full_neighborhoods() {
        let w = simplex_lattice(3, 3).unwrap();
        let hoods = build_neighborhoods(&w, w.len()).unwrap();
        for (i, h) in hoods.iter().enumerate() {
            let mut sorted = h.clone();
            sorted.sort();
            assert_eq!(sorted, (0..w.len()).collect::<Vec<_>>());
            assert_eq!(h[0], i);
        }
    }

    #[test]
    fn middle_weight_tie_breaks_to_lower_index() {
        let w = simplex_lattice(2, 2).unwrap();
        let hoods = build_neighborhoods(&w, 2).unwrap();
        assert_eq!(hoods[1], vec![1, 0]);
        assert_eq!(hoods[0], vec![0, 1]);
        assert_eq!(hoods[2], vec![2, 1]);
        assert!(build_neighborhoods(&w, 4).is_err());
    }

    #[test]
    fn default_neighborhoods_follow_population_pairing() {
        assert_eq!(default_neighborhood_size(15), 15);
        assert_eq!(default_neighborhood_size(91), 20);
        assert_eq!(default_neighborhood_size(1001), 200);
        assert_eq!(default_neighborhood_size(5985), 1000);
    }

    #[test]
    fn budget_below_population_rejected() {
        let p = ProblemSpec::new(ProblemName::Dtlz2, 3).unwrap();
        let cfg = MoeadConfig::for_population(3, 91, Scalarizer::Tchebycheff, 90, 1).unwrap();
        assert!(matches!(run(cfg, &p, &mut []), Err(Error::Configuration(_))));
        assert!(MoeadConfig::for_population(3, 100, Scalarizer::Tchebycheff, 1000, 1).is_err());
    }

    #[test]
    fn budget_equal_to_population_runs_no_generation() {
        let p = ProblemSpec::new(ProblemName::Dtlz1, 3).unwrap();
        let cfg = MoeadConfig::for_population(3, 15, Scalarizer::Tchebycheff, 15, 3).unwrap();
        let state = run(cfg, &p, &mut []).unwrap();
        assert_eq!(state.evals_used, 15);
        for (i, s) in state.population.iter().enumerate() {
            assert_eq!(s.eval_index, i);
            assert_eq!(s.f, p.evaluate(&s.x).unwrap());
        }
    }
}
