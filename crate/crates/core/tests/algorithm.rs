use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use triset::archive::{ScalarizingArchive, SolutionSink, UnboundedArchive};
use triset::moead::{run, Moead, MoeadConfig};
use triset::objective::{dominates, ObjectiveVector, Solution};
use triset::problems::{ProblemName, ProblemSpec};
use triset::scalarize::{simplex_lattice, Scalarizer};

#[derive(Default)]
struct Recorder {
    stream: Vec<(Solution, ObjectiveVector)>,
    initial: Vec<Solution>,
    initial_z: Option<ObjectiveVector>,
}

impl SolutionSink for Recorder {
    fn observe_initial(&mut self, population: &[Solution], z: &ObjectiveVector) {
        self.initial = population.to_vec();
        self.initial_z = Some(z.clone());
    }

    fn observe(&mut self, solution: &Solution, z: &ObjectiveVector) {
        self.stream.push((solution.clone(), z.clone()));
    }
}

fn config(scalarizer: Scalarizer, budget: usize, seed: u64) -> MoeadConfig {
    MoeadConfig::for_population(3, 15, scalarizer, budget, seed).unwrap()
}

#[test]
fn runs_are_reproducible() {
    let p = ProblemSpec::new(ProblemName::Dtlz2, 3).unwrap();
    let a = run(config(Scalarizer::Tchebycheff, 1500, 3), &p, &mut []).unwrap();
    let b = run(config(Scalarizer::Tchebycheff, 1500, 3), &p, &mut []).unwrap();
    assert_eq!(a.population, b.population);
    assert_eq!(a.z, b.z);
    let c = run(config(Scalarizer::Tchebycheff, 1500, 4), &p, &mut []).unwrap();
    assert_ne!(a.population, c.population);
}

#[test]
fn ideal_point_is_the_running_minimum() {
    let p = ProblemSpec::new(ProblemName::Wfg4, 3).unwrap();
    let mut rec = Recorder::default();
    let state = run(config(Scalarizer::pbi(), 1000, 1), &p, &mut [&mut rec]).unwrap();
    // The budget is checked once per sweep over the 15 subproblems.
    assert!((1000..1015).contains(&state.evals_used));
    assert_eq!(rec.initial.len() + rec.stream.len(), state.evals_used);
    assert_eq!(state.evals_used % 15, 0);

    let mut z = rec.initial[0].f.to_vec();
    for s in &rec.initial {
        for (a, b) in z.iter_mut().zip(s.f.iter()) {
            *a = a.min(*b);
        }
    }
    assert_eq!(rec.initial_z.as_deref(), Some(z.as_slice()));
    for (s, seen) in &rec.stream {
        for (a, b) in z.iter_mut().zip(s.f.iter()) {
            *a = a.min(*b);
        }
        assert_eq!(seen.as_slice(), z.as_slice());
    }
    assert_eq!(state.z.as_slice(), z.as_slice());
    let evals: Vec<usize> = rec.initial.iter().chain(rec.stream.iter().map(|(s, _)| s)).map(|s| s.eval_index).collect();
    assert_eq!(evals, (0..state.evals_used).collect::<Vec<_>>());
}

#[test]
fn replacement_never_worsens_a_subproblem() {
    let p = ProblemSpec::new(ProblemName::Dtlz1, 3).unwrap();
    for scalarizer in [Scalarizer::Tchebycheff, Scalarizer::pbi()] {
        let mut alg = Moead::new(config(scalarizer, 600, 8), &p, &mut []).unwrap();
        let n = alg.state().population.len();
        let mut i = 0;
        while !alg.is_finished() {
            let before = alg.state().population.clone();
            alg.evolve_subproblem(i % n, &mut []);
            for (j, old) in before.iter().enumerate() {
                let new = &alg.state().population[j];
                assert!(alg.subproblem_value(j, &new.f) <= alg.subproblem_value(j, &old.f));
            }
            i += 1;
        }
        assert!(alg.state().evals_used >= 600);
    }
}

#[test]
fn archive_replay_matches_live_archive() {
    let p = ProblemSpec::new(ProblemName::Dtlz3, 3).unwrap();
    let weights = simplex_lattice(3, 12).unwrap();
    let mut live = ScalarizingArchive::new(weights.clone(), Scalarizer::Tchebycheff).unwrap();
    let mut rec = Recorder::default();
    run(config(Scalarizer::Tchebycheff, 2000, 2), &p, &mut [&mut live, &mut rec]).unwrap();

    let mut replay = ScalarizingArchive::new(weights, Scalarizer::Tchebycheff).unwrap();
    replay.initialize(&rec.initial, rec.initial_z.as_ref().unwrap()).unwrap();
    for (s, z) in &rec.stream {
        replay.offer(s, z).unwrap();
    }
    assert_eq!(live.extract_candidates(), replay.extract_candidates());
    assert!(!live.extract_candidates().is_empty());
}

#[test]
fn unbounded_archive_stays_an_antichain() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut archive = UnboundedArchive::new();
    let mut offered = Vec::new();
    for i in 0..1000 {
        let f: Vec<f64> = (0..3).map(|_| (rng.random::<f64>() * 10.0).floor()).collect();
        let s = Solution {
            x: Vec::new(),
            f: ObjectiveVector::new(f).unwrap(),
            eval_index: i,
        };
        archive.offer(&s);
        offered.push(s.f);
    }
    let members = archive.members();
    for a in members {
        for b in members {
            assert!(!dominates(&a.f, &b.f).unwrap());
        }
    }
    for f in &offered {
        assert!(members.iter().any(|m| m.f == *f || dominates(&m.f, f).unwrap()));
    }
}
