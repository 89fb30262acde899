//! Seeded random orbits over the subshift, closed walks at returns to the
//! starting letter, and empirical homology directions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{fmt_rat, RatVec};
use crate::cone::{membership, Cone, Membership};
use crate::foliation::homology_cone;
use crate::markov::{
    enumerate_periodic_strings, class_of, HomologyClass, MarkovError, MarkovSystem,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("system has no cycles")]
    ProductTypeSystem,
    #[error("orbit never returns to its initial letter")]
    NoReturn,
    #[error("invalid simulation config: {0}")]
    BadConfig(String),
    #[error("maximum length {max_len} is shorter than the alphabet ({letters} letters)")]
    LengthTooShort { max_len: usize, letters: usize },
    #[error(transparent)]
    Markov(#[from] MarkovError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPath {
    pub letters: Vec<usize>,
    pub labels: Vec<HomologyClass>,
    pub seed: u64,
    /// `running[t]` is the sum of the first `t` labels.
    pub running: Vec<HomologyClass>,
}

impl OrbitPath {
    /// Builds a path from an explicit admissible letter sequence.
    pub fn from_letters(system: &MarkovSystem, letters: Vec<usize>) -> Result<OrbitPath, MarkovError> {
        let mut labels = Vec::with_capacity(letters.len().saturating_sub(1));
        for w in letters.windows(2) {
            let label = system.label(w[0], w[1]).ok_or_else(|| MarkovError::IllegalTransition {
                from: system.letters()[w[0]].name.clone(),
                to: system.letters()[w[1]].name.clone(),
            })?;
            labels.push(label.clone());
        }
        Ok(Self::assemble(system.rank(), letters, labels, 0))
    }

    fn assemble(rank: usize, letters: Vec<usize>, labels: Vec<HomologyClass>, seed: u64) -> OrbitPath {
        let mut running = Vec::with_capacity(labels.len() + 1);
        let mut acc = HomologyClass::zero(rank);
        running.push(acc.clone());
        for l in &labels {
            acc.add_assign(l);
            running.push(acc.clone());
        }
        OrbitPath {
            letters,
            labels,
            seed,
            running,
        }
    }

    pub fn steps(&self) -> usize {
        self.labels.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedWalk {
    pub start: usize,
    pub end: usize,
    pub length: usize,
    pub class: HomologyClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpiricalDirection {
    #[serde(with = "crate::arith::serde_exact::rat_vec")]
    pub direction: RatVec,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub steps: usize,
    pub trials: usize,
    pub seed: u64,
    /// Exponent `k` of the first dyadic checkpoint `2^k` entering the
    /// convergence statistic.
    pub window: u32,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            steps: 10_000,
            trials: 1,
            seed: 42,
            window: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub step: usize,
    /// Class of all closed walks completed by `step`, divided by their length.
    #[serde(with = "crate::arith::serde_exact::opt_rat_vec")]
    pub direction: Option<RatVec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialReport {
    pub index: usize,
    pub seed: u64,
    pub closed_walks: usize,
    pub interior_walks: usize,
    pub boundary_walks: usize,
    pub outside_walks: usize,
    pub checkpoints: Vec<Checkpoint>,
    /// Largest max-norm difference between successive checkpoint directions
    /// from `2^window` on; `None` if fewer than two such checkpoints exist.
    #[serde(with = "crate::arith::serde_exact::opt_rat")]
    pub statistic: Option<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub system: String,
    pub config: SimulationConfig,
    pub homology_cone: Cone,
    pub trials: Vec<TrialReport>,
}

impl ConvergenceReport {
    pub fn all_contained(&self) -> bool {
        self.trials.iter().all(|t| t.outside_walks == 0)
    }

    /// Largest statistic over all trials.
    pub fn statistic(&self) -> Option<BigRational> {
        self.trials.iter().filter_map(|t| t.statistic.clone()).max()
    }
}

/// Letters lying on some cycle, and letters from which a cycle is reachable.
fn cycle_structure(system: &MarkovSystem) -> (Vec<bool>, Vec<bool>) {
    let n = system.letter_count();
    let mut on_cycle = vec![false; n];
    for l in crate::markov::minimal_loops(system) {
        for &i in &l.word {
            on_cycle[i] = true;
        }
    }
    let mut reaches = on_cycle.clone();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            if !reaches[i] && system.successors(i).iter().any(|&j| reaches[j]) {
                reaches[i] = true;
                changed = true;
            }
        }
    }
    (on_cycle, reaches)
}

/// A `steps`-step orbit starting at the least letter on a cycle, choosing
/// uniformly among successors from which a cycle is still reachable.
pub fn random_orbit(system: &MarkovSystem, steps: usize, seed: u64) -> Result<OrbitPath, SimError> {
    if steps < 1 {
        return Err(SimError::BadConfig("steps must be at least 1".into()));
    }
    let (on_cycle, reaches) = cycle_structure(system);
    let start = on_cycle
        .iter()
        .position(|&c| c)
        .ok_or(SimError::ProductTypeSystem)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut letters = Vec::with_capacity(steps + 1);
    let mut labels = Vec::with_capacity(steps);
    letters.push(start);
    let mut current = start;
    for _ in 0..steps {
        let options: Vec<usize> = system
            .successors(current)
            .iter()
            .copied()
            .filter(|&j| reaches[j])
            .collect();
        let next = options[rng.gen_range(0..options.len())];
        labels.push(system.label(current, next).expect("successor edge").clone());
        letters.push(next);
        current = next;
    }
    Ok(OrbitPath::assemble(system.rank(), letters, labels, seed))
}

/// Splits the path at every return to its initial letter.
pub fn close_at_returns(path: &OrbitPath) -> Result<Vec<ClosedWalk>, SimError> {
    let first = path.letters[0];
    let mut walks = Vec::new();
    let mut start = 0;
    for (t, &letter) in path.letters.iter().enumerate().skip(1) {
        if letter == first {
            walks.push(ClosedWalk {
                start,
                end: t,
                length: t - start,
                class: path.running[t].sub(&path.running[start]),
            });
            start = t;
        }
    }
    if walks.is_empty() {
        return Err(SimError::NoReturn);
    }
    Ok(walks)
}

/// Class of the walk divided by its length.
pub fn empirical_direction(w: &ClosedWalk) -> EmpiricalDirection {
    direction_of(&w.class, w.length)
}

fn direction_of(class: &HomologyClass, length: usize) -> EmpiricalDirection {
    let q = BigInt::from(length.max(1));
    EmpiricalDirection {
        direction: class
            .0
            .iter()
            .map(|&c| BigRational::new(BigInt::from(c), q.clone()))
            .collect(),
        length,
    }
}

/// The closed walk's letters as a cyclic word.
pub fn walk_word(path: &OrbitPath, w: &ClosedWalk) -> Vec<usize> {
    path.letters[w.start..w.end].to_vec()
}

fn run_trial(
    system: &MarkovSystem,
    cone: &Cone,
    config: &SimulationConfig,
    index: usize,
) -> Result<TrialReport, SimError> {
    let seed = config.seed.wrapping_add(index as u64);
    let path = random_orbit(system, config.steps, seed)?;
    let walks = close_at_returns(&path).unwrap_or_default();
    let (mut interior, mut boundary, mut outside) = (0, 0, 0);
    for w in &walks {
        let x: RatVec = w
            .class
            .0
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        match membership(cone, &x).expect("walk class has the system rank").0 {
            Membership::Interior => interior += 1,
            Membership::Boundary => boundary += 1,
            Membership::Outside => outside += 1,
        }
    }

    let mut checkpoints = Vec::new();
    let mut step = 1usize;
    while step <= config.steps {
        let last_return = walks.iter().take_while(|w| w.end <= step).last().map(|w| w.end);
        let direction = last_return.map(|t| direction_of(&path.running[t], t).direction);
        checkpoints.push(Checkpoint { step, direction });
        step *= 2;
    }

    let window_start = 1usize.checked_shl(config.window).unwrap_or(usize::MAX);
    let tracked: Vec<&RatVec> = checkpoints
        .iter()
        .filter(|c| c.step >= window_start)
        .filter_map(|c| c.direction.as_ref())
        .collect();
    let statistic = tracked
        .windows(2)
        .map(|pair| max_norm_diff(pair[0], pair[1]))
        .max();

    Ok(TrialReport {
        index,
        seed,
        closed_walks: walks.len(),
        interior_walks: interior,
        boundary_walks: boundary,
        outside_walks: outside,
        checkpoints,
        statistic,
    })
}

fn max_norm_diff(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .max()
        .unwrap_or_else(BigRational::zero)
}

/// Runs `config.trials` independent orbits (trial `i` uses seed
/// `config.seed + i`), checks every closed-walk class against the homology
/// cone, and records cumulative directions at dyadic checkpoints.
pub fn convergence_report(
    system: &MarkovSystem,
    config: &SimulationConfig,
) -> Result<ConvergenceReport, SimError> {
    if config.steps < 1 || config.trials < 1 {
        return Err(SimError::BadConfig("steps and trials must be at least 1".into()));
    }
    if system.is_product_type() {
        return Err(SimError::ProductTypeSystem);
    }
    let cone = homology_cone(system);
    let trials = (0..config.trials)
        .into_par_iter()
        .map(|i| run_trial(system, &cone, config, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ConvergenceReport {
        system: system.name().to_string(),
        config: config.clone(),
        homology_cone: cone,
        trials,
    })
}

/// Hull of the classes of every periodic string of length at most `max_len`.
pub fn brute_force_cone(system: &MarkovSystem, max_len: usize, cap: usize) -> Result<Cone, SimError> {
    if max_len < system.letter_count() {
        return Err(SimError::LengthTooShort {
            max_len,
            letters: system.letter_count(),
        });
    }
    let strings = enumerate_periodic_strings(system, max_len, cap)?;
    let mut classes: Vec<_> = strings
        .iter()
        .map(|p| class_of(system, p).map(|c| c.to_int_vec()))
        .collect::<Result<_, _>>()?;
    classes.sort();
    classes.dedup();
    Ok(crate::cone::cone_from_generators(&classes, system.rank()).expect("classes have the system rank"))
}

/// Text summary of a convergence report.
pub fn render_convergence_text(report: &ConvergenceReport) -> String {
    let mut out = format!(
        "system {}: {} steps, {} trial(s), seed {}, window 2^{}\n",
        report.system, report.config.steps, report.config.trials, report.config.seed, report.config.window
    );
    for t in &report.trials {
        out.push_str(&format!(
            "trial {} (seed {}): {} closed walks, {} interior, {} boundary, {} outside, statistic {}\n",
            t.index,
            t.seed,
            t.closed_walks,
            t.interior_walks,
            t.boundary_walks,
            t.outside_walks,
            t.statistic.as_ref().map_or("n/a".to_string(), fmt_rat)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn gm_short_orbit() {
        let p = random_orbit(&fixtures::gm(), 1, 0).unwrap();
        assert_eq!(p.letters.len(), 2);
        assert_eq!(p.letters[0], 0);
    }

    #[test]
    fn forced_cycle() {
        let tri = fixtures::three_cycle();
        for seed in [0, 7, 99] {
            let p = random_orbit(&tri, 6, seed).unwrap();
            assert_eq!(p.letters, vec![0, 1, 2, 0, 1, 2, 0]);
        }
    }

    #[test]
    fn determinism() {
        let gm = fixtures::gm();
        assert_eq!(random_orbit(&gm, 10_000, 42).unwrap(), random_orbit(&gm, 10_000, 42).unwrap());
        assert_ne!(random_orbit(&gm, 200, 1).unwrap(), random_orbit(&gm, 200, 2).unwrap());
    }

    #[test]
    fn product_has_no_orbit() {
        assert_eq!(random_orbit(&fixtures::product(2), 5, 0), Err(SimError::ProductTypeSystem));
        assert!(matches!(
            convergence_report(&fixtures::product(2), &SimulationConfig::default()),
            Err(SimError::ProductTypeSystem)
        ));
    }

    #[test]
    fn gm_returns() {
        let gm = fixtures::gm();
        let path = OrbitPath::from_letters(&gm, vec![0, 0, 1, 0]).unwrap();
        let walks = close_at_returns(&path).unwrap();
        assert_eq!(walks.len(), 2);
        assert_eq!((walks[0].length, walks[0].class.clone()), (1, HomologyClass(vec![1, 0])));
        assert_eq!((walks[1].length, walks[1].class.clone()), (2, HomologyClass(vec![1, 1])));
        let path = OrbitPath::from_letters(&gm, vec![0, 1]).unwrap();
        assert_eq!(close_at_returns(&path), Err(SimError::NoReturn));
        assert!(OrbitPath::from_letters(&gm, vec![1, 1]).is_err());
    }

    #[test]
    fn cycle_returns() {
        let tri = fixtures::three_cycle();
        let path = random_orbit(&tri, 6, 3).unwrap();
        let walks = close_at_returns(&path).unwrap();
        assert_eq!(walks.len(), 2);
        assert!(walks.iter().all(|w| w.class == HomologyClass(vec![1, 1, 1])));
    }

    #[test]
    fn directions() {
        let w = ClosedWalk { start: 0, end: 3, length: 3, class: HomologyClass(vec![2, 1]) };
        let d = empirical_direction(&w);
        assert_eq!(d.direction, vec![BigRational::new(2.into(), 3.into()), BigRational::new(1.into(), 3.into())]);
        let w = ClosedWalk { start: 0, end: 1, length: 1, class: HomologyClass(vec![1, 0]) };
        assert_eq!(empirical_direction(&w).direction, crate::arith::rat_vec(&[1, 0]));
        let w3 = ClosedWalk { start: 0, end: 9, length: 9, class: HomologyClass(vec![6, 3]) };
        assert_eq!(empirical_direction(&w3).direction, d.direction);
    }

    #[test]
    fn single_cycle_direction_is_constant() {
        let cfg = SimulationConfig { steps: 300, trials: 2, seed: 5, window: 0 };
        let r = convergence_report(&fixtures::three_cycle(), &cfg).unwrap();
        for t in &r.trials {
            let dirs: Vec<_> = t.checkpoints.iter().filter_map(|c| c.direction.clone()).collect();
            assert!(dirs.windows(2).all(|w| w[0] == w[1]));
            assert_eq!(t.statistic, Some(BigRational::zero()));
        }
    }

    #[test]
    fn brute_force_matches_loops() {
        let gm = fixtures::gm();
        let h = homology_cone(&gm);
        assert_eq!(brute_force_cone(&gm, 2, 1000).unwrap(), h);
        assert_eq!(brute_force_cone(&gm, 8, 100_000).unwrap(), h);
        let s = fixtures::self_loop();
        assert_eq!(brute_force_cone(&s, 5, 100).unwrap().generators, vec![crate::arith::int_vec(&[1, 0])]);
        assert!(matches!(brute_force_cone(&fixtures::three_cycle(), 2, 100), Err(SimError::LengthTooShort { .. })));
    }
}
