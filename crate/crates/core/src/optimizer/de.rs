//! Differential evolution (rand/1/bin) with an adaptive constraint penalty.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Hyperparameters of the search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeSettings {
    pub population: usize,
    /// Differential weight `F`.
    pub weight: f64,
    /// Crossover rate `CR`.
    pub crossover: f64,
    /// Independent seeded restarts sharing the evaluation budget.
    pub restarts: usize,
    /// Penalty weight `λ` at the start of every restart.
    pub initial_penalty: f64,
    /// `λ` doubles every `penalty_period` generations while the incumbent
    /// violates the constraint by more than `penalty_tolerance`.
    pub penalty_period: usize,
    pub penalty_tolerance: f64,
}

impl Default for DeSettings {
    fn default() -> Self {
        Self {
            population: 64,
            weight: 0.7,
            crossover: 0.9,
            restarts: 4,
            initial_penalty: 10.0,
            penalty_period: 50,
            penalty_tolerance: 1e-6,
        }
    }
}

/// An evaluated point: objective value and constraint violation.
#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub x: Vec<f64>,
    pub value: f64,
    pub violation: f64,
}

impl Member {
    fn fitness(&self, penalty: f64) -> f64 {
        self.value - penalty * self.violation
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeOutcome {
    pub best: Member,
    pub evaluations: usize,
    /// Final `λ` of the restart that produced `best`.
    pub penalty: f64,
}

/// Maximizes `value − λ·violation` over the box `bounds`.
///
/// `eval` returns `(value, violation)` and may move the point (repair);
/// the moved point replaces the candidate. Runs are deterministic in `seed`.
pub fn maximize<E>(
    bounds: &[(f64, f64)],
    budget: usize,
    seed: u64,
    settings: &DeSettings,
    mut eval: E,
) -> DeOutcome
where
    E: FnMut(&mut [f64]) -> (f64, f64),
{
    let restarts = settings.restarts.max(1);
    let per_run = budget / restarts;
    let mut best: Option<(Member, f64)> = None;
    let mut evaluations = 0;
    for run in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(run as u64);
        let (m, penalty, used) = single_run(bounds, per_run, settings, &mut rng, &mut eval);
        evaluations += used;
        let better = match &best {
            None => true,
            Some((b, _)) => prefer(&m, b, settings.penalty_tolerance),
        };
        if better {
            best = Some((m, penalty));
        }
    }
    let (best, penalty) = best.expect("at least one restart");
    DeOutcome {
        best,
        evaluations,
        penalty,
    }
}

/// Feasible beats infeasible; among feasible the larger value wins, among
/// infeasible the smaller violation.
fn prefer(a: &Member, b: &Member, tol: f64) -> bool {
    match (a.violation <= tol, b.violation <= tol) {
        (true, false) => true,
        (false, true) => false,
        (true, true) => a.value > b.value,
        (false, false) => a.violation < b.violation,
    }
}

fn single_run<E>(
    bounds: &[(f64, f64)],
    budget: usize,
    settings: &DeSettings,
    rng: &mut ChaCha8Rng,
    eval: &mut E,
) -> (Member, f64, usize)
where
    E: FnMut(&mut [f64]) -> (f64, f64),
{
    let dim = bounds.len();
    let np = settings.population.max(4);
    let mut used = 0;
    let mut evaluate = |mut x: Vec<f64>, used: &mut usize| {
        let (value, violation) = eval(&mut x);
        *used += 1;
        Member {
            x,
            value,
            violation,
        }
    };

    let mut pop: Vec<Member> = (0..np)
        .map(|_| {
            let x = bounds.iter().map(|&(lo, hi)| rng.random_range(lo..=hi)).collect();
            evaluate(x, &mut used)
        })
        .collect();
    let mut penalty = settings.initial_penalty;
    let mut generation = 0;
    let mut trial = vec![0.0; dim];

    while used + np <= budget {
        for i in 0..np {
            let (r1, r2, r3) = distinct_three(rng, np, i);
            let j_rand = rng.random_range(0..dim);
            for j in 0..dim {
                trial[j] = if j == j_rand || rng.random::<f64>() < settings.crossover {
                    let v = pop[r1].x[j] + settings.weight * (pop[r2].x[j] - pop[r3].x[j]);
                    reflect(v, bounds[j], rng)
                } else {
                    pop[i].x[j]
                };
            }
            let cand = evaluate(trial.clone(), &mut used);
            if cand.fitness(penalty) >= pop[i].fitness(penalty) {
                pop[i] = cand;
            }
        }
        generation += 1;
        if generation % settings.penalty_period.max(1) == 0 {
            let inc = incumbent(&pop, penalty);
            if pop[inc].violation > settings.penalty_tolerance {
                penalty *= 2.0;
            }
        }
    }
    let inc = incumbent(&pop, penalty);
    (pop.swap_remove(inc), penalty, used)
}

fn incumbent(pop: &[Member], penalty: f64) -> usize {
    let mut best = 0;
    for (i, m) in pop.iter().enumerate() {
        if m.fitness(penalty) > pop[best].fitness(penalty) {
            best = i;
        }
    }
    best
}

fn distinct_three(rng: &mut ChaCha8Rng, n: usize, exclude: usize) -> (usize, usize, usize) {
    let mut pick = |taken: &[usize]| loop {
        let k = rng.random_range(0..n);
        if k != exclude && !taken.contains(&k) {
            return k;
        }
    };
    let a = pick(&[]);
    let b = pick(&[a]);
    let c = pick(&[a, b]);
    (a, b, c)
}

/// Mirrors an out-of-box coordinate back inside; far overshoots are
/// resampled uniformly.
fn reflect(v: f64, (lo, hi): (f64, f64), rng: &mut ChaCha8Rng) -> f64 {
    let r = if v < lo {
        2.0 * lo - v
    } else if v > hi {
        2.0 * hi - v
    } else {
        v
    };
    if (lo..=hi).contains(&r) {
        r
    } else {
        rng.random_range(lo..=hi)
    }
}
