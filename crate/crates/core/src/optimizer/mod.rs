//! Constrained maximization of `S*(A₂,B₂)` at fixed `S(A₁,B₁) = s`,
//! tracing the optimal tradeoff curve.

mod de;
mod decode;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monogamy::{evaluate_scenario, region3_curve, ScenarioConfig};

pub use de::{maximize, DeOutcome, DeSettings, Member};
pub use decode::{decode_params, decode_with_branch, Region2Branch, SearchMode};

use decode::{rescale_params, scale_cap};

/// Smallest accepted evaluation budget per boundary point.
pub const MIN_BUDGET: usize = 10_000;

/// Reported tolerance on `|achieved_s − target_s|`.
pub const CONSTRAINT_TOL: f64 = 1e-4;

/// One optimized point of the tradeoff curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub target_s: f64,
    /// `|S(A₁,B₁)|` of the returned configuration.
    pub achieved_s: f64,
    pub s_star: f64,
    pub params: Vec<f64>,
    pub evaluations: usize,
    pub seed: u64,
    pub mode: SearchMode,
    /// Layout of `x'` for [`SearchMode::Region2Ansatz`].
    pub branch: Option<Region2Branch>,
    /// `|achieved_s − target_s| <= CONSTRAINT_TOL`.
    pub feasible: bool,
    /// Final penalty weight.
    pub penalty: f64,
}

impl BoundaryPoint {
    /// Rebuilds the scenario the parameters describe.
    pub fn config(&self) -> Result<ScenarioConfig<f64>> {
        decode_with_branch(
            self.mode,
            &self.params,
            self.branch.unwrap_or(Region2Branch::Orthogonal),
        )
    }
}

pub fn boundary_point(s: f64, mode: SearchMode, budget: usize, seed: u64) -> Result<BoundaryPoint> {
    boundary_point_with(s, mode, budget, seed, &DeSettings::default())
}

pub fn boundary_point_with(
    s: f64,
    mode: SearchMode,
    budget: usize,
    seed: u64,
    settings: &DeSettings,
) -> Result<BoundaryPoint> {
    check_target(s)?;
    if budget < MIN_BUDGET {
        return Err(Error::BudgetTooSmall {
            given: budget,
            min: MIN_BUDGET,
        });
    }
    let s = s.clamp(0.0, 2.0 * std::f64::consts::SQRT_2);
    if mode != SearchMode::Region2Ansatz {
        return run(s, mode, Region2Branch::Orthogonal, budget, seed, settings);
    }
    let a = run(s, mode, Region2Branch::Orthogonal, budget / 2, seed, settings)?;
    let b = run(s, mode, Region2Branch::DoubleAngle, budget - budget / 2, seed, settings)?;
    let evaluations = a.evaluations + b.evaluations;
    let pick_b = match (a.feasible, b.feasible) {
        (false, true) => true,
        (true, false) => false,
        _ => b.s_star > a.s_star,
    };
    let mut best = if pick_b { b } else { a };
    best.evaluations = evaluations;
    Ok(best)
}

fn check_target(s: f64) -> Result<()> {
    let max = 2.0 * std::f64::consts::SQRT_2;
    if !(s >= -1e-12 && s <= max + 1e-12) {
        return Err(Error::DomainError(format!(
            "target s = {s} is outside [0, 2√2]"
        )));
    }
    Ok(())
}

/// Scale factors `(c_A, c_B)` with `c_A·c_B = k`, split evenly where the
/// caps allow.
fn split_scale(k: f64, cap_a: f64, cap_b: f64) -> (f64, f64) {
    if k <= 0.0 {
        return (0.0, 0.0);
    }
    let c = k.sqrt();
    let mut ca = c.min(cap_a);
    let cb = (k / ca).min(cap_b);
    if cb > 0.0 {
        ca = (k / cb).min(cap_a);
    }
    (ca, cb)
}

/// Objective with repair: the observables are rescaled (CHSH is bilinear in
/// Alice's and Bob's observables) so that `|S(A₁,B₁)| = s` whenever the
/// strength limits allow, and the rescaled parameters are written back.
fn objective(s: f64, mode: SearchMode, branch: Region2Branch, x: &mut [f64]) -> (f64, f64) {
    let Ok(cfg) = decode_with_branch(mode, x, branch) else {
        return (0.0, f64::INFINITY);
    };
    let Ok(mut res) = evaluate_scenario(&cfg) else {
        return (0.0, f64::INFINITY);
    };
    let raw = res.s_first.abs();
    if raw > 1e-12 && raw != s {
        let (ca, cb) = split_scale(s / raw, scale_cap(&cfg.alice), scale_cap(&cfg.bob));
        if (ca, cb) != (1.0, 1.0) {
            rescale_params(mode, x, &cfg, ca, cb);
            if let Some(r) = decode_with_branch(mode, x, branch)
                .ok()
                .and_then(|c| evaluate_scenario(&c).ok())
            {
                res = r;
            }
        }
    }
    (res.s_star_second, (res.s_first.abs() - s).abs())
}

fn run(
    s: f64,
    mode: SearchMode,
    branch: Region2Branch,
    budget: usize,
    seed: u64,
    settings: &DeSettings,
) -> Result<BoundaryPoint> {
    let bounds = mode.bounds();
    let out = maximize(&bounds, budget, seed, settings, |x| objective(s, mode, branch, x));
    let cfg = decode_with_branch(mode, &out.best.x, branch)?;
    let res = evaluate_scenario(&cfg)?;
    let achieved = res.s_first.abs();
    Ok(BoundaryPoint {
        target_s: s,
        achieved_s: achieved,
        s_star: res.s_star_second,
        params: out.best.x,
        evaluations: out.evaluations,
        seed,
        mode,
        branch: (mode == SearchMode::Region2Ansatz).then_some(branch),
        feasible: (achieved - s).abs() <= CONSTRAINT_TOL,
        penalty: out.penalty,
    })
}

/// One independent optimization per grid value, in parallel; output order
/// follows `grid`.
pub fn boundary_curve(
    grid: &[f64],
    mode: SearchMode,
    budget: usize,
    seed: u64,
) -> Result<Vec<BoundaryPoint>> {
    if grid.is_empty() {
        return Err(Error::DomainError("empty grid".into()));
    }
    for &s in grid {
        check_target(s)?;
    }
    grid.par_iter()
        .map(|&s| boundary_point(s, mode, budget, seed))
        .collect()
}

/// Where the intermediate-region ansatz stops beating the equal-strength
/// orthogonal curve: the first `s` of the ascending `grid` from which on the
/// gap `S*_ansatz(s) − region3(s)` stays at most `tol`, linearly
/// interpolated against the preceding grid value. `None` if the gap never
/// closes.
pub fn locate_region_crossover(
    grid: &[f64],
    budget: usize,
    seed: u64,
    tol: f64,
) -> Result<Option<f64>> {
    let pts = boundary_curve(grid, SearchMode::Region2Ansatz, budget, seed)?;
    let gaps = pts
        .iter()
        .map(|p| Ok(p.s_star - region3_curve(p.target_s)?))
        .collect::<Result<Vec<f64>>>()?;
    let Some(first) = (0..gaps.len()).find(|&i| gaps[i..].iter().all(|&g| g <= tol)) else {
        return Ok(None);
    };
    if first == 0 {
        return Ok(Some(grid[0]));
    }
    let (s0, s1) = (grid[first - 1], grid[first]);
    let (g0, g1) = (gaps[first - 1], gaps[first]);
    let t = if g0 != g1 { (g0 - tol) / (g0 - g1) } else { 1.0 };
    Ok(Some(s0 + t.clamp(0.0, 1.0) * (s1 - s0)))
}
