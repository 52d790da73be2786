//! Seeded sampling audits of the monogamy bounds and the observable
//! tradeoff relations.
//!
//! Sample `i` draws from its own generator seeded with `base_seed + i`, so
//! results do not depend on thread count or scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use num_complex::Complex;

use crate::bell::MeasurementPair;
use crate::error::Result;
use crate::instruments::MeasurementKind;
use crate::linalg::{cross, norm, scale_vec, Vec3};
use crate::monogamy::{
    check_theorem1, check_theorem2, conjecture_margin, evaluate_scenario, optimal_unbiased_pairs,
    theorem1_chain_bound, ScenarioConfig,
};
use crate::observables::Observable;
use crate::states::TwoQubitState;

/// Slack allowed on the monogamy bounds.
pub const MONOGAMY_TOL: f64 = 1e-9;
/// Slack allowed on the single-observable tradeoff relations.
pub const TRADEOFF_TOL: f64 = 1e-12;
/// At most this many offending samples are kept per audit.
pub const MAX_REPORTED: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuditKind {
    Theorem1,
    Theorem2,
    TradeoffChain,
    Conjecture,
}

impl AuditKind {
    pub const ALL: [AuditKind; 4] = [
        AuditKind::Theorem1,
        AuditKind::Theorem2,
        AuditKind::TradeoffChain,
        AuditKind::Conjecture,
    ];
}

/// A sample that violated its bound, kept verbatim for reproduction.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Offender {
    Scenario {
        seed: u64,
        margin: f64,
        config: ScenarioConfig<f64>,
    },
    Observable {
        seed: u64,
        margin: f64,
        observable: Observable<f64>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub kind: AuditKind,
    pub samples: usize,
    pub base_seed: u64,
    /// Smallest slack seen; negative means the bound was exceeded.
    pub worst_margin: f64,
    pub worst_seed: u64,
    pub violations: usize,
    pub offenders: Vec<Offender>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn normalize(v: &Vec3<f64>) -> Option<Vec3<f64>> {
    let n = norm(v);
    (n > 1e-9).then(|| scale_vec(1.0 / n, v))
}

/// Uniformly random unit vector.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> Vec3<f64> {
    loop {
        let v: Vec3<f64> = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        if let Some(u) = normalize(&v) {
            return u;
        }
    }
}

/// Random orthonormal pair: a uniform direction and a uniform direction in
/// its orthogonal plane.
pub fn random_orthogonal_pair<R: Rng + ?Sized>(rng: &mut R) -> (Vec3<f64>, Vec3<f64>) {
    let x = random_direction(rng);
    loop {
        if let Some(y) = normalize(&cross(&x, &random_direction(rng))) {
            return (x, y);
        }
    }
}

/// Haar-random pure two-qubit state.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitState<f64> {
    loop {
        let mut psi = [Complex::new(0.0, 0.0); 4];
        let mut total = 0.0f64;
        for c in psi.iter_mut() {
            *c = Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            total += c.norm_sqr();
        }
        if total < 1e-12 {
            continue;
        }
        let k = 1.0 / total.sqrt();
        for c in psi.iter_mut() {
            *c *= k;
        }
        if let Ok(s) = TwoQubitState::from_state_vector(psi) {
            return s;
        }
    }
}

/// Random valid observable: uniform bias in `[-1, 1]`, uniform strength in
/// `[0, 1 − |B|]`, uniform direction.
pub fn random_observable<R: Rng + ?Sized>(rng: &mut R) -> Observable<f64> {
    let bias: f64 = rng.random_range(-1.0..=1.0);
    let strength = rng.random_range(0.0..=1.0) * (1.0 - bias.abs());
    Observable::new(bias, strength, random_direction(rng))
        .expect("sampled observable within bounds")
}

/// Square-root instruments, or a weak pointer with a random quality below
/// the smallest reversibility in the configuration.
fn random_kind<R: Rng + ?Sized>(rng: &mut R, pairs: [&MeasurementPair<f64>; 2]) -> MeasurementKind<f64> {
    if rng.random_bool(0.75) {
        return MeasurementKind::SquareRoot;
    }
    let r = pairs
        .iter()
        .flat_map(|p| [p.first.reversibility(), p.second.reversibility()])
        .fold(1.0f64, f64::min);
    MeasurementKind::WeakPointer(rng.random_range(0.0..=1.0) * r)
}

/// Strength in `[0, 1]`, biased toward the endpoints and the saturating
/// value so that the edges of the bound are exercised.
fn random_strength<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    match rng.random_range(0..10) {
        0 => 1.0,
        1 => 0.0,
        2 => 2.0 * std::f64::consts::SQRT_2 / 3.0 + rng.random_range(-1e-3..=1e-3),
        _ => rng.random_range(0.0..=1.0),
    }
}

/// Unbiased orthogonal settings on a random pure state.
pub fn sample_theorem1<R: Rng + ?Sized>(rng: &mut R) -> ScenarioConfig<f64> {
    let side = |rng: &mut R| {
        let (x, y) = random_orthogonal_pair(rng);
        MeasurementPair::new(
            Observable::unbiased(random_strength(rng), x).unwrap(),
            Observable::unbiased(random_strength(rng), y).unwrap(),
        )
    };
    let alice = side(rng);
    let bob = side(rng);
    let kind = random_kind(rng, [&alice, &bob]);
    ScenarioConfig::new(random_pure_state(rng), alice, bob, kind)
}

/// Unbiased equal-strength settings on a random pure state.
pub fn sample_theorem2<R: Rng + ?Sized>(rng: &mut R) -> ScenarioConfig<f64> {
    let side = |rng: &mut R| {
        let s = random_strength(rng);
        MeasurementPair::new(
            Observable::unbiased(s, random_direction(rng)).unwrap(),
            Observable::unbiased(s, random_direction(rng)).unwrap(),
        )
    };
    let alice = side(rng);
    let bob = side(rng);
    let kind = random_kind(rng, [&alice, &bob]);
    ScenarioConfig::new(random_pure_state(rng), alice, bob, kind)
}

/// Arbitrary unbiased settings on a random pure state.
pub fn sample_unbiased<R: Rng + ?Sized>(rng: &mut R) -> ScenarioConfig<f64> {
    let obs = |rng: &mut R| Observable::unbiased(random_strength(rng), random_direction(rng)).unwrap();
    let alice = MeasurementPair::new(obs(rng), obs(rng));
    let bob = MeasurementPair::new(obs(rng), obs(rng));
    ScenarioConfig::new(random_pure_state(rng), alice, bob, MeasurementKind::SquareRoot)
}

/// The configuration reaching `8√2/3`: strengths `2√2/3` along the
/// CHSH-optimal directions on the singlet.
pub fn theorem1_saturating() -> ScenarioConfig<f64> {
    let s = 2.0 * std::f64::consts::SQRT_2 / 3.0;
    let (a, b) = optimal_unbiased_pairs(s, s, s, s).unwrap();
    ScenarioConfig::singlet(a, b)
}

/// Projective measurements along one common axis on the singlet: `(2, 2)`.
pub fn theorem2_saturating() -> ScenarioConfig<f64> {
    let z = [0.0, 0.0, 1.0];
    let p = Observable::projective(z).unwrap();
    let pair = MeasurementPair::new(p, p);
    ScenarioConfig::singlet(pair, pair)
}

/// Smallest slack among `1−𝒮 ≤ ℛ² ≤ 1−𝒮²`, `𝒟 ≥ 𝒮 ≥ 𝒟²`, `|ℬ| ≤ ℛ²`
/// and `ℛ² + 𝒮² ≥ 3/4`.
pub fn tradeoff_margin(obs: &Observable<f64>) -> f64 {
    let r = obs.reversibility();
    let s = obs.strength();
    let d = obs.decoherence();
    let b = obs.bias().abs();
    let r2 = r * r;
    [
        r2 - (1.0 - s),
        (1.0 - s * s) - r2,
        d - s,
        s - d * d,
        r2 - b,
        r2 + s * s - 0.75,
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min)
}

fn scenario_margin(kind: AuditKind, cfg: &ScenarioConfig<f64>) -> Result<f64> {
    Ok(match kind {
        AuditKind::Theorem1 => {
            let m = check_theorem1(cfg)?.margin;
            // the intermediate bound must also sit between the two ends
            let chain = theorem1_chain_bound(cfg);
            let res = evaluate_scenario(cfg)?;
            let lower = chain - (res.s_first.abs() + res.s_star_second);
            let upper = crate::monogamy::theorem1_bound::<f64>() - chain;
            m.min(lower).min(upper)
        }
        AuditKind::Theorem2 => check_theorem2(cfg)?.margin,
        AuditKind::Conjecture => conjecture_margin(&evaluate_scenario(cfg)?),
        AuditKind::TradeoffChain => unreachable!("observable audit"),
    })
}

struct Sample {
    seed: u64,
    margin: f64,
    offender: Option<Offender>,
}

fn draw(kind: AuditKind, seed: u64, index: usize) -> Result<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = match kind {
        AuditKind::TradeoffChain => TRADEOFF_TOL,
        _ => MONOGAMY_TOL,
    };
    if kind == AuditKind::TradeoffChain {
        let obs = random_observable(&mut rng);
        let margin = tradeoff_margin(&obs);
        let offender = (margin < -tol).then_some(Offender::Observable {
            seed,
            margin,
            observable: obs,
        });
        return Ok(Sample { seed, margin, offender });
    }
    // sample 0 is the saturating configuration where one is known
    let cfg = match (kind, index) {
        (AuditKind::Theorem1, 0) => theorem1_saturating(),
        (AuditKind::Theorem2, 0) => theorem2_saturating(),
        (AuditKind::Theorem1, _) => sample_theorem1(&mut rng),
        (AuditKind::Theorem2, _) => sample_theorem2(&mut rng),
        _ => sample_unbiased(&mut rng),
    };
    let margin = scenario_margin(kind, &cfg)?;
    let offender = (margin < -tol).then_some(Offender::Scenario {
        seed,
        margin,
        config: cfg,
    });
    Ok(Sample { seed, margin, offender })
}

/// Runs one audit over `samples` seeded draws in parallel.
pub fn run_audit(kind: AuditKind, samples: usize, base_seed: u64) -> Result<AuditReport> {
    let draws = (0..samples)
        .into_par_iter()
        .map(|i| draw(kind, base_seed.wrapping_add(i as u64), i))
        .collect::<Result<Vec<_>>>()?;
    let mut report = AuditReport {
        kind,
        samples,
        base_seed,
        worst_margin: f64::INFINITY,
        worst_seed: base_seed,
        violations: 0,
        offenders: Vec::new(),
    };
    for d in draws {
        if d.margin < report.worst_margin {
            report.worst_margin = d.margin;
            report.worst_seed = d.seed;
        }
        if let Some(o) = d.offender {
            report.violations += 1;
            if report.offenders.len() < MAX_REPORTED {
                report.offenders.push(o);
            }
        }
    }
    Ok(report)
}

/// All four audits with the same sample count and base seed.
pub fn run_all(samples: usize, base_seed: u64) -> Result<Vec<AuditReport>> {
    AuditKind::ALL
        .iter()
        .map(|&k| run_audit(k, samples, base_seed))
        .collect()
}
