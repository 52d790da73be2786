//! Chains of many Alices and Bobs: transfer-matrix chains, one Alice
//! sharing nonlocality with several Bobs, noise robustness, and the
//! multi-pair construction for many Alices.

use serde::Serialize;

use crate::bell::{chsh_value, MeasurementPair};
use crate::error::{Error, Result};
use crate::instruments::{apply_chain, setting_channel, MeasurementKind};
use crate::linalg::{add_vec, scale_vec, svd3_full, Mat3, Vec3};
use crate::observables::Observable;
use crate::scalar::Real;
use crate::states::TwoQubitState;

/// Observers on one side in measurement order, each choosing between two
/// observables with equal probability.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObserverPlan<T> {
    pub pairs: Vec<MeasurementPair<T>>,
    pub kind: MeasurementKind<T>,
}

impl<T: Real> ObserverPlan<T> {
    pub fn new(pairs: Vec<MeasurementPair<T>>, kind: MeasurementKind<T>) -> Self {
        Self { pairs, kind }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Transfer matrices of the first `count` observers.
    fn channels(&self, count: usize) -> Result<Vec<Mat3<T>>> {
        self.pairs[..count]
            .iter()
            .map(|p| setting_channel(&p.first, &p.second, self.kind))
            .collect()
    }
}

/// CHSH value between Alice `m` and Bob `n` (1-based) after every earlier
/// observer on each side has measured.
pub fn chain_chsh<T: Real>(
    state: &TwoQubitState<T>,
    alice_plan: &ObserverPlan<T>,
    bob_plan: &ObserverPlan<T>,
    m: usize,
    n: usize,
) -> Result<T> {
    for (idx, len) in [(m, alice_plan.len()), (n, bob_plan.len())] {
        if idx == 0 || idx > len {
            return Err(Error::IndexOutOfRange { index: idx, len });
        }
    }
    let ks = alice_plan.channels(m - 1)?;
    let ls = bob_plan.channels(n - 1)?;
    let evolved = apply_chain(state, &ks, &ls);
    Ok(chsh_value(
        &evolved,
        &alice_plan.pairs[m - 1],
        &bob_plan.pairs[n - 1],
    ))
}

/// One Alice measuring projectively, followed by a sequence of Bobs.
///
/// With `T = U diag(s) Vᵀ`, Alice measures `cos α·u₁ ± sin α·u₂`. Bob `n`
/// measures unbiased observables along `v₁` and `v₂` with strengths
/// `(a_n, b_n)`; the last Bob is projective.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiBobSchedule<T> {
    pub correlation: Mat3<T>,
    pub alice: MeasurementPair<T>,
    pub tilt: T,
    pub bobs: Vec<MeasurementPair<T>>,
    /// `(a_n, b_n)` for every Bob.
    pub bob_strengths: Vec<[T; 2]>,
    /// `S(A, B_n)` evaluated through the transfer chain.
    pub chsh_values: Vec<T>,
    pub margin: T,
}

impl<T: Real> MultiBobSchedule<T> {
    pub fn bob_plan(&self) -> ObserverPlan<T> {
        ObserverPlan::new(self.bobs.clone(), MeasurementKind::SquareRoot)
    }

    pub fn alice_plan(&self) -> ObserverPlan<T> {
        ObserverPlan::new(vec![self.alice], MeasurementKind::SquareRoot)
    }

    /// Zero local Bloch vectors with the schedule's correlation matrix.
    pub fn base_state(&self) -> TwoQubitState<T> {
        let z = [T::zero(); 3];
        TwoQubitState::from_parts(z, z, self.correlation)
    }

    /// `S(A, B_n)` for all Bobs when the schedule is run on `state`.
    pub fn chsh_on(&self, state: &TwoQubitState<T>) -> Result<Vec<T>> {
        let a = self.alice_plan();
        let b = self.bob_plan();
        (1..=self.bobs.len())
            .map(|n| chain_chsh(state, &a, &b, 1, n))
            .collect()
    }

    pub fn is_feasible(&self) -> bool {
        self.chsh_values.iter().all(|&v| v > T::lit(2.0))
    }
}

/// Outcome of the scalar recursion for one tilt angle.
struct Recursion<T> {
    strengths: Vec<[T; 2]>,
    values: Vec<T>,
    /// Index of the first Bob that could not exceed 2 (or reach the target).
    failed_at: Option<usize>,
}

impl<T: Real> Recursion<T> {
    /// Ranking: more Bobs served first, then the weakest value.
    fn score(&self) -> (usize, T) {
        let served = self.failed_at.unwrap_or(self.values.len());
        let last = self.values.last().copied().unwrap_or(T::zero());
        (served, last)
    }
}

fn better<T: Real>(a: &Recursion<T>, b: &Recursion<T>) -> bool {
    let (sa, va) = a.score();
    let (sb, vb) = b.score();
    sa > sb || (sa == sb && va > vb)
}

fn rev<T: Real>(s: T) -> T {
    (T::one() - s * s).max(T::zero()).sqrt()
}

/// Maximizes `f` on `[lo, hi]` by golden-section search.
fn golden_max<T: Real, F: Fn(T) -> T>(f: F, mut lo: T, mut hi: T) -> T {
    let g = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo <= T::epsilon() * (T::one() + lo.abs() + hi.abs()) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    (lo + hi) / T::lit(2.0)
}

/// Strength recursion for a fixed tilt: every intermediate Bob hits
/// `S = 2 + margin` exactly, choosing among the admissible `(a, b)` the one
/// that leaves the largest CHSH value for a projective successor.
fn recursion<T: Real>(s1: T, s2: T, tilt: T, n_bobs: usize, margin: T) -> Recursion<T> {
    let one = T::one();
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let (sin, cos) = tilt.sin_cos();
    let (mut z, mut x) = (one, one);
    let mut out = Recursion {
        strengths: Vec::with_capacity(n_bobs),
        values: Vec::with_capacity(n_bobs),
        failed_at: None,
    };
    let target = one + margin * half;
    for k in 0..n_bobs {
        let c = cos * s1 * z;
        let d = sin * s2 * x;
        let (a, b) = if k + 1 == n_bobs {
            (one, one)
        } else {
            let a_lo = if d > T::zero() { ((target - d) / c).max(T::zero()) } else { target / c };
            let a_hi = (target / c).min(one);
            if !(c > T::zero()) || a_lo > a_hi {
                out.strengths.push([one, one]);
                out.values.push(two * (c + d));
                out.failed_at = Some(k);
                return out;
            }
            let b_of = |a: T| {
                if d > T::zero() {
                    ((target - a * c) / d).max(T::zero()).min(one)
                } else {
                    T::zero()
                }
            };
            let potential = |a: T| c * (one + rev(b_of(a))) + d * (one + rev(a));
            let a = golden_max(potential, a_lo, a_hi);
            (a, b_of(a))
        };
        let v = two * (a * c + b * d);
        out.strengths.push([a, b]);
        out.values.push(v);
        if v <= two {
            out.failed_at = Some(k);
            return out;
        }
        z = z * (one + rev(b)) * half;
        x = x * (one + rev(a)) * half;
    }
    out
}

/// Plans strengths for `n_bobs` Bobs sharing nonlocality with one Alice on
/// a state with correlation matrix `t` and zero local Bloch vectors.
///
/// Scans the tilt `α` of Alice's pair over `(0, π/2)`, refines the best
/// value, and fails with [`Error::Infeasible`] naming the first Bob that
/// cannot exceed 2 (intermediate Bobs must reach `2 + margin`).
pub fn plan_multibob<T: Real>(t: &Mat3<T>, n_bobs: usize, margin: T) -> Result<MultiBobSchedule<T>> {
    if n_bobs == 0 {
        return Err(Error::DomainError("at least one Bob is required".into()));
    }
    if !(margin > T::zero()) {
        return Err(Error::DomainError(format!("margin must be positive, got {margin}")));
    }
    let (u, s, v) = svd3_full(t);
    if s[0] > T::one() + T::interface_tol() {
        return Err(Error::InvalidState(format!(
            "largest singular value of T is {}",
            s[0]
        )));
    }
    let (s1, s2) = (s[0], s[1]);

    const SCAN: usize = 2048;
    let step = T::FRAC_PI_2() / T::lit(SCAN as f64);
    // linear scan plus log-spaced scans toward both ends, where long chains
    // with small margins live
    let log_lo = T::lit(1e-8).ln();
    let log_hi = step.ln();
    let near_edge = (0..SCAN).map(|i| {
        (log_lo + (log_hi - log_lo) * T::lit(i as f64) / T::lit(SCAN as f64)).exp()
    });
    let tilts = (1..SCAN)
        .map(|i| step * T::lit(i as f64))
        .chain(near_edge.clone())
        .chain(near_edge.map(|e| T::FRAC_PI_2() - e));
    let mut best_tilt = step;
    let mut best = recursion(s1, s2, best_tilt, n_bobs, margin);
    for tilt in tilts {
        let r = recursion(s1, s2, tilt, n_bobs, margin);
        if better(&r, &best) {
            best = r;
            best_tilt = tilt;
        }
    }
    let served = best.score().0;
    let width = step
        .min(best_tilt * T::lit(0.01))
        .min((T::FRAC_PI_2() - best_tilt) * T::lit(0.01));
    let lo = (best_tilt - width).max(T::zero());
    let hi = (best_tilt + width).min(T::FRAC_PI_2());
    let refined = golden_max(
        |a| {
            let r = recursion(s1, s2, a, n_bobs, margin);
            if r.score().0 == served {
                r.score().1
            } else {
                T::neg_infinity()
            }
        },
        lo,
        hi,
    );
    let r = recursion(s1, s2, refined, n_bobs, margin);
    let (tilt, best) = if better(&best, &r) { (best_tilt, best) } else { (refined, r) };

    if let Some(k) = best.failed_at {
        return Err(Error::Infeasible {
            bob: k + 1,
            value: best.values[k].as_f64(),
        });
    }

    let col = |m: &Mat3<T>, j: usize| -> Vec3<T> { [m[0][j], m[1][j], m[2][j]] };
    let (u1, u2, v1, v2) = (col(&u, 0), col(&u, 1), col(&v, 0), col(&v, 1));
    let (sin, cos) = tilt.sin_cos();
    let alice = MeasurementPair::new(
        Observable::projective(add_vec(&scale_vec(cos, &u1), &scale_vec(sin, &u2)))?,
        Observable::projective(add_vec(&scale_vec(cos, &u1), &scale_vec(-sin, &u2)))?,
    );
    let bobs = best
        .strengths
        .iter()
        .map(|&[a, b]| {
            Ok(MeasurementPair::new(
                Observable::unbiased(a, v1)?,
                Observable::unbiased(b, v2)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut schedule = MultiBobSchedule {
        correlation: *t,
        alice,
        tilt,
        bobs,
        bob_strengths: best.strengths,
        chsh_values: Vec::new(),
        margin,
    };
    schedule.chsh_values = schedule.chsh_on(&schedule.base_state())?;
    if let Some((k, &v)) = schedule
        .chsh_values
        .iter()
        .enumerate()
        .find(|(_, &v)| v <= T::lit(2.0))
    {
        return Err(Error::Infeasible {
            bob: k + 1,
            value: v.as_f64(),
        });
    }
    Ok(schedule)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseReport<T> {
    pub s_min: T,
    /// `2 / s_min`: every mixture with weight `p > p_min` on the ideal state
    /// keeps all CHSH values above 2.
    pub p_min: T,
}

pub fn noise_robustness<T: Real>(schedule: &MultiBobSchedule<T>) -> Result<NoiseReport<T>> {
    let two = T::lit(2.0);
    let mut s_min = T::infinity();
    for (k, &v) in schedule.chsh_values.iter().enumerate() {
        if !(v > two) {
            return Err(Error::NotNonlocal {
                bob: k + 1,
                value: v.as_f64(),
            });
        }
        s_min = s_min.min(v);
    }
    if schedule.chsh_values.is_empty() {
        return Err(Error::DomainError("empty schedule".into()));
    }
    Ok(NoiseReport {
        s_min,
        p_min: two / s_min,
    })
}

/// `M` Alices and `N` Bobs on `M` qubit pairs, each pair prepared in the
/// schedule's state. Alice `m` applies the schedule's pair on qubit pair `m`
/// and the identity observable `X = 𝟙` on all others; every Bob applies his
/// scheduled pair on every qubit pair. Entry `[m][n]` is
/// `max_q S_q(A_{m+1}, B_{n+1})`.
pub fn multipair_scenario<T: Real>(
    m_alices: usize,
    n_bobs: usize,
    base: &MultiBobSchedule<T>,
) -> Result<Vec<Vec<T>>> {
    if base.bobs.len() < n_bobs {
        return Err(Error::Infeasible {
            bob: base.bobs.len() + 1,
            value: 0.0,
        });
    }
    if let Some((k, &v)) = base.chsh_values[..n_bobs]
        .iter()
        .enumerate()
        .find(|(_, &v)| !(v > T::lit(2.0)))
    {
        return Err(Error::Infeasible {
            bob: k + 1,
            value: v.as_f64(),
        });
    }
    let identity = Observable::trivial(T::one())?;
    let idle = MeasurementPair::new(identity, identity);
    let state = base.base_state();
    let bob_plan = ObserverPlan::new(base.bobs[..n_bobs].to_vec(), MeasurementKind::SquareRoot);
    let mut out = vec![vec![T::neg_infinity(); n_bobs]; m_alices];
    for q in 0..m_alices {
        let pairs = (0..m_alices)
            .map(|m| if m == q { base.alice } else { idle })
            .collect();
        let alice_plan = ObserverPlan::new(pairs, MeasurementKind::SquareRoot);
        for (m, row) in out.iter_mut().enumerate() {
            for (n, entry) in row.iter_mut().enumerate() {
                let v = chain_chsh(&state, &alice_plan, &bob_plan, m + 1, n + 1)?;
                *entry = entry.max(v);
            }
        }
    }
    Ok(out)
}
