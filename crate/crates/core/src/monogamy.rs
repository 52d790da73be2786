//! Sequential scenario `(A₁,B₁) → (A₂,B₂)`, the one-sided monogamy bounds
//! for unbiased observables, and the semi-analytic optimal tradeoff curves.

use serde::Serialize;

use crate::bell::{chsh_value, horodecki_sstar, MeasurementPair};
use crate::error::{Error, Result};
use crate::instruments::{setting_channel, MeasurementKind};
use crate::linalg::{dot, mat_mul, transpose};
use crate::observables::Observable;
use crate::poly::{cubic_real_roots, quadratic_real_roots};
use crate::scalar::{clamped_sqrt, Real};
use crate::states::TwoQubitState;

/// `A₁` and `B₁` measure `alice` and `bob` on `state`, implemented as `kind`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real + Serialize"))]
pub struct ScenarioConfig<T> {
    pub state: TwoQubitState<T>,
    pub alice: MeasurementPair<T>,
    pub bob: MeasurementPair<T>,
    pub kind: MeasurementKind<T>,
}

/// `S(A₁,B₁)` and the best CHSH value `S*(A₂,B₂)` left for the second pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScenarioResult<T> {
    pub s_first: T,
    pub s_star_second: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoremCheck<T> {
    pub holds: bool,
    pub margin: T,
}

impl<T: Real> ScenarioConfig<T> {
    pub fn new(
        state: TwoQubitState<T>,
        alice: MeasurementPair<T>,
        bob: MeasurementPair<T>,
        kind: MeasurementKind<T>,
    ) -> Self {
        Self {
            state,
            alice,
            bob,
            kind,
        }
    }

    /// Square-root measurements on a singlet.
    pub fn singlet(alice: MeasurementPair<T>, bob: MeasurementPair<T>) -> Self {
        Self::new(
            TwoQubitState::singlet(),
            alice,
            bob,
            MeasurementKind::SquareRoot,
        )
    }
}

/// `S(A₁,B₁)` on the initial state and `S*(A₂,B₂)` of `K T Lᵀ`.
pub fn evaluate_scenario<T: Real>(cfg: &ScenarioConfig<T>) -> Result<ScenarioResult<T>> {
    let k = setting_channel(&cfg.alice.first, &cfg.alice.second, cfg.kind)?;
    let l = setting_channel(&cfg.bob.first, &cfg.bob.second, cfg.kind)?;
    let t = mat_mul(&mat_mul(&k, &cfg.state.correlation()), &transpose(&l));
    Ok(ScenarioResult {
        s_first: chsh_value(&cfg.state, &cfg.alice, &cfg.bob),
        s_star_second: horodecki_sstar(&t),
    })
}

/// `4 − (|S(A₁,B₁)| + S*(A₂,B₂))`; non-negative whenever the conjectured
/// relation holds.
pub fn conjecture_margin<T: Real>(res: &ScenarioResult<T>) -> T {
    T::lit(4.0) - (res.s_first.abs() + res.s_star_second)
}

fn require_unbiased<T: Real>(cfg: &ScenarioConfig<T>) -> Result<()> {
    if !(cfg.alice.is_unbiased() && cfg.bob.is_unbiased()) {
        return Err(Error::PreconditionViolation(
            "observables must be unbiased".into(),
        ));
    }
    Ok(())
}

/// Zero-strength observables have no meaningful direction and are treated
/// as orthogonal to anything.
fn is_orthogonal<T: Real>(p: &MeasurementPair<T>) -> bool {
    let tol = T::interface_tol();
    p.first.strength() <= tol
        || p.second.strength() <= tol
        || dot(&p.first.direction(), &p.second.direction()).abs() <= tol
}

fn has_equal_strengths<T: Real>(p: &MeasurementPair<T>) -> bool {
    (p.first.strength() - p.second.strength()).abs() <= T::interface_tol()
}

fn margin_check<T: Real>(bound: T, res: &ScenarioResult<T>) -> TheoremCheck<T> {
    let margin = bound - (res.s_first.abs() + res.s_star_second);
    TheoremCheck {
        holds: margin >= -T::interface_tol(),
        margin,
    }
}

/// `8√2/3`, the bound for orthogonal directions on each side.
pub fn theorem1_bound<T: Real>() -> T {
    T::lit(8.0) * T::SQRT_2() / T::lit(3.0)
}

/// `|S(A₁,B₁)| + S*(A₂,B₂) ≤ 8√2/3` for unbiased observables with
/// orthogonal directions on each side.
pub fn check_theorem1<T: Real>(cfg: &ScenarioConfig<T>) -> Result<TheoremCheck<T>> {
    require_unbiased(cfg)?;
    if !(is_orthogonal(&cfg.alice) && is_orthogonal(&cfg.bob)) {
        return Err(Error::PreconditionViolation(
            "directions must be orthogonal on each side".into(),
        ));
    }
    Ok(margin_check(theorem1_bound(), &evaluate_scenario(cfg)?))
}

/// `|S(A₁,B₁)| + S*(A₂,B₂) ≤ 4` for unbiased observables with equal
/// strengths on each side.
pub fn check_theorem2<T: Real>(cfg: &ScenarioConfig<T>) -> Result<TheoremCheck<T>> {
    require_unbiased(cfg)?;
    if !(has_equal_strengths(&cfg.alice) && has_equal_strengths(&cfg.bob)) {
        return Err(Error::PreconditionViolation(
            "strengths must be equal on each side".into(),
        ));
    }
    Ok(margin_check(T::lit(4.0), &evaluate_scenario(cfg)?))
}

/// `2^{1/4} √(2 − x² − y²)`.
pub fn g1<T: Real>(x: T, y: T) -> T {
    T::lit(2f64.powf(0.25)) * (T::lit(2.0) - x * x - y * y).max(T::zero()).sqrt()
}

/// `2^{-1/2} [(1+x)⁴ + (1+y)⁴]^{1/4}`.
pub fn g2<T: Real>(x: T, y: T) -> T {
    let one = T::one();
    let q = (one + x).powi(4) + (one + y).powi(4);
    T::FRAC_1_SQRT_2() * q.sqrt().sqrt()
}

/// `G(x,y) = √2 (2 − x² − y²) + ½ √((1+x)⁴ + (1+y)⁴) = g1² + g2²`.
pub fn g_orthogonal<T: Real>(x: T, y: T) -> T {
    let one = T::one();
    T::SQRT_2() * (T::lit(2.0) - x * x - y * y)
        + T::lit(0.5) * ((one + x).powi(4) + (one + y).powi(4)).sqrt()
}

/// Configuration-dependent intermediate bound
/// `g1(ℛ_X,ℛ_X')·g1(ℛ_Y,ℛ_Y') + g2(ℛ_X,ℛ_X')·g2(ℛ_Y,ℛ_Y')`, which lies
/// between `|S| + S*` and `max G` for orthogonal unbiased settings.
pub fn theorem1_chain_bound<T: Real>(cfg: &ScenarioConfig<T>) -> T {
    let rx = cfg.alice.first.reversibility();
    let rxp = cfg.alice.second.reversibility();
    let ry = cfg.bob.first.reversibility();
    let ryp = cfg.bob.second.reversibility();
    g1(rx, rxp) * g1(ry, ryp) + g2(rx, rxp) * g2(ry, ryp)
}

/// `f(x,c)⁴ = [(1+x)² + (1−x)² c]² + 4 (1−x²)² c`.
pub fn f_fourth<T: Real>(x: T, c: T) -> T {
    let one = T::one();
    let p = (one + x).powi(2) + (one - x).powi(2) * c;
    let m = one - x * x;
    p * p + T::lit(4.0) * m * m * c
}

/// `g(x,c) = √(2−c) (1−x²) + f(x,c)²/√8`.
pub fn g_equal_strength<T: Real>(x: T, c: T) -> T {
    (T::lit(2.0) - c).sqrt() * (T::one() - x * x) + f_fourth(x, c).sqrt() / T::lit(8.0).sqrt()
}

/// Maximizes `f` over the unit square: an `n × n` grid followed by repeated
/// zooming around the incumbent. Returns `(x, y, f(x, y))`.
pub fn grid_refine_max<T: Real, F: Fn(T, T) -> T>(f: F, n: usize) -> (T, T, T) {
    let n = n.max(2);
    let mut best = (T::zero(), T::zero(), f(T::zero(), T::zero()));
    let scan = |x0: T, x1: T, y0: T, y1: T, k: usize, best: &mut (T, T, T)| {
        let km = T::lit((k - 1) as f64);
        for i in 0..k {
            let x = x0 + (x1 - x0) * T::lit(i as f64) / km;
            for j in 0..k {
                let y = y0 + (y1 - y0) * T::lit(j as f64) / km;
                let v = f(x, y);
                if v > best.2 {
                    *best = (x, y, v);
                }
            }
        }
    };
    scan(T::zero(), T::one(), T::zero(), T::one(), n, &mut best);
    let mut half = T::one() / T::lit((n - 1) as f64);
    for _ in 0..200 {
        let clamp = |v: T| v.max(T::zero()).min(T::one());
        let (bx, by) = (best.0, best.1);
        scan(
            clamp(bx - half),
            clamp(bx + half),
            clamp(by - half),
            clamp(by + half),
            21,
            &mut best,
        );
        half = half * T::lit(0.5);
        if half < T::epsilon() {
            break;
        }
    }
    best
}

/// First region of the optimal curve, parameterized by `r = ℛ_X`:
/// `(2(1−r)√(1+r), √(4 + (1+r)² r))`.
pub fn region1_parametric<T: Real>(r: T) -> (T, T) {
    let one = T::one();
    let s = T::lit(2.0) * (one - r) * (one + r).sqrt();
    let s_star = (T::lit(4.0) + (one + r) * (one + r) * r).sqrt();
    (s, s_star)
}

/// First region of the optimal curve as an explicit function of
/// `s = S(A₁,B₁) ∈ (0, 2]`.
///
/// `h` is the largest real root of
/// `(s²−4)z³ − (3s²−16)z² + (3s²−16)z − s²`; then `𝒮_Y²` is the largest
/// root of `4h z² + s²(1−h) z − s²` and
/// `S* = √(4 + ¼(1−𝒮_Y²)(2 + √(4 − s²/𝒮_Y²))²)`.
pub fn region1_closed<T: Real>(s: T) -> Result<T> {
    let tol = T::construction_tol();
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    if !(s > -tol && s <= two + tol) {
        return Err(Error::DomainError(format!(
            "region-1 curve is defined for s in (0, 2], got {s}"
        )));
    }
    if s < T::lit(1e-6) {
        return Ok(two * T::SQRT_2());
    }
    if s >= two - tol {
        // The cubic degenerates at s = 2; the curve joins at (2, 2).
        return Ok(two);
    }
    let s2 = s * s;
    let sixteen = T::lit(16.0);
    let k = T::lit(3.0) * s2 - sixteen;
    let h = cubic_real_roots(s2 - four, -k, k, -s2)
        .into_iter()
        .filter(|z| z.is_finite())
        .fold(None, |acc: Option<T>, z| Some(acc.map_or(z, |a| a.max(z))))
        .filter(|&h| h >= two - T::interface_tol())
        .ok_or(Error::NoRealRoot(s.as_f64()))?;
    let h = polish_h(s, h);

    let sy2 = quadratic_real_roots(four * h, s2 * (T::one() - h), -s2)
        .last()
        .copied()
        .filter(|&z| z > T::zero())
        .ok_or(Error::NoRealRoot(s.as_f64()))?;
    let ratio = s2 / sy2;
    let inner = clamped_sqrt(four - ratio, T::interface_tol()).ok_or_else(|| {
        Error::DomainError(format!("s²/𝒮_Y² = {ratio} exceeds 4 at s = {s}"))
    })?;
    let q = two + inner;
    Ok((four + T::lit(0.25) * (T::one() - sy2) * q * q).sqrt())
}

/// Newton refinement of `h`. With `u = 1 − 2/h ∈ [0, 1)` the cubic reads
/// `√32·u = s(1+u)^{3/2}` (after a square root), whose left minus right side
/// is increasing in `u`; unlike the cubic it has no double root as `s → 0`.
fn polish_h<T: Real>(s: T, h: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let c = T::lit(32.0).sqrt();
    let mut u = (one - two / h).max(T::zero()).min(one);
    for _ in 0..8 {
        let w = (one + u).sqrt();
        let f = c * u - s * (one + u) * w;
        let df = c - T::lit(1.5) * s * w;
        if df <= T::zero() {
            break;
        }
        let next = (u - f / df).max(T::zero()).min(one);
        if next == u {
            break;
        }
        u = next;
    }
    two / (one - u)
}

/// Third region of the optimal curve:
/// `S* = √2 − s/4 + √(2 − s/√2)` for `s ∈ [0, 2√2]`.
pub fn region3_curve<T: Real>(s: T) -> Result<T> {
    let tol = T::construction_tol();
    let two = T::lit(2.0);
    let max = two * T::SQRT_2();
    if !(s >= -tol && s <= max + tol) {
        return Err(Error::DomainError(format!(
            "region-3 curve is defined for s in [0, 2√2], got {s}"
        )));
    }
    let s = s.max(T::zero()).min(max);
    let root = (two - s * T::FRAC_1_SQRT_2()).max(T::zero()).sqrt();
    Ok(T::SQRT_2() - s / T::lit(4.0) + root)
}

/// The exponent `d` solving `(2√2)^d + (2^{−1/2})^d = 2^{d+1}`, found by
/// bisection on `[1, 3]`.
pub fn max_exponent_d<T: Real>() -> T {
    let two = T::lit(2.0);
    let a = two * T::SQRT_2();
    let b = T::FRAC_1_SQRT_2();
    let f = |d: T| a.powf(d) + b.powf(d) - two.powf(d + T::one());
    let (mut lo, mut hi) = (T::one(), T::lit(3.0));
    for _ in 0..200 {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / two
}

/// Residual of the exponent equation at `d`.
pub fn exponent_residual<T: Real>(d: T) -> T {
    let two = T::lit(2.0);
    (two * T::SQRT_2()).powf(d) + T::FRAC_1_SQRT_2().powf(d) - two.powf(d + T::one())
}

/// CHSH-optimal unbiased settings of the given strengths: `x = e₁`,
/// `x' = e₂`, `y = −(e₁+e₂)/√2`, `y' = −(e₁−e₂)/√2`.
pub fn optimal_unbiased_pairs<T: Real>(
    sx: T,
    sxp: T,
    sy: T,
    syp: T,
) -> Result<(MeasurementPair<T>, MeasurementPair<T>)> {
    let o = T::zero();
    let h = T::FRAC_1_SQRT_2();
    let alice = MeasurementPair::new(
        Observable::unbiased(sx, [T::one(), o, o])?,
        Observable::unbiased(sxp, [o, T::one(), o])?,
    );
    let bob = MeasurementPair::new(
        Observable::unbiased(sy, [-h, -h, o])?,
        Observable::unbiased(syp, [-h, h, o])?,
    );
    Ok((alice, bob))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn singlet_cfg(sx: f64, sy: f64) -> ScenarioConfig<f64> {
        let (a, b) = optimal_unbiased_pairs(sx, sx, sy, sy).unwrap();
        ScenarioConfig::singlet(a, b)
    }

    #[test]
    fn scenario_anchors() {
        let t = Observable::trivial(0.0).unwrap();
        let p = MeasurementPair::new(t, t);
        let r = evaluate_scenario(&ScenarioConfig::singlet(p, p)).unwrap();
        assert_eq!(r.s_first, 0.0);
        assert!((r.s_star_second - 2.0 * SQRT_2).abs() < 1e-12);

        let r = evaluate_scenario(&singlet_cfg(1.0, 1.0)).unwrap();
        assert!((r.s_first - 2.0 * SQRT_2).abs() < 1e-12);
        assert!((r.s_star_second - FRAC_1_SQRT_2).abs() < 1e-12);

        let s = 2.0 * SQRT_2 / 3.0;
        let r = evaluate_scenario(&singlet_cfg(s, s)).unwrap();
        assert!((r.s_first - 16.0 * SQRT_2 / 9.0).abs() < 1e-12);
        assert!((r.s_star_second - 8.0 * SQRT_2 / 9.0).abs() < 1e-12);
        let chk = check_theorem1(&singlet_cfg(s, s)).unwrap();
        assert!(chk.holds && chk.margin.abs() < 1e-9);
    }

    #[test]
    fn theorem_preconditions() {
        let x = Observable::unbiased(0.5, [1.0, 0.0, 0.0]).unwrap();
        let skew = Observable::unbiased(0.5, [1.0, 1.0, 0.0]).unwrap();
        let pair = MeasurementPair::new(x, skew);
        assert!(matches!(
            check_theorem1(&ScenarioConfig::singlet(pair, pair)),
            Err(Error::PreconditionViolation(_))
        ));
        let biased = Observable::new(0.1, 0.5, [0.0, 1.0, 0.0]).unwrap();
        let pair = MeasurementPair::new(x, biased);
        assert!(check_theorem1(&ScenarioConfig::singlet(pair, pair)).is_err());
        let uneq = MeasurementPair::new(x, Observable::unbiased(0.7, [0.0, 1.0, 0.0]).unwrap());
        assert!(check_theorem2(&ScenarioConfig::singlet(uneq, uneq)).is_err());
    }

    #[test]
    fn theorem2_saturation_and_trivial_margin() {
        let z = Observable::<f64>::projective([0.0, 0.0, 1.0]).unwrap();
        let a = MeasurementPair::new(z, z);
        let zn = Observable::projective([0.0, 0.0, -1.0]).unwrap();
        let b = MeasurementPair::new(zn, zn);
        let cfg = ScenarioConfig::singlet(a, b);
        let r = evaluate_scenario(&cfg).unwrap();
        assert!((r.s_first - 2.0).abs() < 1e-12 && (r.s_star_second - 2.0).abs() < 1e-12);
        assert!(check_theorem2(&cfg).unwrap().margin.abs() < 1e-12);

        let t = Observable::unbiased(0.0, [0.0, 0.0, 1.0]).unwrap();
        let p = MeasurementPair::new(t, t);
        let chk = check_theorem2(&ScenarioConfig::singlet(p, p)).unwrap();
        assert!((chk.margin - (4.0 - 2.0 * SQRT_2)).abs() < 1e-12);
        let chk = check_theorem1(&ScenarioConfig::singlet(p, p)).unwrap();
        assert!(chk.holds);
    }

    #[test]
    fn g_functions() {
        let third = 1.0 / 3.0;
        assert!((g_orthogonal(third, third) - 8.0 * SQRT_2 / 3.0).abs() < 1e-14);
        assert!((g_orthogonal(1.0, 1.0) - 2.0 * SQRT_2).abs() < 1e-14);
        assert!((g_orthogonal(0.0, 0.0) - 2.5 * SQRT_2).abs() < 1e-14);
        for (x, y) in [(0.2, 0.7), (1.0, 0.0), (third, third)] {
            let sum = g1(x, y).powi(2) + g2(x, y).powi(2);
            assert!((sum - g_orthogonal(x, y)).abs() < 1e-13);
        }
        assert!((g_equal_strength(0.0f64, 1.0) - 2.0).abs() < 1e-14);
        for c in [0.0, 0.4, 1.0] {
            assert!((g_equal_strength(1.0, c) - SQRT_2).abs() < 1e-14);
        }
    }

    #[test]
    fn grid_refine_finds_maxima() {
        let (x, y, v) = grid_refine_max(g_orthogonal::<f64>, 201);
        assert!((v - 8.0 * SQRT_2 / 3.0).abs() < 1e-9);
        assert!((x - 1.0 / 3.0).abs() < 1e-4 && (y - 1.0 / 3.0).abs() < 1e-4);
        let (x, c, v) = grid_refine_max(g_equal_strength::<f64>, 201);
        assert!((v - 2.0).abs() < 1e-12 && x.abs() < 1e-9 && (c - 1.0).abs() < 1e-9);
    }

    #[test]
    fn region1_forms_agree() {
        assert_eq!(region1_parametric(0.0), (2.0, 2.0));
        let (s, ss) = region1_parametric(1.0);
        assert_eq!(s, 0.0);
        assert!((ss - 2.0 * SQRT_2).abs() < 1e-15);
        let (s, ss) = region1_parametric(0.5f64);
        assert!((s - 1.224_744_871_391_589).abs() < 1e-12);
        assert!((ss - 2.263_846_284_534_354).abs() < 1e-12);

        for r in [1e-4f64, 0.05, 0.3, 0.5, 0.8, 0.99, 0.9999] {
            let (s, ss) = region1_parametric(r);
            let c = region1_closed(s).unwrap();
            assert!((c - ss).abs() < 1e-10, "r = {r}: {c} vs {ss}");
        }
        assert_eq!(region1_closed(2.0).unwrap(), 2.0);
        assert!((region1_closed(1e-8).unwrap() - 2.0 * SQRT_2).abs() < 1e-15);
        let v = region1_closed(1.0).unwrap();
        assert!(v > 2.0 && v < 2.0 * SQRT_2);
        assert!(region1_closed(2.1).is_err());
    }

    #[test]
    fn region1_closed_is_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 1..=200 {
            let v = region1_closed(i as f64 / 100.0).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn region3_values() {
        assert!((region3_curve(2.0 * SQRT_2).unwrap() - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((region3_curve(0.0).unwrap() - 2.0 * SQRT_2).abs() < 1e-15);
        // √2 − 0.7 + √(2 − 2.8/√2)
        let v = region3_curve(2.8f64).unwrap();
        assert!((v - 0.855_991_602_554_455_1).abs() < 1e-12, "{v}");
        assert!(region3_curve(2.9).is_err());
    }

    #[test]
    fn exponent() {
        let d: f64 = max_exponent_d();
        assert!((1.75..=1.76).contains(&d), "{d}");
        assert!(exponent_residual(d).abs() < 1e-10);
    }

    #[test]
    fn conjecture_margins() {
        let r = ScenarioResult {
            s_first: 2.0 * SQRT_2,
            s_star_second: FRAC_1_SQRT_2,
        };
        assert!((conjecture_margin(&r) - (4.0 - 2.5 * SQRT_2)).abs() < 1e-14);
        let r = ScenarioResult {
            s_first: 2.0,
            s_star_second: 2.0,
        };
        assert_eq!(conjecture_margin(&r), 0.0);
    }
}
