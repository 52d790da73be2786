//! Box-constrained parameter layouts of the search modes.

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::bell::MeasurementPair;
use crate::error::{Error, Result};
use crate::instruments::MeasurementKind;
use crate::monogamy::ScenarioConfig;
use crate::observables::{from_reversibility_angle, Observable};
use crate::states::TwoQubitState;

/// Restriction of the search space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Biased observables on a Schmidt-form pure state: per observable
    /// `(r, u, polar, azimuth)` with bias angle `α = u·arcsin r`, then the
    /// Schmidt angle.
    GeneralBiased,
    /// Unbiased observables `(strength, polar, azimuth)` and the Schmidt angle.
    Unbiased,
    /// Unbiased observables on the singlet.
    UnbiasedSinglet,
    /// Unbiased observables in the equatorial plane, `(strength, angle)`.
    UnbiasedSingletEquatorial,
    /// `(𝒮_X, 𝒮_X', 𝒮_Y, θ)` with `𝒮_Y' = 𝒮_Y`, `x = e₂`,
    /// `y = (sin θ, cos θ, 0)`, `y' = (−sin θ, cos θ, 0)`.
    Region2Ansatz,
}

/// Choice of `x'` in the intermediate-region ansatz.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region2Branch {
    /// `x' = (1, 0, 0)`.
    Orthogonal,
    /// `x' = (sin 2θ, cos 2θ, 0)`.
    DoubleAngle,
}

impl SearchMode {
    pub const ALL: [SearchMode; 5] = [
        SearchMode::GeneralBiased,
        SearchMode::Unbiased,
        SearchMode::UnbiasedSinglet,
        SearchMode::UnbiasedSingletEquatorial,
        SearchMode::Region2Ansatz,
    ];

    pub fn param_count(self) -> usize {
        match self {
            SearchMode::GeneralBiased => 17,
            SearchMode::Unbiased => 13,
            SearchMode::UnbiasedSinglet => 12,
            SearchMode::UnbiasedSingletEquatorial => 8,
            SearchMode::Region2Ansatz => 4,
        }
    }

    /// `(lower, upper)` for every parameter.
    pub fn bounds(self) -> Vec<(f64, f64)> {
        let per_obs: &[(f64, f64)] = match self {
            SearchMode::GeneralBiased => &[(0.0, 1.0), (-1.0, 1.0), (0.0, PI), (0.0, TAU)],
            SearchMode::Unbiased | SearchMode::UnbiasedSinglet => {
                &[(0.0, 1.0), (0.0, PI), (0.0, TAU)]
            }
            SearchMode::UnbiasedSingletEquatorial => &[(0.0, 1.0), (0.0, TAU)],
            SearchMode::Region2Ansatz => {
                return vec![(0.0, 1.0), (0.0, 1.0), (0.0, 1.0), (0.0, PI)];
            }
        };
        let mut b: Vec<_> = (0..4).flat_map(|_| per_obs.iter().copied()).collect();
        if matches!(self, SearchMode::GeneralBiased | SearchMode::Unbiased) {
            b.push((0.0, FRAC_PI_4));
        }
        b
    }

    pub fn name(self) -> &'static str {
        match self {
            SearchMode::GeneralBiased => "general-biased",
            SearchMode::Unbiased => "unbiased",
            SearchMode::UnbiasedSinglet => "unbiased-singlet",
            SearchMode::UnbiasedSingletEquatorial => "unbiased-singlet-equatorial",
            SearchMode::Region2Ansatz => "region2-ansatz",
        }
    }

    /// Slots holding each observable's strength-like parameter, in the
    /// order `X, X', Y, Y'`. Region2Ansatz shares one slot between `Y, Y'`.
    fn strength_slots(self) -> [usize; 4] {
        match self {
            SearchMode::GeneralBiased => [0, 4, 8, 12],
            SearchMode::Unbiased | SearchMode::UnbiasedSinglet => [0, 3, 6, 9],
            SearchMode::UnbiasedSingletEquatorial => [0, 2, 4, 6],
            SearchMode::Region2Ansatz => [0, 1, 2, 2],
        }
    }
}

impl std::fmt::Display for SearchMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SearchMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SearchMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::DomainError(format!("unknown search mode '{s}'")))
    }
}

fn spherical(polar: f64, azimuth: f64) -> [f64; 3] {
    let (sp, cp) = polar.sin_cos();
    let (sa, ca) = azimuth.sin_cos();
    [sp * ca, sp * sa, cp]
}

fn planar(angle: f64) -> [f64; 3] {
    let (s, c) = angle.sin_cos();
    [c, s, 0.0]
}

/// `(bias, strength)` of the biased parameterization `(r, u)`.
fn biased_strength(r: f64, u: f64) -> Result<(f64, f64)> {
    let r = r.clamp(0.0, 1.0);
    let alpha = u.clamp(-1.0, 1.0) * r.asin();
    let sb = from_reversibility_angle(r, alpha)?;
    Ok((sb.bias, sb.strength))
}

/// Maps a parameter vector to a scenario; square-root measurements.
/// Region2Ansatz uses the [`Region2Branch::Orthogonal`] layout.
pub fn decode_params(mode: SearchMode, params: &[f64]) -> Result<ScenarioConfig<f64>> {
    decode_with_branch(mode, params, Region2Branch::Orthogonal)
}

pub fn decode_with_branch(
    mode: SearchMode,
    params: &[f64],
    branch: Region2Branch,
) -> Result<ScenarioConfig<f64>> {
    let n = mode.param_count();
    if params.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: params.len(),
        });
    }
    let p = params;
    let unb = |k: usize| Observable::unbiased(p[k].clamp(0.0, 1.0), spherical(p[k + 1], p[k + 2]));
    let (obs, state) = match mode {
        SearchMode::GeneralBiased => {
            let mut o = Vec::with_capacity(4);
            for k in 0..4 {
                let q = &p[4 * k..4 * k + 4];
                let (bias, strength) = biased_strength(q[0], q[1])?;
                o.push(Observable::new(bias, strength, spherical(q[2], q[3]))?);
            }
            (o, TwoQubitState::from_schmidt(p[16].clamp(0.0, FRAC_PI_4))?)
        }
        SearchMode::Unbiased => (
            vec![unb(0)?, unb(3)?, unb(6)?, unb(9)?],
            TwoQubitState::from_schmidt(p[12].clamp(0.0, FRAC_PI_4))?,
        ),
        SearchMode::UnbiasedSinglet => (
            vec![unb(0)?, unb(3)?, unb(6)?, unb(9)?],
            TwoQubitState::singlet(),
        ),
        SearchMode::UnbiasedSingletEquatorial => {
            let mut o = Vec::with_capacity(4);
            for k in 0..4 {
                o.push(Observable::unbiased(p[2 * k].clamp(0.0, 1.0), planar(p[2 * k + 1]))?);
            }
            (o, TwoQubitState::singlet())
        }
        SearchMode::Region2Ansatz => {
            let (st, ct) = p[3].sin_cos();
            let x_prime = match branch {
                Region2Branch::Orthogonal => [1.0, 0.0, 0.0],
                Region2Branch::DoubleAngle => {
                    let (s2, c2) = (2.0 * p[3]).sin_cos();
                    [s2, c2, 0.0]
                }
            };
            let sy = p[2].clamp(0.0, 1.0);
            (
                vec![
                    Observable::unbiased(p[0].clamp(0.0, 1.0), [0.0, 1.0, 0.0])?,
                    Observable::unbiased(p[1].clamp(0.0, 1.0), x_prime)?,
                    Observable::unbiased(sy, [st, ct, 0.0])?,
                    Observable::unbiased(sy, [-st, ct, 0.0])?,
                ],
                TwoQubitState::singlet(),
            )
        }
    };
    Ok(ScenarioConfig::new(
        state,
        MeasurementPair::new(obs[0], obs[1]),
        MeasurementPair::new(obs[2], obs[3]),
        MeasurementKind::SquareRoot,
    ))
}

/// Largest admissible common scale factor of a pair: `1 / max(𝒮 + |ℬ|)`.
pub(crate) fn scale_cap(pair: &MeasurementPair<f64>) -> f64 {
    let m = [pair.first, pair.second]
        .iter()
        .map(|o| o.strength() + o.bias().abs())
        .fold(0.0, f64::max);
    if m > 0.0 {
        1.0 / m
    } else {
        f64::INFINITY
    }
}

/// Rewrites `params` so that every Alice observable becomes `c_a·X` and
/// every Bob observable `c_b·Y`. Directions are untouched.
pub(crate) fn rescale_params(
    mode: SearchMode,
    params: &mut [f64],
    cfg: &ScenarioConfig<f64>,
    c_a: f64,
    c_b: f64,
) {
    let slots = mode.strength_slots();
    let obs = [cfg.alice.first, cfg.alice.second, cfg.bob.first, cfg.bob.second];
    for (k, (&slot, o)) in slots.iter().zip(obs.iter()).enumerate() {
        let c = if k < 2 { c_a } else { c_b };
        if mode == SearchMode::Region2Ansatz && k == 3 {
            break;
        }
        if mode == SearchMode::GeneralBiased {
            let bias = c * o.bias();
            let strength = (c * o.strength()).min(1.0 - bias.abs()).max(0.0);
            let Ok(scaled) = Observable::new(bias, strength, o.direction()) else {
                continue;
            };
            let r = scaled.reversibility();
            let limit = r.asin();
            let u = if limit > 0.0 {
                ((bias / r).clamp(-1.0, 1.0).asin() / limit).clamp(-1.0, 1.0)
            } else {
                0.0
            };
            params[slot] = r;
            params[slot + 1] = u;
        } else {
            params[slot] = (c * o.strength()).clamp(0.0, 1.0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::chsh_value;

    #[test]
    fn parameter_counts_match_bounds() {
        for m in SearchMode::ALL {
            assert_eq!(m.bounds().len(), m.param_count(), "{m}");
            assert_eq!(m.name().parse::<SearchMode>().unwrap(), m);
        }
    }

    #[test]
    fn zero_vector_is_trivial_on_singlet() {
        let cfg = decode_params(SearchMode::UnbiasedSinglet, &[0.0; 12]).unwrap();
        assert_eq!(cfg.state, TwoQubitState::singlet());
        for o in [cfg.alice.first, cfg.alice.second, cfg.bob.first, cfg.bob.second] {
            assert_eq!(o.strength(), 0.0);
        }
    }

    #[test]
    fn optimal_angles_reach_tsirelson() {
        // x = e1, x' = e2, y = -(e1+e2)/√2, y' = -(e1-e2)/√2
        let a = [
            1.0, 0.0,
            1.0, PI / 2.0,
            1.0, 5.0 * PI / 4.0,
            1.0, 3.0 * PI / 4.0,
        ];
        let cfg = decode_params(SearchMode::UnbiasedSingletEquatorial, &a).unwrap();
        let s = chsh_value(&cfg.state, &cfg.alice, &cfg.bob);
        assert!((s - 2.0 * 2f64.sqrt()).abs() < 1e-12, "{s}");
    }

    #[test]
    fn biased_encoding_matches_parameterization() {
        let mut p = vec![0.0; 17];
        p[0] = 0.5;
        p[1] = 1.0;
        let cfg = decode_params(SearchMode::GeneralBiased, &p).unwrap();
        let sb = from_reversibility_angle(0.5, 0.5f64.asin()).unwrap();
        assert!((cfg.alice.first.bias() - 0.25).abs() < 1e-12);
        assert!((cfg.alice.first.strength() - sb.strength).abs() < 1e-12);
    }

    #[test]
    fn length_mismatch() {
        assert_eq!(
            decode_params(SearchMode::Unbiased, &[0.0; 12]).unwrap_err(),
            Error::LengthMismatch { expected: 13, got: 12 }
        );
    }

    #[test]
    fn rescaling_is_bilinear() {
        let p = [0.3, -0.4, 1.0, 0.2, 0.1, 0.3, 2.0, 1.0, 0.8, 0.7, 0.5, 4.0, 0.6, 0.0, 1.5, 3.0, 0.4];
        let mode = SearchMode::GeneralBiased;
        let cfg = decode_params(mode, &p).unwrap();
        let s = chsh_value(&cfg.state, &cfg.alice, &cfg.bob);
        let (ca, cb) = (0.8, 0.6);
        let mut q = p.to_vec();
        rescale_params(mode, &mut q, &cfg, ca, cb);
        let cfg2 = decode_params(mode, &q).unwrap();
        let s2 = chsh_value(&cfg2.state, &cfg2.alice, &cfg2.bob);
        assert!((s2 - ca * cb * s).abs() < 1e-12, "{s2} vs {}", ca * cb * s);
    }

    #[test]
    fn region2_branches() {
        let p = [0.9, 0.8, 0.7, 0.3];
        let a = decode_with_branch(SearchMode::Region2Ansatz, &p, Region2Branch::Orthogonal).unwrap();
        let b = decode_with_branch(SearchMode::Region2Ansatz, &p, Region2Branch::DoubleAngle).unwrap();
        assert_eq!(a.alice.second.direction(), [1.0, 0.0, 0.0]);
        let d = b.alice.second.direction();
        assert!((d[0] - 0.6f64.sin()).abs() < 1e-15 && (d[1] - 0.6f64.cos()).abs() < 1e-15);
        assert_eq!(a.bob.first.strength(), a.bob.second.strength());
    }
}
