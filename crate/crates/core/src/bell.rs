//! CHSH functionals: the raw CHSH value, the Horodecki value of a correlation
//! matrix, and the tight singlet bound `S₀` in its `W`-matrix form.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{cross, dot, norm, Mat3, Vec3};
use crate::observables::Observable;
use crate::scalar::{clamped_sqrt, Real};
use crate::states::TwoQubitState;

pub use crate::linalg::svd3;

/// The two observables an observer chooses between with equal probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementPair<T> {
    pub first: Observable<T>,
    pub second: Observable<T>,
}

impl<T: Real> MeasurementPair<T> {
    pub fn new(first: Observable<T>, second: Observable<T>) -> Self {
        Self { first, second }
    }

    /// Angle between the two measurement directions, in `[0, π]`.
    pub fn angle(&self) -> T {
        pair_angle(&self.first.direction(), &self.second.direction())
    }

    pub fn strengths(&self) -> (T, T) {
        (self.first.strength(), self.second.strength())
    }

    pub fn is_unbiased(&self) -> bool {
        self.first.is_unbiased() && self.second.is_unbiased()
    }
}

/// `atan2(|x × x'|, x · x')`.
pub fn pair_angle<T: Real>(x: &Vec3<T>, y: &Vec3<T>) -> T {
    norm(&cross(x, y)).atan2(dot(x, y))
}

/// `⟨XY⟩ = (ℬ_X, 𝒮_X xᵀ) Θ (ℬ_Y, 𝒮_Y y)ᵀ`.
pub fn correlator<T: Real>(theta: &[[T; 4]; 4], x: &Observable<T>, y: &Observable<T>) -> T {
    let cx = x.coefficients();
    let cy = y.coefficients();
    let mut acc = T::zero();
    for i in 0..4 {
        for j in 0..4 {
            acc = acc + cx[i] * theta[i][j] * cy[j];
        }
    }
    acc
}

/// `⟨XY⟩ + ⟨XY'⟩ + ⟨X'Y⟩ − ⟨X'Y'⟩`.
pub fn chsh_value<T: Real>(
    state: &TwoQubitState<T>,
    alice: &MeasurementPair<T>,
    bob: &MeasurementPair<T>,
) -> T {
    let th = state.theta();
    correlator(&th, &alice.first, &bob.first)
        + correlator(&th, &alice.first, &bob.second)
        + correlator(&th, &alice.second, &bob.first)
        - correlator(&th, &alice.second, &bob.second)
}

/// Largest CHSH value reachable with projective measurements,
/// `2√(s₁² + s₂²)` for the two largest singular values of `T`.
pub fn horodecki_sstar<T: Real>(t: &Mat3<T>) -> T {
    let s = svd3(t);
    let two = T::lit(2.0);
    two * (s[0] * s[0] + s[1] * s[1]).sqrt()
}

/// `W` matrix of the singlet CHSH expression for unbiased observables.
/// Only the upper 2×2 block is nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WMatrix<T> {
    pub entries: Mat3<T>,
    pub angle_theta: T,
    pub angle_phi: T,
}

/// Coefficients `(A, B, C, D)` of the `W` matrix.
pub fn abcd<T: Real>(sx: T, sxp: T, sy: T, syp: T) -> [T; 4] {
    let (p, q, r, u) = (sx * sy, sx * syp, sxp * sy, sxp * syp);
    [p + q + r - u, p - q + r + u, p + q - r + u, -p + q + r + u]
}

pub fn w_matrix<T: Real>(sx: T, sxp: T, sy: T, syp: T, theta: T, phi: T) -> WMatrix<T> {
    let [a, b, c, d] = abcd(sx, sxp, sy, syp);
    let half = T::lit(0.5);
    let (st, ct) = (theta * half).sin_cos();
    let (sp, cp) = (phi * half).sin_cos();
    let z = T::zero();
    WMatrix {
        entries: [
            [a * ct * cp, b * ct * sp, z],
            [c * st * cp, -d * st * sp, z],
            [z, z, z],
        ],
        angle_theta: theta,
        angle_phi: phi,
    }
}

/// Tight upper bound on `|S|` for unbiased observables of the given strengths
/// on a singlet, with `θ`, `φ` the angles within Alice's and Bob's pairs.
pub fn s0_bound<T: Real>(sx: T, sxp: T, sy: T, syp: T, theta: T, phi: T) -> Result<T> {
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let rad = (sx * sx + sxp * sxp) * (sy * sy + syp * syp)
        + two * sx * sxp * (sy * sy - syp * syp) * theta.cos()
        + two * sy * syp * (sx * sx - sxp * sxp) * phi.cos()
        + four * sx * sxp * sy * syp * theta.sin() * phi.sin();
    clamped_sqrt(rad, T::interface_tol()).ok_or(Error::NegativeRadicand(rad.as_f64()))
}

/// [`s0_bound`] evaluated for the strengths and angles of two pairs.
pub fn s0_bound_for<T: Real>(alice: &MeasurementPair<T>, bob: &MeasurementPair<T>) -> Result<T> {
    let (sx, sxp) = alice.strengths();
    let (sy, syp) = bob.strengths();
    s0_bound(sx, sxp, sy, syp, alice.angle(), bob.angle())
}

/// `√(tr W̃ᵀW̃ + 2|det W̃|)`, the sum of the two singular values of `W`.
pub fn s0_from_w<T: Real>(w: &WMatrix<T>) -> T {
    let m = &w.entries;
    let tr = m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] + m[1][1] * m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    (tr + T::lit(2.0) * det.abs()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::diag;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, SQRT_2};

    fn optimal(sx: f64, sy: f64) -> (MeasurementPair<f64>, MeasurementPair<f64>) {
        let h = FRAC_1_SQRT_2;
        let a = MeasurementPair::new(
            Observable::unbiased(sx, [1.0, 0.0, 0.0]).unwrap(),
            Observable::unbiased(sx, [0.0, 1.0, 0.0]).unwrap(),
        );
        let b = MeasurementPair::new(
            Observable::unbiased(sy, [-h, -h, 0.0]).unwrap(),
            Observable::unbiased(sy, [-h, h, 0.0]).unwrap(),
        );
        (a, b)
    }

    #[test]
    fn tsirelson() {
        let (a, b) = optimal(1.0, 1.0);
        let s = chsh_value(&TwoQubitState::singlet(), &a, &b);
        assert!((s - 2.0 * SQRT_2).abs() < 1e-12, "{s}");
    }

    #[test]
    fn trivial_observables_give_two() {
        let t = Observable::trivial(1.0).unwrap();
        let p = MeasurementPair::new(t, t);
        assert_eq!(chsh_value(&TwoQubitState::singlet(), &p, &p), 2.0);
    }

    #[test]
    fn unsharp_singlet_value_scales() {
        let s = 2.0 * SQRT_2 / 3.0;
        let (a, b) = optimal(s, s);
        let v = chsh_value(&TwoQubitState::singlet(), &a, &b);
        assert!((v - 16.0 * SQRT_2 / 9.0).abs() < 1e-12);
        let bound = s0_bound(s, s, s, s, FRAC_PI_2, FRAC_PI_2).unwrap();
        assert!((bound - v).abs() < 1e-9);
    }

    #[test]
    fn horodecki_examples() {
        assert!((horodecki_sstar(&diag([-1.0; 3])) - 2.0 * SQRT_2).abs() < 1e-12);
        let v = horodecki_sstar(&diag([-0.25, -0.25, 0.0]));
        assert!((v - FRAC_1_SQRT_2).abs() < 1e-12);
        let v = horodecki_sstar(&diag([0.9, 0.3, 0.1]));
        assert!((v - 2.0 * 0.9f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn w_matrix_examples() {
        let w = w_matrix(1.0, 1.0, 1.0, 1.0, FRAC_PI_2, FRAC_PI_2);
        assert_eq!(abcd(1.0, 1.0, 1.0, 1.0), [2.0; 4]);
        let want = [[1.0, 1.0], [1.0, -1.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((w.entries[i][j] - want[i][j]).abs() < 1e-15);
            }
        }
        assert!((s0_from_w(&w) - 2.0 * SQRT_2).abs() < 1e-12);

        let w = w_matrix(0.3f64, 0.7, 0.5, 0.9, 0.0, 0.0);
        let [a, ..] = abcd(0.3, 0.7, 0.5, 0.9);
        assert_eq!(w.entries[0][0], a);
        for (i, j) in [(0, 1), (1, 0), (1, 1)] {
            assert_eq!(w.entries[i][j].abs(), 0.0);
        }
        for k in 0..3 {
            assert_eq!(w.entries[2][k], 0.0);
            assert_eq!(w.entries[k][2], 0.0);
        }

        // sx = 1, sx' = 0 leaves A = C = sy + sy', B = -D = sy - sy'.
        let [a, b, c, d] = abcd(1.0f64, 0.0, 0.4, 0.6);
        assert!((a - 1.0).abs() < 1e-15 && (c - 1.0).abs() < 1e-15);
        assert!((b + 0.2).abs() < 1e-15 && (d - 0.2).abs() < 1e-15);
    }

    #[test]
    fn s0_examples() {
        let v = s0_bound(1.0, 1.0, 1.0, 1.0, FRAC_PI_2, FRAC_PI_2).unwrap();
        assert!((v - 2.0 * SQRT_2).abs() < 1e-12);
        assert!((s0_bound(1.0f64, 1.0, 1.0, 1.0, 0.0, 0.0).unwrap() - 2.0).abs() < 1e-12);
        let id = WMatrix {
            entries: diag([1.0, 1.0, 0.0]),
            angle_theta: 0.0,
            angle_phi: 0.0,
        };
        assert_eq!(s0_from_w(&id), 2.0);
    }

    #[test]
    fn pair_angle_is_stable() {
        assert_eq!(pair_angle(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]), 0.0);
        assert!((pair_angle(&[1.0, 0.0, 0.0], &[-1.0, 1e-9, 0.0]) - std::f64::consts::PI).abs() < 1e-8);
        assert!((pair_angle(&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0]) - FRAC_PI_2).abs() < 1e-15);
    }
}
