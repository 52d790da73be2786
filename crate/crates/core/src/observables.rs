//! Two-valued qubit observables `X = B·𝟙 + S·σ·x` and their
//! reversibility / decoherence / strength / bias tradeoffs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, scale_vec, Vec3};
use crate::scalar::{clamped_sqrt, Real};

/// A general two-valued qubit observable.
///
/// Always satisfies `strength + |bias| <= 1`. The direction is a unit vector;
/// for zero strength it is irrelevant and fixed to `(0, 0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observable<T> {
    bias: T,
    strength: T,
    direction: Vec3<T>,
}

/// Maximum reversibility and the matching minimal decoherence of an
/// observable. `reversibility² + decoherence² = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReversibilityProfile<T> {
    pub reversibility: T,
    pub decoherence: T,
}

/// Strength and bias pair produced by [`from_reversibility_angle`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrengthBias<T> {
    pub strength: T,
    pub bias: T,
}

impl<T: Real> Observable<T> {
    /// Validates and normalizes an observable.
    pub fn new(bias: T, strength: T, direction: Vec3<T>) -> Result<Self> {
        let tol = T::construction_tol();
        check_range("strength", strength, T::zero(), T::one(), tol)?;
        check_range("bias", bias, -T::one(), T::one(), tol)?;
        let mut strength = strength.max(T::zero()).min(T::one());
        let bias = bias.max(-T::one()).min(T::one());
        if strength + bias.abs() > T::one() + tol {
            return Err(Error::ConstraintViolation {
                bias: bias.as_f64(),
                strength: strength.as_f64(),
            });
        }
        // Absorb rounding so the reversibility radicands stay non-negative,
        // and snap values a few ulps below the boundary onto it: the square
        // roots in the reversibility would otherwise amplify the rounding.
        let room = T::one() - bias.abs();
        if strength > room - T::lit(16.0) * T::epsilon() {
            strength = room.max(T::zero());
        }

        let direction = if strength == T::zero() {
            [T::zero(), T::zero(), T::one()]
        } else {
            let n = norm(&direction);
            if !(n >= tol) {
                return Err(Error::ZeroDirection);
            }
            scale_vec(T::one() / n, &direction)
        };
        Ok(Self {
            bias,
            strength,
            direction,
        })
    }

    /// Spin observable `σ·x`.
    pub fn projective(direction: Vec3<T>) -> Result<Self> {
        Self::new(T::zero(), T::one(), direction)
    }

    /// Unbiased observable of the given strength.
    pub fn unbiased(strength: T, direction: Vec3<T>) -> Result<Self> {
        Self::new(T::zero(), strength, direction)
    }

    /// Coin toss `B·𝟙`.
    pub fn trivial(bias: T) -> Result<Self> {
        Self::new(bias, T::zero(), [T::zero(), T::zero(), T::one()])
    }

    pub fn bias(&self) -> T {
        self.bias
    }

    pub fn strength(&self) -> T {
        self.strength
    }

    pub fn direction(&self) -> Vec3<T> {
        self.direction
    }

    pub fn is_unbiased(&self) -> bool {
        self.bias.abs() <= T::interface_tol()
    }

    /// Off-diagonal retention of the square-root measurement:
    /// `½√((1+B)²−S²) + ½√((1−B)²−S²)`.
    pub fn reversibility(&self) -> T {
        let half = T::lit(0.5);
        let tol = T::construction_tol();
        let (b, s) = (self.bias, self.strength);
        let one = T::one();
        let r1 = clamped_sqrt((one + b - s) * (one + b + s), tol).unwrap_or(T::zero());
        let r2 = clamped_sqrt((one - b - s) * (one - b + s), tol).unwrap_or(T::zero());
        (half * (r1 + r2)).min(T::one())
    }

    /// Minimal decoherence `√(1−R²)`.
    pub fn decoherence(&self) -> T {
        let r = self.reversibility();
        (T::one() - r * r).max(T::zero()).sqrt()
    }

    pub fn profile(&self) -> ReversibilityProfile<T> {
        ReversibilityProfile {
            reversibility: self.reversibility(),
            decoherence: self.decoherence(),
        }
    }

    /// Upper bound `(R+2)/3` on the average fidelity of any Kraus
    /// implementation; attained by the square-root measurement.
    pub fn fidelity_bound(&self) -> T {
        (self.reversibility() + T::lit(2.0)) / T::lit(3.0)
    }

    /// Single-qubit mean value `B + S·x·a` on a state with Bloch vector `a`.
    pub fn expectation(&self, bloch: &Vec3<T>) -> Result<T> {
        let n = norm(bloch);
        if n > T::one() + T::interface_tol() {
            return Err(Error::InvalidBloch(n.as_f64()));
        }
        Ok(self.bias + self.strength * dot(&self.direction, bloch))
    }

    /// Row vector `(B, S·xᵀ)` entering the product expectation
    /// `⟨XY⟩ = (B_X, S_X xᵀ) Θ (B_Y; S_Y y)`.
    pub fn coefficients(&self) -> [T; 4] {
        let d = self.direction;
        let s = self.strength;
        [self.bias, s * d[0], s * d[1], s * d[2]]
    }

    /// The operator `c·X` for `0 <= c <= 1 / (S + |B|)`.
    pub fn scaled(&self, c: T) -> Result<Self> {
        Self::new(c * self.bias, c * self.strength, self.direction)
    }
}

/// Strength and bias of the observable with reversibility `r` and bias angle
/// `alpha`: `S = √(1−r²)·cos α`, `B = r·sin α`, for `|α| <= arcsin r`.
pub fn from_reversibility_angle<T: Real>(r: T, alpha: T) -> Result<StrengthBias<T>> {
    let tol = T::construction_tol();
    check_range("reversibility", r, T::zero(), T::one(), tol)?;
    let r = r.max(T::zero()).min(T::one());
    let limit = r.asin();
    if alpha.abs() > limit + tol {
        return Err(Error::AngleOutOfRange {
            alpha: alpha.as_f64(),
            limit: limit.as_f64(),
        });
    }
    let alpha = alpha.max(-limit).min(limit);
    Ok(StrengthBias {
        strength: (T::one() - r * r).sqrt() * alpha.cos(),
        bias: r * alpha.sin(),
    })
}

fn check_range<T: Real>(name: &'static str, value: T, min: T, max: T, tol: T) -> Result<()> {
    if value.is_nan() || value < min - tol || value > max + tol {
        return Err(Error::OutOfRange {
            name,
            value: value.as_f64(),
            min: min.as_f64(),
            max: max.as_f64(),
        });
    }
    Ok(())
}
