//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar the library is generic over (`f32` or `f64`).
///
/// Tolerances scale with the precision of the type. The `f64` values are
/// the reference ones: `1e-12` for constraint checks at construction time
/// and `1e-9` where values cross module boundaries.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute tolerance of constructor-level constraint checks.
    fn construction_tol() -> Self;

    /// Absolute tolerance of checks on values arriving from other modules.
    fn interface_tol() -> Self;

    /// Relative off-diagonal size at which Jacobi sweeps stop.
    fn jacobi_tol() -> Self;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Lossy conversion used for error payloads and reports.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn construction_tol() -> Self {
        1e-12
    }
    fn interface_tol() -> Self {
        1e-9
    }
    fn jacobi_tol() -> Self {
        1e-14
    }
}

impl Real for f32 {
    fn construction_tol() -> Self {
        1e-5
    }
    fn interface_tol() -> Self {
        1e-4
    }
    fn jacobi_tol() -> Self {
        1e-7
    }
}

/// `sqrt` with radicands in `[-tol, 0)` clamped to zero.
///
/// Returns `None` for radicands below `-tol`.
#[inline]
pub fn clamped_sqrt<T: Real>(radicand: T, tol: T) -> Option<T> {
    if radicand >= T::zero() {
        Some(radicand.sqrt())
    } else if radicand >= -tol {
        Some(T::zero())
    } else {
        None
    }
}
