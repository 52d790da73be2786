//! Ensemble effect of local measurements as axis-dephasing channels and
//! their action on the correlation tensor.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{add_mat, identity, outer, scale_mat, Mat3, Vec3};
use crate::observables::Observable;
use crate::scalar::Real;
use crate::states::TwoQubitState;

/// How an observable is implemented.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum MeasurementKind<T> {
    /// `φ_±(ρ) = X_±^{1/2} ρ X_±^{1/2}`; retains the fraction `ℛ` of coherence.
    SquareRoot,
    /// Noisy projective measurement; retains `1 − 𝒮`.
    SimpleModel,
    /// Pointer-based weak measurement with quality factor `F ≤ ℛ`.
    WeakPointer(T),
}

/// Dephasing about `axis`: the transverse Bloch components shrink by `factor`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DephasingChannel<T> {
    pub axis: Vec3<T>,
    pub factor: T,
}

/// Which party's qubit a local map acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Alice,
    Bob,
}

impl<T: Real> DephasingChannel<T> {
    /// Channel induced by measuring `obs` with the given implementation.
    pub fn of(obs: &Observable<T>, kind: MeasurementKind<T>) -> Result<Self> {
        let factor = match kind {
            MeasurementKind::SquareRoot => obs.reversibility(),
            MeasurementKind::SimpleModel => T::one() - obs.strength(),
            MeasurementKind::WeakPointer(f) => {
                if !obs.is_unbiased() {
                    return Err(Error::BiasedWeakPointer(obs.bias().as_f64()));
                }
                let r = obs.reversibility();
                if !(f >= T::zero()) || f > r + T::construction_tol() {
                    return Err(Error::QualityExceedsReversibility {
                        quality: f.as_f64(),
                        reversibility: r.as_f64(),
                    });
                }
                f.min(r)
            }
        };
        Ok(Self {
            axis: obs.direction(),
            factor,
        })
    }

    /// `K = η I₃ + (1 − η) x xᵀ`.
    pub fn transfer_matrix(&self) -> Mat3<T> {
        add_mat(
            &scale_mat(self.factor, &identity()),
            &scale_mat(T::one() - self.factor, &outer(&self.axis, &self.axis)),
        )
    }
}

/// Shorthand for [`DephasingChannel::of`].
pub fn channel_of<T: Real>(
    obs: &Observable<T>,
    kind: MeasurementKind<T>,
) -> Result<DephasingChannel<T>> {
    DephasingChannel::of(obs, kind)
}

/// Shorthand for [`DephasingChannel::transfer_matrix`].
pub fn transfer_matrix<T: Real>(ch: &DephasingChannel<T>) -> Mat3<T> {
    ch.transfer_matrix()
}

/// Transfer matrix `½(K_X + K_X')` of an observer choosing between two
/// observables with equal probability.
pub fn setting_channel<T: Real>(
    first: &Observable<T>,
    second: &Observable<T>,
    kind: MeasurementKind<T>,
) -> Result<Mat3<T>> {
    let k1 = DephasingChannel::of(first, kind)?.transfer_matrix();
    let k2 = DephasingChannel::of(second, kind)?.transfer_matrix();
    Ok(scale_mat(T::lit(0.5), &add_mat(&k1, &k2)))
}

/// Applies a local unital channel with transfer matrix `k`.
///
/// Alice: `a → K a`, `T → K T`. Bob: `b → K b`, `T → T Kᵀ`.
/// Non-unital channels are not supported and are rejected.
pub fn apply_local<T: Real>(
    state: &TwoQubitState<T>,
    side: Side,
    k: &Mat3<T>,
    unital: bool,
) -> Result<TwoQubitState<T>> {
    if !unital {
        return Err(Error::NonUnitalChannel);
    }
    Ok(match side {
        Side::Alice => state.map_alice(k),
        Side::Bob => state.map_bob(k),
    })
}

/// `T'' = K_m ⋯ K_1 T L_1ᵀ ⋯ L_nᵀ`, with the Bloch vectors updated in the
/// same order. Channels are listed in measurement order.
pub fn apply_chain<T: Real>(
    state: &TwoQubitState<T>,
    alice: &[Mat3<T>],
    bob: &[Mat3<T>],
) -> TwoQubitState<T> {
    let s = alice.iter().fold(*state, |s, k| s.map_alice(k));
    bob.iter().fold(s, |s, l| s.map_bob(l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, max_abs_diff};

    const Z: Vec3<f64> = [0.0, 0.0, 1.0];
    const X: Vec3<f64> = [1.0, 0.0, 0.0];
    const Y: Vec3<f64> = [0.0, 1.0, 0.0];

    #[test]
    fn factors_per_kind() {
        let p = Observable::projective(Z).unwrap();
        let ch = channel_of(&p, MeasurementKind::SquareRoot).unwrap();
        assert_eq!(ch.factor, 0.0);
        assert_eq!(ch.transfer_matrix(), diag([0.0, 0.0, 1.0]));

        let u = Observable::unbiased(0.6, Z).unwrap();
        let simple = channel_of(&u, MeasurementKind::SimpleModel).unwrap().factor;
        assert!((simple - 0.4).abs() < 1e-15);
        let sqrt = channel_of(&u, MeasurementKind::SquareRoot).unwrap().factor;
        assert!((sqrt - 0.8).abs() < 1e-15);
    }

    #[test]
    fn weak_pointer_checks() {
        let u = Observable::unbiased(0.6, Z).unwrap();
        let ch = channel_of(&u, MeasurementKind::WeakPointer(0.5)).unwrap();
        assert_eq!(ch.factor, 0.5);
        assert!(matches!(
            channel_of(&u, MeasurementKind::WeakPointer(0.9)),
            Err(Error::QualityExceedsReversibility { .. })
        ));
        let b = Observable::new(0.1, 0.6, Z).unwrap();
        assert!(matches!(
            channel_of(&b, MeasurementKind::WeakPointer(0.1)),
            Err(Error::BiasedWeakPointer(_))
        ));
    }

    #[test]
    fn transfer_matrix_examples() {
        let id = DephasingChannel { axis: Z, factor: 1.0 };
        assert_eq!(id.transfer_matrix(), identity::<f64>());
        let half = DephasingChannel { axis: X, factor: 0.5 };
        assert_eq!(half.transfer_matrix(), diag([1.0, 0.5, 0.5]));
    }

    #[test]
    fn setting_channel_examples() {
        let t = Observable::trivial(0.0).unwrap();
        let k = setting_channel(&t, &t, MeasurementKind::SquareRoot).unwrap();
        assert_eq!(k, identity::<f64>());

        let y = Observable::projective(Y).unwrap();
        let x = Observable::projective(X).unwrap();
        let k = setting_channel(&y, &x, MeasurementKind::SquareRoot).unwrap();
        assert!(max_abs_diff(&k, &diag([0.5, 0.5, 0.0])) < 1e-15);

        let s = 2.0 * 2f64.sqrt() / 3.0;
        let a = Observable::unbiased(s, X).unwrap();
        let b = Observable::unbiased(s, Y).unwrap();
        let k = setting_channel(&a, &b, MeasurementKind::SquareRoot).unwrap();
        let sv = crate::linalg::svd3(&k);
        for (got, want) in sv.iter().zip([2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0]) {
            assert!((got - want).abs() < 1e-12, "{sv:?}");
        }
    }

    #[test]
    fn local_maps() {
        let s = TwoQubitState::<f64>::singlet();
        let k = diag([1.0, 0.5, 0.5]);
        assert_eq!(apply_local(&s, Side::Alice, &identity(), true).unwrap(), s);
        let out = apply_local(&s, Side::Alice, &k, true).unwrap();
        assert_eq!(out.correlation(), diag([-1.0, -0.5, -0.5]));

        let p = TwoQubitState::<f64>::from_schmidt(0.0).unwrap();
        let out = apply_local(&p, Side::Alice, &diag([0.0, 0.0, 1.0]), true).unwrap();
        assert_eq!(out.alice_bloch(), [0.0, 0.0, 1.0]);

        assert_eq!(
            apply_local(&s, Side::Bob, &k, false).unwrap_err(),
            Error::NonUnitalChannel
        );
    }

    #[test]
    fn bob_side_uses_transpose() {
        let p = TwoQubitState::<f64>::from_schmidt(0.4).unwrap();
        let mut l = diag([0.3, 0.7, 0.9]);
        l[0][1] = 0.2;
        let out = apply_local(&p, Side::Bob, &l, true).unwrap();
        let t = p.correlation();
        let want = crate::linalg::mat_mul(&t, &crate::linalg::transpose(&l));
        assert!(max_abs_diff(&out.correlation(), &want) < 1e-15);
        assert_eq!(out.alice_bloch(), p.alice_bloch());
    }

    #[test]
    fn chains() {
        let s = TwoQubitState::<f64>::singlet();
        assert_eq!(apply_chain(&s, &[], &[]), s);
        let k1 = diag([1.0, 0.5, 0.5]);
        let k2 = diag([0.5, 1.0, 0.5]);
        let out = apply_chain(&s, &[k1, k2], &[]);
        assert!(max_abs_diff(&out.correlation(), &diag([-0.5, -0.5, -0.25])) < 1e-15);

        let l = diag([0.9, 0.8, 0.7]);
        let chained = apply_chain(&s, &[k1], &[l]);
        let stepwise = apply_local(
            &apply_local(&s, Side::Alice, &k1, true).unwrap(),
            Side::Bob,
            &l,
            true,
        )
        .unwrap();
        assert_eq!(chained, stepwise);
    }
}
