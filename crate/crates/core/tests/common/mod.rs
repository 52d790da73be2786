#![allow(dead_code)]

use std::f64::consts::PI;

use bell_recycle::audit::random_pure_state;
use bell_recycle::observables::Observable;
use bell_recycle::states::TwoQubitState;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn direction() -> impl Strategy<Value = [f64; 3]> {
    (0.0..=PI, 0.0..2.0 * PI).prop_map(|(t, p)| [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()])
}

pub fn observable() -> impl Strategy<Value = Observable<f64>> {
    (-1.0..=1.0f64, 0.0..=1.0f64, direction())
        .prop_map(|(b, f, d)| Observable::new(b, f * (1.0 - b.abs()), d).unwrap())
}

pub fn unbiased() -> impl Strategy<Value = Observable<f64>> {
    (0.0..=1.0f64, direction()).prop_map(|(s, d)| Observable::unbiased(s, d).unwrap())
}

pub fn pure_state() -> impl Strategy<Value = TwoQubitState<f64>> {
    any::<u64>().prop_map(|seed| random_pure_state(&mut ChaCha8Rng::seed_from_u64(seed)))
}

/// Mixture of a random pure state with white noise.
pub fn mixed_state() -> impl Strategy<Value = TwoQubitState<f64>> {
    (pure_state(), 0.0..=1.0f64).prop_map(|(s, p)| s.add_isotropic_noise(p).unwrap())
}
