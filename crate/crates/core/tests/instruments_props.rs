mod common;

use bell_recycle::instruments::{apply_chain, apply_local, setting_channel, DephasingChannel, MeasurementKind, Side};
use bell_recycle::linalg::{max_abs_diff, mat_vec, symmetric_eigen};
use bell_recycle::observables::Observable;
use common::{direction, mixed_state, observable};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn transfer_spectrum(x in observable()) {
        let ch = DephasingChannel::of(&x, MeasurementKind::SquareRoot).unwrap();
        prop_assert_eq!(ch.factor, x.reversibility());
        let k = ch.transfer_matrix();
        let axis = x.direction();
        let image = mat_vec(&k, &axis);
        for i in 0..3 {
            prop_assert!((image[i] - axis[i]).abs() < 1e-12);
        }
        let (mut ev, _) = symmetric_eigen(k);
        ev.sort_by(f64::total_cmp);
        let eta = ch.factor;
        prop_assert!((ev[0] - eta).abs() < 1e-12 && (ev[1] - eta).abs() < 1e-12);
        prop_assert!((ev[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn implementation_ordering(s in 0.0..=1.0f64, d in direction()) {
        let x = Observable::unbiased(s, d).unwrap();
        let simple = DephasingChannel::of(&x, MeasurementKind::SimpleModel).unwrap().factor;
        let r = x.reversibility();
        let weak = DephasingChannel::of(&x, MeasurementKind::WeakPointer(r)).unwrap().factor;
        let sqrt = DephasingChannel::of(&x, MeasurementKind::SquareRoot).unwrap().factor;
        prop_assert!(simple <= weak + 1e-12);
        prop_assert_eq!(weak, sqrt);
    }

    #[test]
    fn same_axis_channels_commute(a in 0.0..=1.0f64, b in 0.0..=1.0f64, c in 0.0..=1.0f64,
                                  d in direction(), st in mixed_state()) {
        let ks: Vec<_> = [a, b, c]
            .iter()
            .map(|&s| {
                let x = Observable::unbiased(s, d).unwrap();
                DephasingChannel::of(&x, MeasurementKind::SquareRoot).unwrap().transfer_matrix()
            })
            .collect();
        let fwd = apply_chain(&st, &ks, &ks);
        let rev: Vec<_> = ks.iter().rev().copied().collect();
        let bwd = apply_chain(&st, &rev, &[ks[1], ks[2], ks[0]]);
        prop_assert!(max_abs_diff(&fwd.correlation(), &bwd.correlation()) < 1e-12);
    }

    #[test]
    fn local_maps_keep_states_valid(x in observable(), y in observable(), st in mixed_state(), bob in any::<bool>()) {
        let k = setting_channel(&x, &y, MeasurementKind::SquareRoot).unwrap();
        let side = if bob { Side::Bob } else { Side::Alice };
        let out = apply_local(&st, side, &k, true).unwrap();
        prop_assert!(out.validate().is_ok(), "{:?}", out.density_eigenvalues());
    }
}

#[test]
fn weak_pointer_rejects_biased_and_high_quality() {
    let biased = Observable::new(0.2, 0.5, [0.0, 0.0, 1.0]).unwrap();
    assert!(DephasingChannel::of(&biased, MeasurementKind::WeakPointer(0.1)).is_err());
    let x = Observable::unbiased(0.6, [0.0, 0.0, 1.0]).unwrap();
    assert!(DephasingChannel::of(&x, MeasurementKind::WeakPointer(0.9)).is_err());
    assert!(DephasingChannel::of(&x, MeasurementKind::WeakPointer(0.8)).is_ok());
}
