mod common;

use bell_recycle::linalg::max_abs_diff;
use bell_recycle::states::TwoQubitState;
use common::{mixed_state, pure_state};
use num_complex::Complex;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn noise_composes(s in pure_state(), p in 0.0..=1.0f64, q in 0.0..=1.0f64) {
        let twice = s.add_isotropic_noise(p).unwrap().add_isotropic_noise(q).unwrap();
        let once = s.add_isotropic_noise(p * q).unwrap();
        prop_assert!(max_abs_diff(&twice.correlation(), &once.correlation()) < 1e-12);
        for i in 0..3 {
            prop_assert!((twice.alice_bloch()[i] - once.alice_bloch()[i]).abs() < 1e-12);
            prop_assert!((twice.bob_bloch()[i] - once.bob_bloch()[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn schmidt_matches_state_vector(alpha in 0.0..=std::f64::consts::FRAC_PI_4) {
        let direct = TwoQubitState::from_schmidt(alpha).unwrap();
        let z = Complex::new(0.0, 0.0);
        let (s, c) = alpha.sin_cos();
        let psi = [Complex::new(c, 0.0), z, z, Complex::new(s, 0.0)];
        let brute = TwoQubitState::from_state_vector(psi).unwrap();
        let (a, b) = (direct.theta(), brute.theta());
        for i in 0..4 {
            for j in 0..4 {
                prop_assert!((a[i][j] - b[i][j]).abs() < 1e-12, "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn sampled_states_are_positive(s in mixed_state()) {
        prop_assert!(s.validate().is_ok());
        let ev = s.density_eigenvalues();
        prop_assert!((ev.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(ev.iter().all(|&e| e >= -1e-9));
    }

    #[test]
    fn mixing_is_convex(a in pure_state(), b in pure_state(), p in 0.0..=1.0f64) {
        let m = a.mix(&b, p).unwrap();
        prop_assert!(m.is_valid());
        let (ta, tb, tm) = (a.correlation(), b.correlation(), m.correlation());
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!((tm[i][j] - (p * ta[i][j] + (1.0 - p) * tb[i][j])).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn serde_round_trip(s in mixed_state()) {
        let json = serde_json::to_string(&s).unwrap();
        let back: TwoQubitState<f64> = serde_json::from_str(&json).unwrap();
        prop_assert!(max_abs_diff(&s.correlation(), &back.correlation()) == 0.0);
    }
}

#[test]
fn rejects_non_positive_input() {
    let t = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    assert!(TwoQubitState::new([0.0; 3], [0.0; 3], t).is_err());
    assert!(TwoQubitState::new([1.5, 0.0, 0.0], [0.0; 3], [[0.0; 3]; 3]).is_err());
    let json = r#"{"a":[0,0,0],"b":[0,0,0],"T":[[1,0,0],[0,1,0],[0,0,1]]}"#;
    assert!(serde_json::from_str::<TwoQubitState<f64>>(json).is_err());
}
