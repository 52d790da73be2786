mod common;

use std::f64::consts::SQRT_2;

use bell_recycle::audit::{sample_theorem1, sample_theorem2, sample_unbiased};
use bell_recycle::bell::MeasurementPair;
use bell_recycle::instruments::MeasurementKind;
use bell_recycle::monogamy::{
    check_theorem1, check_theorem2, conjecture_margin, theorem1_bound, theorem1_chain_bound, ScenarioConfig,
};
use bell_recycle::{evaluate_scenario, region1_closed, region1_parametric, region3_curve};
use common::{pure_state, unbiased};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn with_weak_pointer(mut cfg: ScenarioConfig<f64>, frac: f64) -> ScenarioConfig<f64> {
    let r = [cfg.alice.first, cfg.alice.second, cfg.bob.first, cfg.bob.second]
        .iter()
        .map(|o| o.reversibility())
        .fold(1.0, f64::min);
    cfg.kind = MeasurementKind::WeakPointer(frac * r);
    cfg
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3000))]

    #[test]
    fn orthogonal_bound_chain(seed in any::<u64>(), weak in any::<bool>(), frac in 0.0..=1.0f64) {
        let mut cfg = sample_theorem1(&mut ChaCha8Rng::seed_from_u64(seed));
        if weak {
            cfg = with_weak_pointer(cfg, frac);
        }
        let res = evaluate_scenario(&cfg).unwrap();
        let chain = theorem1_chain_bound(&cfg);
        prop_assert!(res.s_first.abs() + res.s_star_second <= chain + 1e-9);
        prop_assert!(chain <= theorem1_bound::<f64>() + 1e-9);
        prop_assert!(check_theorem1(&cfg).unwrap().holds);
    }

    #[test]
    fn equal_strength_bound(seed in any::<u64>(), weak in any::<bool>(), frac in 0.0..=1.0f64) {
        let mut cfg = sample_theorem2(&mut ChaCha8Rng::seed_from_u64(seed));
        if weak {
            cfg = with_weak_pointer(cfg, frac);
        }
        prop_assert!(check_theorem2(&cfg).unwrap().holds);
    }

    #[test]
    fn violation_excludes_second_violation(seed in any::<u64>()) {
        let cfg = sample_unbiased(&mut ChaCha8Rng::seed_from_u64(seed));
        let res = evaluate_scenario(&cfg).unwrap();
        if res.s_first.abs() > 2.0 {
            prop_assert!(res.s_star_second < 2.0);
        }
        prop_assert!(conjecture_margin(&res) >= -1e-9);
        prop_assert!(res.s_star_second <= 2.0 * SQRT_2 + 1e-9);
        prop_assert!(res.s_first.abs() <= 4.0);
    }

    #[test]
    fn singlet_dominates_other_states(st in pure_state(), x in unbiased(), xp in unbiased(),
                                      y in unbiased(), yp in unbiased()) {
        let a = MeasurementPair::new(x, xp);
        let b = MeasurementPair::new(y, yp);
        let res = evaluate_scenario(&ScenarioConfig::new(st, a, b, MeasurementKind::SquareRoot)).unwrap();
        // every state stays under the singlet-only bound
        prop_assert!(conjecture_margin(&res) >= -1e-9);
    }

    #[test]
    fn region1_forms_agree(r in 0.0005..=0.9995f64) {
        let (s, s_star) = region1_parametric(r);
        prop_assert!((region1_closed(s).unwrap() - s_star).abs() < 1e-8);
    }

    #[test]
    fn region3_strictly_decreasing(a in 0.0..=2.0 * SQRT_2, b in 0.0..=2.0 * SQRT_2) {
        prop_assume!((a - b).abs() > 1e-9);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(region3_curve(lo).unwrap() > region3_curve(hi).unwrap());
    }
}

#[test]
fn theorem_preconditions_are_enforced() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut cfg = sample_theorem2(&mut rng);
    while (cfg.alice.first.direction()[0] * cfg.alice.second.direction()[0]).abs() < 1e-3 {
        cfg = sample_theorem2(&mut rng);
    }
    assert!(check_theorem1(&cfg).is_err());
    let biased = bell_recycle::observables::Observable::new(0.1, 0.5, [1.0, 0.0, 0.0]).unwrap();
    cfg.alice.first = biased;
    assert!(check_theorem2(&cfg).is_err());
}
