//! Properties of the immediate-consequence operator on the corpus.

mod common;

use common::*;
use hodl_core::semantics::{
    bottom, interp_leq, is_fixpoint, is_upward_closed, least_model_naive, tp_step, DomainCache,
    SemValue,
};
use hodl_core::stats::{compute_stats, iteration_bound};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CAP: u64 = 1 << 16;

fn programs() -> Vec<(String, hodl_core::TypedProgram)> {
    corpus().into_iter().map(|(n, t)| (n, typed(&t))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn operator_is_monotone(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (name, tp) in programs() {
            let i = random_interpretation(&tp, &mut rng);
            let k = random_interpretation(&tp, &mut rng);
            let j = join(&i, &k);
            prop_assert!(interp_leq(&i, &j));
            let ti = tp_step(&tp, &i, CAP).unwrap();
            let tj = tp_step(&tp, &j, CAP).unwrap();
            prop_assert!(interp_leq(&ti, &tj), "{}", name);
        }
    }

    #[test]
    fn operator_preserves_monotone_values(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (name, tp) in programs() {
            let i = random_interpretation(&tp, &mut rng);
            let out = tp_step(&tp, &i, CAP).unwrap();
            let mut cache = DomainCache::new(tp.universe.len(), CAP);
            for (p, ty) in &tp.program.signatures {
                if let SemValue::Rel(r) = &out[p] {
                    let doms: Vec<_> = ty.args().iter().map(|a| cache.get(a).unwrap()).collect();
                    prop_assert!(is_upward_closed(r, &doms), "{} {}", name, p);
                }
            }
        }
    }
}

#[test]
fn least_model_is_a_fixpoint_above_bottom() {
    for (name, tp) in programs() {
        let m = least_model_naive(&tp, CAP).unwrap();
        assert!(is_fixpoint(&tp, &m.interp, CAP).unwrap(), "{name}");
        assert!(interp_leq(&bottom(&tp), &m.interp), "{name}");
    }
}

#[test]
fn least_model_is_below_random_prefixpoints() {
    // Iterating from any interpretation above the model never drops below it.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, tp) in programs() {
        let m = least_model_naive(&tp, CAP).unwrap().interp;
        for _ in 0..20 {
            let start = join(&m, &random_interpretation(&tp, &mut rng));
            let next = tp_step(&tp, &start, CAP).unwrap();
            assert!(interp_leq(&m, &next), "{name}");
        }
    }
}

#[test]
fn iterations_stay_within_bound() {
    for (name, tp) in programs() {
        let m = least_model_naive(&tp, CAP).unwrap();
        let bound = iteration_bound(&compute_stats(&tp), 0, tp.order).unwrap();
        assert!(BigUint::from(m.iterations) <= bound, "{name}: {} > {bound}", m.iterations);
    }
}
