mod common;

use conic_bundle::chow::ChowRing;
use conic_bundle::cones::{classify, effective_cone};
use conic_bundle::coxring::{base_locus, count_sections, is_effective};
use conic_bundle::picard::{pair, ConstructionParams, CurveClassY, DivisorClassY};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params(m: i64) -> ConstructionParams {
    ConstructionParams::new(m).unwrap()
}

#[test]
fn dp_agrees_with_enumeration() {
    for n in 1..=8 {
        for d in 0..=8 {
            assert_eq!(common::count_exponent_vectors_dp(n, d), common::count_exponent_vectors_explicit(n, d).into());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn h0_matches_monomial_count(m in 2i64..=4, a in -3i64..=5, b in -20i64..=12) {
        let cls = DivisorClassY::new(a, b);
        let p = params(m);
        let oracle = common::count_sections_oracle(a, b, m);
        prop_assert_eq!(count_sections(cls, &p), oracle.clone());
        prop_assert_eq!(is_effective(cls, &p), oracle > 0u32.into());
        prop_assert_eq!(effective_cone(&p).contains(cls), is_effective(cls, &p));
    }

    #[test]
    fn base_locus_matches_point_sampling(m in 2i64..=4, a in 0i64..=4, b in -16i64..=6, seed in any::<u64>()) {
        let p = params(m);
        let bl = base_locus(DivisorClassY::new(a, b), &p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..40 {
            let pt = common::SamplePoint::random(&mut rng, m);
            prop_assert_eq!(
                bl.contains_point(false, pt.y_zero()),
                common::all_monomials_vanish(a, b, m, &pt),
                "{:?}", pt
            );
        }
    }

    #[test]
    fn nef_is_dual_to_the_two_curves(m in 2i64..=6, a in -12i64..=12, b in -30i64..=30) {
        let cls = DivisorClassY::new(a, b);
        let r = classify(cls, &params(m));
        let f = pair(cls, CurveClassY::ELL_F);
        let v = pair(cls, CurveClassY::ELL_V);
        prop_assert_eq!(r.nef, f >= 0 && v >= 0);
        prop_assert_eq!(r.ample, f > 0 && v > 0);
        prop_assert!(!r.ample || r.nef);
        prop_assert!(!r.nef || r.effective);
    }

    #[test]
    fn chow_pairing_matches_curve_pairing(m in 2i64..=4, a in -6i64..=6, b in -12i64..=12) {
        // ell_V ~ G^2 H^{3m-1}; ell_f ~ D H^{3m}, a line in a fiber
        let p = params(m);
        let ring = ChowRing::of_y(&p);
        let cls = DivisorClassY::new(a, b);
        let g = ring.divisor(DivisorClassY::new(1, -2 * m));
        let on_v = ring.divisor(cls).mul(&g.pow(2)).unwrap().mul(&ring.h().pow(3 * m as u32 - 1)).unwrap();
        prop_assert_eq!(on_v.degree().unwrap(), pair(cls, CurveClassY::ELL_V).into());
        let on_f = ring.divisor(cls).mul(&ring.d()).unwrap().mul(&ring.h().pow(3 * m as u32)).unwrap();
        prop_assert_eq!(on_f.degree().unwrap(), pair(cls, CurveClassY::ELL_F).into());
    }
}
