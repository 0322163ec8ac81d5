//! Property tests for the exact arithmetic substrate and the window algebra.

use proptest::prelude::*;

use quasichain::algebra::{GoldenInt, GoldenNum};
use quasichain::correlations::{nu_pair_exact, ALL_PAIRS};
use quasichain::model_set::Window;
use quasichain::substitution::SubstRule;

fn golden_num() -> impl Strategy<Value = GoldenNum> {
    (-1000i64..1000, 1i64..60, -1000i64..1000, 1i64..60).prop_map(|(an, ad, bn, bd)| {
        GoldenNum::from_rational(an, ad) + GoldenNum::from_rational(bn, bd) * GoldenNum::sqrt5()
    })
}

fn golden_int() -> impl Strategy<Value = GoldenInt> {
    (-2000i64..2000, -2000i64..2000).prop_map(|(m, n)| GoldenInt::from_ints(m, n))
}

proptest! {
    #[test]
    fn star_is_a_ring_homomorphism(p in golden_num(), q in golden_num()) {
        prop_assert_eq!((&p + &q).star(), &p.star() + &q.star());
        prop_assert_eq!((&p * &q).star(), &p.star() * &q.star());
        prop_assert_eq!(p.star().star(), p);
    }

    #[test]
    fn compare_agrees_with_floats(p in golden_num(), q in golden_num()) {
        let diff = (&p - &q).to_f64();
        if diff.abs() > 1e-9 {
            let by_float = diff.partial_cmp(&0.0).unwrap();
            prop_assert_eq!(p.cmp(&q), by_float);
        }
    }

    #[test]
    fn golden_int_trace_and_norm_are_rational(x in golden_int()) {
        let trace = &x + &x.star();
        prop_assert!(trace.tau_part() == &num_bigint::BigInt::from(0));
        let norm = &x * &x.star();
        prop_assert!(norm.tau_part() == &num_bigint::BigInt::from(0));
        prop_assert_eq!(norm.unit_part().clone(), x.norm());
    }

    #[test]
    fn golden_int_roundtrips_exactly(x in golden_int()) {
        prop_assert_eq!(x.to_golden_num().to_golden_int().unwrap(), x.clone());
        let printed = x.to_string();
        let parsed: GoldenInt = printed.parse().unwrap();
        prop_assert_eq!(parsed, x);
    }

    #[test]
    fn golden_num_text_roundtrips(p in golden_num()) {
        let printed = p.to_string();
        let parsed: GoldenNum = printed.parse().unwrap();
        prop_assert_eq!(parsed, p);
    }

    #[test]
    fn norm_is_multiplicative(p in golden_num(), q in golden_num()) {
        prop_assert_eq!((&p * &q).field_norm(), p.field_norm() * q.field_norm());
    }

    #[test]
    fn window_scale_translate_volume(p in golden_num(), shift in golden_num()) {
        let lo = &p - &GoldenNum::one();
        let hi = &p + &GoldenNum::tau();
        let w = Window::new(lo, hi, true, false).unwrap();
        let vol = w.volume();
        prop_assert_eq!(w.translate(&shift).volume(), vol.clone());
        let scaled = w.scale(&-GoldenNum::tau());
        prop_assert_eq!(scaled.volume(), GoldenNum::tau() * vol);
        // negative scaling flips end flags
        prop_assert!(scaled.hi_closed());
        prop_assert!(!scaled.lo_closed());
    }

    #[test]
    fn abelianisation_holds_for_random_words(word in proptest::collection::vec(0usize..2, 1..200)) {
        let rule = SubstRule::by_name("reshuffled").unwrap();
        let m = rule.substitution_matrix();
        let counts = |w: &[usize]| -> Vec<u64> {
            let mut c = vec![0u64; 2];
            for &l in w { c[l] += 1; }
            c
        };
        let lhs = counts(&rule.apply(&word));
        let rhs = m.apply_counts(&counts(&word));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pair_correlations_are_symmetric(z in golden_int()) {
        for pair in ALL_PAIRS {
            let swapped = (pair.1, pair.0);
            prop_assert_eq!(nu_pair_exact(pair, &z), nu_pair_exact(swapped, &-&z));
        }
    }
}
