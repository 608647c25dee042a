//! Property-based invariants for the numeric layer and the penalty algebra.

use proptest::prelude::*;

use omdsc_core::numerics::residue::{interval_size_raw, residue};
use omdsc_core::numerics::scalar::{Exact, Scalar};
use omdsc_core::penalty::{effective_penalty_table, zero_penalty_set, PenaltyFunction};
use omdsc_core::solve_alpha;

proptest! {
    #[test]
    fn residue_idempotent_and_shift_invariant(x in -10_000i64..10_000, k in 1u64..500) {
        let r = residue(x, k).unwrap();
        prop_assert!(r.value < k);
        let again = residue(r.value as i64, k).unwrap();
        prop_assert_eq!(r.value, again.value);
        let shifted = residue(x + k as i64, k).unwrap();
        prop_assert_eq!(r.value, shifted.value);
    }

    #[test]
    fn interval_size_in_range(lo in 0u64..64, hi in 0u64..64, k in 1u64..64) {
        let (lo, hi) = (lo % k, hi % k);
        let size = interval_size_raw(lo, hi, k);
        prop_assert!(1 <= size && size <= k);
    }

    #[test]
    fn exact_field_identities(
        an in -1000i64..1000, ad in 1u64..60,
        bn in -1000i64..1000, bd in 1u64..60,
    ) {
        let a = Exact::ratio(an, ad);
        let b = Exact::ratio(bn, bd);
        // No rounding drift: (a + b) - b == a.
        prop_assert_eq!(a.clone() + b.clone() - b.clone(), a.clone());
        if !a.is_zero() {
            prop_assert_eq!(a.clone() * (Exact::one() / a.clone()), Exact::one());
        }
    }

    #[test]
    fn alpha_monotone(k1 in 2u64..5000, k2 in 2u64..5000) {
        let (k1, k2) = if k1 <= k2 { (k1, k2) } else { (k2, k1) };
        let a1 = solve_alpha(k1).unwrap().alpha_exact;
        let a2 = solve_alpha(k2).unwrap().alpha_exact;
        prop_assert!(a1 <= a2 + 1e-12);
    }

    #[test]
    fn zero_set_closed_under_sums(
        zeros in proptest::collection::btree_set(2u64..15, 1..4),
        a in 1u64..200,
        b in 1u64..200,
    ) {
        let zeros: Vec<u64> = zeros.into_iter().collect();
        let f = PenaltyFunction::<Exact>::from_zeros(&zeros, None).unwrap();
        if a + b <= 200 {
            let reach = zero_penalty_set(&f, 200).unwrap();
            if reach[(a - 1) as usize] && reach[(b - 1) as usize] {
                prop_assert!(reach[(a + b - 1) as usize]);
            }
        }
    }

    #[test]
    fn effective_penalty_subadditive_random_zero_sets(
        zeros in proptest::collection::btree_set(2u64..12, 0..3),
        a in 1u64..100,
        b in 1u64..100,
    ) {
        let zeros: Vec<u64> = zeros.into_iter().collect();
        let f = PenaltyFunction::<Exact>::from_zeros(&zeros, None).unwrap();
        if a + b <= 100 {
            let g = effective_penalty_table(&f, 100);
            let lhs = g[(a + b - 1) as usize].clone();
            let rhs = g[(a - 1) as usize].clone() + g[(b - 1) as usize].clone();
            prop_assert!(lhs <= rhs);
        }
    }

    #[test]
    fn scalar_text_roundtrip(n in -100_000i64..100_000, d in 1u64..100_000) {
        let x = Exact::ratio(n, d);
        let back = Exact::parse(&x.render()).unwrap();
        prop_assert_eq!(x, back);
    }
}
