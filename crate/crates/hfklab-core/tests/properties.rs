//! Property tests for the exact-arithmetic layers.

use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

use hfklab_core::hfk::{alternating_hfk, euler, lspace_hfk, HfkTable};
use hfklab_core::laurent::{parse_poly, render_poly, LaurentPoly};
use hfklab_core::periodic::{
    check_filtered_rank, check_total_rank, lift_grading, PeriodicPair,
};

fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
    proptest::collection::btree_map(-6i64..=6, -9i64..=9, 0..6)
        .prop_map(|terms| LaurentPoly::from_pairs(terms.into_iter().map(|(e, c)| (e, c))))
}

fn arb_nonzero_poly() -> impl Strategy<Value = LaurentPoly> {
    arb_poly().prop_filter("nonzero", |p| !p.is_zero())
}

/// A staircase polynomial: symmetric, top coefficient +1, coefficients
/// +-1 strictly alternating, odd term count.
fn arb_staircase_poly() -> impl Strategy<Value = LaurentPoly> {
    proptest::collection::btree_set(1i64..=9, 0..5).prop_map(|gaps| {
        let positives: Vec<i64> = gaps.into_iter().collect();
        let mut exponents: Vec<i64> = positives.iter().map(|&e| -e).collect();
        exponents.push(0);
        exponents.extend(positives.iter().copied());
        exponents.sort_unstable();
        let n = exponents.len();
        LaurentPoly::from_pairs(exponents.into_iter().enumerate().map(|(i, e)| {
            let sign = if (n - 1 - i) % 2 == 0 { 1 } else { -1 };
            (e, sign)
        }))
    })
}

/// (delta, sigma) as an honest alternating knot would supply them: the
/// sign of the coefficient at s is (-1)^(s + sigma/2).
fn arb_alternating_input() -> impl Strategy<Value = (LaurentPoly, i64)> {
    (
        proptest::collection::btree_map(0i64..=5, 1i64..=9, 1..5),
        -3i64..=3,
    )
        .prop_map(|(magnitudes, half_sigma)| {
            let sigma = 2 * half_sigma;
            let mut pairs = Vec::new();
            for (&s, &m) in &magnitudes {
                let sign = |e: i64| if (e + half_sigma).rem_euclid(2) == 0 { 1 } else { -1 };
                pairs.push((s, sign(s) * m));
                if s != 0 {
                    pairs.push((-s, sign(-s) * m));
                }
            }
            (LaurentPoly::from_pairs(pairs), sigma)
        })
}

fn arb_table() -> impl Strategy<Value = HfkTable> {
    proptest::collection::vec(((-5i64..=5), (-4i64..=4), (1u64..=3)), 1..6).prop_map(|entries| {
        let mut t = HfkTable::new();
        for (m, a, r) in entries {
            t.set(m, a, r);
        }
        t
    })
}

proptest! {
    #[test]
    fn mul_commutes(a in arb_poly(), b in arb_poly()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn mul_associates(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn division_inverts_multiplication(a in arb_poly(), b in arb_nonzero_poly()) {
        prop_assert_eq!(a.mul(&b).divide_exact(&b).unwrap(), a);
    }

    #[test]
    fn parse_render_round_trip(p in arb_poly()) {
        prop_assert_eq!(parse_poly(&render_poly(&p)).unwrap(), p);
    }

    #[test]
    fn json_round_trip(p in arb_poly()) {
        prop_assert_eq!(LaurentPoly::from_json(&p.to_json().unwrap()).unwrap(), p);
    }

    #[test]
    fn addition_groups(a in arb_poly(), b in arb_poly()) {
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        prop_assert_eq!(a.sub(&a), LaurentPoly::zero());
    }

    #[test]
    fn staircase_tables_categorify(delta in arb_staircase_poly()) {
        let table = lspace_hfk(&delta).unwrap();
        prop_assert_eq!(euler(&table), delta.clone());
        // One generator per occupied column, top at Maslov 0.
        for (_, a, r) in table.entries() {
            prop_assert_eq!(r, 1);
            prop_assert_eq!(table.column_total(a), 1);
        }
        let top = delta.max_exponent().unwrap();
        prop_assert_eq!(table.rank_at(0, top), 1);
        prop_assert_eq!(table.maslov_range().unwrap().0, -delta.width());
    }

    #[test]
    fn alternating_tables_categorify((delta, sigma) in arb_alternating_input()) {
        let table = alternating_hfk(&delta, sigma).unwrap();
        prop_assert_eq!(euler(&table), delta);
        for (m, a, _) in table.entries() {
            prop_assert_eq!(m - a, sigma / 2);
        }
    }

    #[test]
    fn mirror_is_involutive(t in arb_table()) {
        prop_assert_eq!(t.mirror().mirror(), t.clone());
        prop_assert_eq!(t.mirror().total_rank(), t.total_rank());
    }

    #[test]
    fn filtered_pass_implies_total_pass(
        tilde in arb_table(),
        quot in arb_table(),
        half_lambda in -2i64..=2,
    ) {
        let lambda = 2 * half_lambda + 1;
        let pair = PeriodicPair::new(tilde, quot, lambda).unwrap();
        let filtered = check_filtered_rank(&pair).unwrap();
        let total = check_total_rank(&pair).unwrap();
        prop_assert!(!filtered.passed || total.passed);
    }

    #[test]
    fn lift_is_affine(a in -50i64..=50, half in -10i64..=10) {
        let lambda = 2 * half + 1;
        let lifted = lift_grading(a, lambda).unwrap();
        prop_assert_eq!(lifted, 2 * a + (lambda - 1) / 2);
        prop_assert_eq!(lift_grading(a + 1, lambda).unwrap() - lifted, 2);
    }
}

#[test]
fn torus_polynomials_stay_unit_alternating() {
    for p in 2i64..=9 {
        for q in 2i64..=9 {
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            let d = LaurentPoly::torus_alexander(p, q).unwrap();
            assert!(d.is_symmetric());
            assert_eq!(d.width(), (p - 1) * (q - 1));
            assert_eq!(d.eval_at_one(), BigInt::one());
            let coeffs: Vec<BigInt> = d.terms().map(|(_, c)| c.clone()).collect();
            for w in coeffs.windows(2) {
                assert_eq!(&w[0] * &w[1], BigInt::from(-1));
            }
        }
    }
}
