//! Property tests for the exact polynomial arithmetic: ring axioms,
//! division round trips, derivation rules, and text round trips.

use limcycle::polycore::{format_poly, parse_poly, rat, rat_int, Poly, Var};
use proptest::prelude::*;

/// Random sparse polynomial of total degree at most 6 with small rational
/// coefficients.
fn poly_strategy() -> impl Strategy<Value = Poly> {
    prop::collection::vec(
        (0u32..=6, 0u32..=6, -9i64..=9, 1i64..=7),
        0..8,
    )
    .prop_map(|terms| {
        let mut p = Poly::zero();
        for (i, j, num, den) in terms {
            if i + j <= 6 {
                p = p.add(&Poly::monomial(i, j, rat(num, den)));
            }
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn addition_is_associative_and_commutative(
        a in poly_strategy(), b in poly_strategy(), c in poly_strategy()
    ) {
        prop_assert!(a.add(&b).add(&c).sub(&a.add(&b.add(&c))).is_zero());
        prop_assert!(a.add(&b).sub(&b.add(&a)).is_zero());
    }

    #[test]
    fn multiplication_is_commutative_and_distributive(
        a in poly_strategy(), b in poly_strategy(), c in poly_strategy()
    ) {
        prop_assert!(a.mul(&b).sub(&b.mul(&a)).is_zero());
        prop_assert!(
            a.mul(&b.add(&c)).sub(&a.mul(&b).add(&a.mul(&c))).is_zero()
        );
    }

    #[test]
    fn multiplicative_identity_and_additive_inverse(a in poly_strategy()) {
        prop_assert!(a.mul(&Poly::one()).sub(&a).is_zero());
        prop_assert!(a.add(&a.neg()).is_zero());
    }

    #[test]
    fn division_round_trips(a in poly_strategy(), b in poly_strategy()) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.divide_with_remainder(&b).unwrap();
        prop_assert!(b.mul(&q).add(&r).sub(&a).is_zero());
    }

    #[test]
    fn exact_products_divide_exactly(a in poly_strategy(), b in poly_strategy()) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.mul(&b).divide_with_remainder(&b).unwrap();
        prop_assert!(r.is_zero());
        prop_assert!(q.sub(&a).is_zero());
    }

    #[test]
    fn derivation_satisfies_product_rule(
        a in poly_strategy(), b in poly_strategy()
    ) {
        for var in [Var::X, Var::Y] {
            let lhs = a.mul(&b).differentiate(var);
            let rhs = a
                .differentiate(var)
                .mul(&b)
                .add(&a.mul(&b.differentiate(var)));
            prop_assert!(lhs.sub(&rhs).is_zero());
        }
    }

    #[test]
    fn derivation_is_linear(a in poly_strategy(), b in poly_strategy()) {
        for var in [Var::X, Var::Y] {
            let lhs = a.add(&b).differentiate(var);
            let rhs = a.differentiate(var).add(&b.differentiate(var));
            prop_assert!(lhs.sub(&rhs).is_zero());
        }
    }

    #[test]
    fn format_parse_round_trips(a in poly_strategy()) {
        let text = format_poly(&a);
        let back = parse_poly(&text).unwrap();
        prop_assert!(back.sub(&a).is_zero(), "text was {text}");
    }

    #[test]
    fn identity_substitution_is_identity(a in poly_strategy()) {
        let zero = rat_int(0);
        let one = rat_int(1);
        let s = a.affine_substitute((&zero, &zero), &one).unwrap();
        prop_assert!(s.sub(&a).is_zero());
    }

    #[test]
    fn substitution_is_a_ring_morphism(
        a in poly_strategy(), b in poly_strategy(),
        cx in -3i64..=3, cy in -3i64..=3, s in 1i64..=4
    ) {
        let cx = rat_int(cx);
        let cy = rat_int(cy);
        let s = rat(1, s);
        let sub = |p: &Poly| p.affine_substitute((&cx, &cy), &s).unwrap();
        prop_assert!(sub(&a.add(&b)).sub(&sub(&a).add(&sub(&b))).is_zero());
        prop_assert!(sub(&a.mul(&b)).sub(&sub(&a).mul(&sub(&b))).is_zero());
    }
}
