//! Property tests for the arithmetic and order invariants: ring axioms on
//! random polynomial triples, print/parse round-trips, normal-form
//! idempotence, and monomial-order laws.

use proptest::prelude::*;
use skoda_core::field::FieldDesc;
use skoda_core::gb::normal_form;
use skoda_core::limits::GbLimits;
use skoda_core::monomial::{Monomial, MonomialOrder};
use skoda_core::parser::parse_poly;
use skoda_core::poly::Poly;
use skoda_core::ring::{Ring, RingPresentation};
use std::cmp::Ordering;

fn ring3() -> Ring {
    RingPresentation::polynomial(
        FieldDesc::Q,
        vec!["x".into(), "y".into(), "z".into()],
        MonomialOrder::Grevlex,
    )
}

fn arb_monomial() -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(0u16..5, 3).prop_map(Monomial::from_exponents)
}

fn arb_poly() -> impl Strategy<Value = Poly> {
    proptest::collection::vec((arb_monomial(), -9i64..=9), 0..6).prop_map(|terms| {
        let r = ring3();
        let terms = terms
            .into_iter()
            .map(|(m, c)| (m, FieldDesc::Q.from_i64(c)))
            .collect();
        Poly::from_terms(terms, r.order())
    })
}

proptest! {
    #[test]
    fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        let r = ring3();
        let o = r.order();
        // associativity and commutativity of multiplication
        prop_assert_eq!(a.mul(&b, o).mul(&c, o), a.mul(&b.mul(&c, o), o));
        prop_assert_eq!(a.mul(&b, o), b.mul(&a, o));
        // distributivity
        prop_assert_eq!(
            a.mul(&b.add(&c, o), o),
            a.mul(&b, o).add(&a.mul(&c, o), o)
        );
        // additive inverses
        prop_assert!(a.add(&a.neg(), o).is_zero());
        // additive associativity and commutativity
        prop_assert_eq!(a.add(&b, o).add(&c, o), a.add(&b.add(&c, o), o));
        prop_assert_eq!(a.add(&b, o), b.add(&a, o));
    }

    #[test]
    fn print_parse_roundtrip(p in arb_poly()) {
        let r = ring3();
        let text = r.render(&p);
        let back = parse_poly(&text, &r).unwrap();
        prop_assert_eq!(p, back);
    }

    #[test]
    fn normal_form_is_idempotent(p in arb_poly(), q in arb_poly()) {
        let r = ring3();
        if q.is_zero() {
            return Ok(());
        }
        let basis = vec![q];
        let once = normal_form(&p, &basis, r.order());
        let twice = normal_form(&once, &basis, r.order());
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn orders_are_antisymmetric_and_transitive(
        a in arb_monomial(),
        b in arb_monomial(),
        c in arb_monomial()
    ) {
        for order in [
            MonomialOrder::Lex,
            MonomialOrder::Grevlex,
            MonomialOrder::Block(vec![vec![0], vec![1, 2]]),
        ] {
            // antisymmetry
            match order.cmp(&a, &b) {
                Ordering::Less => prop_assert_eq!(order.cmp(&b, &a), Ordering::Greater),
                Ordering::Greater => prop_assert_eq!(order.cmp(&b, &a), Ordering::Less),
                Ordering::Equal => prop_assert_eq!(&a, &b),
            }
            // transitivity
            if order.cmp(&a, &b) != Ordering::Less && order.cmp(&b, &c) != Ordering::Less {
                prop_assert!(order.cmp(&a, &c) != Ordering::Less);
            }
            // compatibility with multiplication
            let m = Monomial::from_exponents(vec![1, 0, 2]);
            prop_assert_eq!(order.cmp(&a.mul(&m), &b.mul(&m)), order.cmp(&a, &b));
        }
    }

    #[test]
    fn quotient_normalization_is_canonical(p in arb_poly(), q in arb_poly()) {
        // in Q[x,y,z]/(rel): normalize is idempotent and respects addition
        let amb = ring3();
        let rel = parse_poly("x^2 + y*z - 1", &amb).unwrap();
        let r = RingPresentation::quotient(&amb, &[rel], &GbLimits::default()).unwrap();
        let np = r.normalize(&p);
        prop_assert_eq!(r.normalize(&np), np.clone());
        let sum_then = r.add(&p, &q);
        let then_sum = r.normalize(&np.add(&r.normalize(&q), r.order()));
        prop_assert_eq!(sum_then, then_sum);
    }
}

#[test]
fn groebner_basis_is_deterministic_across_runs() {
    let r = ring3();
    let lim = GbLimits::default();
    let gens: Vec<Poly> = ["x^2*y - z^2", "y^2 - x*z", "x*z^2 - y*z"]
        .iter()
        .map(|s| parse_poly(s, &r).unwrap())
        .collect();
    let runs: Vec<Vec<Poly>> = (0..3)
        .map(|_| {
            skoda_core::gb::reduced_groebner_basis(&gens, r.order(), &lim).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[1], runs[2]);
}

#[test]
fn prime_field_groebner_smoke() {
    let r = RingPresentation::polynomial(
        FieldDesc::Fp(32003),
        vec!["x".into(), "y".into()],
        MonomialOrder::Grevlex,
    );
    let lim = GbLimits::default();
    let gens: Vec<Poly> = ["x^2 - 1, x*y - 1"]
        .iter()
        .flat_map(|s| skoda_core::parser::parse_poly_list(s, &r).unwrap())
        .collect();
    let gb = skoda_core::gb::reduced_groebner_basis(&gens, r.order(), &lim).unwrap();
    let expect: Vec<Poly> = ["y^2 - 1", "x - y"]
        .iter()
        .map(|s| parse_poly(s, &r).unwrap())
        .collect();
    assert_eq!(gb, expect);
}
