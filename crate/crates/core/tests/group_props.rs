//! Structural properties of the exact group arithmetic.

use num_bigint::BigInt;
use proptest::prelude::*;
use std::sync::Arc;

use tseq_core::group::subgroup::{order_mod_subgroup, torsion_subgroup, SubgroupTable};
use tseq_core::{
    Ambient, DirectSumContext, DirectSumElement, Element, OrdersRule, Prime, PruferElement,
};

fn p3() -> Prime {
    Prime::new(3).unwrap()
}

fn listed_ctx() -> Arc<DirectSumContext> {
    DirectSumContext::new(OrdersRule::Listed(vec![2, 3, 4, 9])).unwrap()
}

prop_compose! {
    fn arb_prufer()(num in 0u64..20_000, exp in 0u32..=9) -> PruferElement {
        PruferElement::new(p3(), num, exp)
    }
}

prop_compose! {
    fn arb_sum()(c1 in 0u64..2, c2 in 0u64..3, c3 in 0u64..4, c4 in 0u64..9) -> DirectSumElement {
        DirectSumElement::new(listed_ctx(), [(1, c1), (2, c2), (3, c3), (4, c4)]).unwrap()
    }
}

fn as_elements(a: PruferElement, s: DirectSumElement) -> (Element, Element) {
    (Element::Prufer(a), Element::Sum(s))
}

proptest! {
    #[test]
    fn group_axioms_prufer(a in arb_prufer(), b in arb_prufer(), c in arb_prufer()) {
        let ab_c = a.add(&b).unwrap().add(&c).unwrap();
        let a_bc = a.add(&b.add(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.add(&PruferElement::zero(p3())).unwrap(), a.clone());
        prop_assert!(a.add(&a.neg()).unwrap().is_zero());
    }

    #[test]
    fn group_axioms_sum(a in arb_sum(), b in arb_sum(), c in arb_sum()) {
        let ab_c = a.add(&b).unwrap().add(&c).unwrap();
        let a_bc = a.add(&b.add(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert!(a.add(&a.neg()).unwrap().is_zero());
    }

    #[test]
    fn normalization_is_canonical(num in 0u64..20_000, exp in 0u32..=8) {
        // the same value written with an unreduced numerator normalizes equal
        let a = PruferElement::new(p3(), num, exp);
        let b = PruferElement::new(p3(), num * 3, exp + 1);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.numerator(), b.numerator());
        prop_assert_eq!(a.exponent(), b.exponent());
    }

    #[test]
    fn unequal_orders_add_to_the_max(a in arb_prufer(), b in arb_prufer()) {
        if a.order() != b.order() {
            let big = a.order().max(b.order());
            prop_assert_eq!(a.add(&b).unwrap().order(), big);
        }
    }

    #[test]
    fn scalar_order_law(a in arb_prufer(), s in arb_sum(), m in -300i64..300) {
        use num_integer::Integer;
        let (ea, es) = as_elements(a, s);
        for e in [ea, es] {
            let ord = e.order();
            let got = e.scalar_mul(&BigInt::from(m)).order();
            let mm = BigInt::from(m).mod_floor(&BigInt::from(ord.clone()));
            let expected = &ord / ord.gcd(&mm.magnitude());
            prop_assert_eq!(got, expected);
        }
    }

    #[test]
    fn order_mod_divides_order(a in arb_prufer(), g in arb_prufer()) {
        use num_integer::Integer;
        let amb = Ambient::Prufer(p3());
        let h = SubgroupTable::generate(amb, vec![Element::Prufer(g)], 1_000_000).unwrap();
        let e = Element::Prufer(a);
        let q = order_mod_subgroup(&e, &h).unwrap();
        prop_assert!(e.order().is_multiple_of(&q));
    }

    #[test]
    fn torsion_counts(v in 0u32..=7, coprime in 1u64..50) {
        prop_assume!(coprime % 3 != 0);
        let amb = Ambient::Prufer(p3());
        let n = 3u64.pow(v) * coprime;
        let t = torsion_subgroup(&amb, n, None, 10_000_000).unwrap();
        prop_assert_eq!(t.len() as u64, 3u64.pow(v));
    }

    #[test]
    fn element_json_round_trip(a in arb_prufer(), s in arb_sum()) {
        let (ea, es) = as_elements(a, s);
        for e in [ea, es] {
            let js = serde_json::to_string(&e).unwrap();
            prop_assert_eq!(serde_json::from_str::<Element>(&js).unwrap(), e);
        }
    }
}
