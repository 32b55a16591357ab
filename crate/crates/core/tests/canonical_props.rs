//! Canonical-form laws: existence with non-increasing weight, uniqueness,
//! and the support bounds that drive the order estimates.

use num_bigint::BigInt;
use num_bigint::BigUint;
use num_traits::Pow;
use proptest::prelude::*;

use tseq_core::canonical::{canonical_rep_of, canonical_support, canonicalize, CoeffRep};
use tseq_core::sequences::embedding_sequence;
use tseq_core::windows::{enumerate_window, Budget, Window};
use tseq_core::{Element, Prime, PruferElement};

fn prime(v: u64) -> Prime {
    Prime::new(v).unwrap()
}

prop_compose! {
    fn arb_rep()(pairs in proptest::collection::btree_map(1u32..=10, -60i64..=60, 0..6)) -> CoeffRep {
        CoeffRep::from_i64_terms(prime(3), pairs).unwrap()
    }
}

proptest! {
    #[test]
    fn canonical_form_preserves_value_and_weight(r in arb_rep()) {
        let c = canonicalize(&r).unwrap();
        prop_assert_eq!(c.eval(), r.eval());
        prop_assert!(c.weight() <= r.weight());
        prop_assert!(c.terms().values().all(|&s| s != 0 && s.unsigned_abs() <= 1));
    }

    #[test]
    fn canonical_forms_agree_iff_values_do(r1 in arb_rep(), r2 in arb_rep()) {
        let c1 = canonicalize(&r1).unwrap();
        let c2 = canonicalize(&r2).unwrap();
        prop_assert_eq!(c1 == c2, r1.eval() == r2.eval());
    }

    #[test]
    fn digit_expansion_matches_carry_path(num in 0u64..60_000, exp in 0u32..=10) {
        let y = PruferElement::new(prime(3), num, exp);
        let c = canonical_rep_of(&y).unwrap();
        prop_assert_eq!(c.eval(), y);
    }
}

#[test]
fn combination_weights_bound_canonical_support() {
    // every element reachable with coefficient weight l has λ ≤ l
    for p in [3u64, 5] {
        let e = embedding_sequence(prime(p));
        for l in 1..=4u32 {
            let set =
                enumerate_window(&e, l, Window::new(1, 12).unwrap(), &Budget::default()).unwrap();
            for z in set.keys() {
                let z = match z {
                    Element::Prufer(z) => z,
                    _ => unreachable!(),
                };
                let (_, lam) = canonical_support(z).unwrap();
                assert!(lam as u32 <= l, "p={p} l={l} z={z} λ={lam}");
            }
        }
    }
}

#[test]
fn scaled_unit_support_is_a_short_suffix() {
    // Λ(m·e_n) ⊆ {n-l, …, n} with l = ⌈log_p |m|⌉, and m·e_n ≠ 0 for n > l
    let p = prime(3);
    for m in 1..=27u64 {
        let l = (0..).find(|&l| 3u64.pow(l) >= m).unwrap();
        for n in (l + 1)..=10 {
            for sign in [1i64, -1] {
                let y = PruferElement::unit(p, n).scalar_mul(&BigInt::from(sign * m as i64));
                let (support, lam) = canonical_support(&y).unwrap();
                assert!(lam >= 1);
                assert!(support.iter().all(|&i| i + l >= n && i <= n));
            }
        }
    }
}

#[test]
fn disjoint_supports_add() {
    // supports on even vs odd indices never meet
    let p = prime(3);
    let r1 = CoeffRep::from_i64_terms(p, [(2, 1), (4, -1), (8, 1)]).unwrap();
    let r2 = CoeffRep::from_i64_terms(p, [(1, -1), (5, 1), (9, 1)]).unwrap();
    let y1 = r1.eval();
    let y2 = r2.eval();
    let (s1, l1) = canonical_support(&y1).unwrap();
    let (s2, l2) = canonical_support(&y2).unwrap();
    assert!(s1.is_disjoint(&s2));
    let (s12, l12) = canonical_support(&y1.add(&y2).unwrap()).unwrap();
    assert_eq!(s12, s1.union(&s2).copied().collect());
    assert_eq!(l12, l1 + l2);
}

proptest! {
    #[test]
    fn order_lower_bound_from_support_sizes(r_y in arb_rep(), r_z in arb_rep()) {
        // with λ(y) > λ(z): o(y+z) ≥ p^{k_{g-λ(z)}}, k the sorted support of y
        let y = r_y.eval();
        let z = r_z.eval();
        let (sy, ly) = canonical_support(&y).unwrap();
        let (_, lz) = canonical_support(&z).unwrap();
        prop_assume!(ly > lz);
        let ks: Vec<u32> = sy.iter().copied().collect();
        let bound_index = ks[ly - lz - 1]; // k_{g-λ(z)}, 1-based
        let bound = Pow::pow(&BigUint::from(3u64), bound_index);
        prop_assert!(y.add(&z).unwrap().order() >= bound);
    }
}
