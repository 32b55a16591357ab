//! Character laws at finite truncation: additivity, the block decomposition
//! identity, linearity of the scaled embeddings, and report monotonicity.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;

use tseq_core::characters::report::{continuity_report, default_checkpoints};
use tseq_core::characters::TruncatedPAdic;
use tseq_core::sequences::{embedding_sequence, make_sequence, ExponentRule, SequenceSpec};
use tseq_core::{Prime, PruferElement};

fn p3() -> Prime {
    Prime::new(3).unwrap()
}

prop_compose! {
    fn arb_char()(digits in proptest::collection::vec(0u32..3, 12..30)) -> TruncatedPAdic {
        TruncatedPAdic::new(p3(), digits).unwrap()
    }
}

prop_compose! {
    fn arb_elem()(num in 0u64..60_000, exp in 0u32..=10) -> PruferElement {
        PruferElement::new(p3(), num, exp)
    }
}

proptest! {
    #[test]
    fn characters_are_additive(chi in arb_char(), a in arb_elem(), b in arb_elem()) {
        let lhs = chi.eval(&a.add(&b).unwrap()).unwrap();
        let rhs = chi.eval(&a).unwrap().add(&chi.eval(&b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn block_decomposition_identity(chi in arb_char(), lo in 1u32..6, gap in 1u32..6) {
        let hi = lo + gap;
        let lhs = chi.eval(&PruferElement::unit(p3(), hi)).unwrap();
        let prev = chi.eval(&PruferElement::unit(p3(), lo)).unwrap();
        let scale = BigRational::new(BigInt::from(1), BigInt::from(p3().power(gap)));
        let rhs = prev.ratio() * scale + chi.block_value(lo, hi).unwrap().ratio();
        prop_assert_eq!(lhs.ratio(), &rhs);
    }

    #[test]
    fn scaled_embeddings_are_linear(m in 0u64..100, y in arb_elem()) {
        let n = y.exponent() as usize + 6;
        let chi_m = TruncatedPAdic::from_uint(p3(), &BigUint::from(m), n).unwrap();
        let chi_1 = TruncatedPAdic::from_uint(p3(), &BigUint::from(1u64), n).unwrap();
        let direct = chi_m.eval(&y).unwrap();
        let scaled_value = chi_1.eval(&y).unwrap().scalar_mul(&BigInt::from(m));
        let scaled_arg = chi_1.eval(&y.scalar_mul(&BigInt::from(m))).unwrap();
        prop_assert_eq!(&direct, &scaled_value);
        prop_assert_eq!(&direct, &scaled_arg);
    }

    #[test]
    fn tail_suprema_never_increase(chi in arb_char(), horizon in 4u64..12) {
        let seq = embedding_sequence(p3());
        let tol = BigRational::new(1.into(), 9.into());
        let cps = default_checkpoints(horizon);
        let r = continuity_report(&chi, &seq, horizon, &cps, &tol).unwrap();
        for w in r.checkpoints.windows(2) {
            prop_assert!(w[0].sup >= w[1].sup);
        }
    }
}

#[test]
fn shifted_sequence_orders_stabilize() {
    // o(-x + e_{n_k}) = p^{n_k} once p^{n_k} exceeds o(x)
    let spec = SequenceSpec::Shifted {
        p: 3,
        x: "4/9".into(),
        exponents: ExponentRule::Square,
    };
    let seq = make_sequence(&spec).unwrap();
    for k in 2..10u64 {
        let term = seq.term(k).unwrap();
        let nk = (k * k) as u32;
        assert_eq!(term.order(), BigUint::from(p3().power(nk)));
    }
}
