//! Construction of faithful characters adapted to a shifted sequence
//! `a_k = -x + e_{n_k}`.
//!
//! The digit layout: position 0 holds 1 and positions `1..n_0` hold 0 (so the
//! character is the identity on everything of order dividing `p^{n_0}`, in
//! particular on `⟨x⟩`), and in every complete digit block `[n_k, n_{k+1})`
//! the top `n_0` positions carry the base-p digits of the numerator of `x`.
//! Each complete block value then equals `x` exactly, which is what drives
//! `χ(a_k)` to zero while `χ` stays faithful. All remaining positions are
//! free; the count of free positions is the base-p logarithm of the number of
//! distinct witnesses at this truncation.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{CharError, TruncatedPAdic};
use crate::group::prufer::PruferElement;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaithfulWitness {
    pub character: TruncatedPAdic,
    /// Digit positions below the truncation not pinned by the construction.
    pub free_positions: u64,
    /// The `[n_k, n_{k+1})` blocks that fit under the truncation.
    pub complete_blocks: Vec<(u32, u32)>,
}

/// Build the witness character for `x ≠ 0` and strictly increasing exponents.
///
/// Requires every listed gap `n_{k+1} - n_k` to exceed `n_0` (the exponent of
/// `x`) and `n_1 ≥ n_0`. Free positions default to 0 and may be overridden,
/// which is how distinct witnesses are exhibited.
pub fn build_faithful_witness(
    x: &PruferElement,
    exponents: &[u32],
    truncation: usize,
    overrides: &BTreeMap<u32, u32>,
) -> Result<FaithfulWitness, CharError> {
    if x.is_zero() {
        return Err(CharError::InvalidInput("x must be nonzero".into()));
    }
    if exponents.is_empty() {
        return Err(CharError::InvalidInput("need at least one exponent".into()));
    }
    if exponents.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CharError::InvalidInput(
            "exponents must be strictly increasing".into(),
        ));
    }
    let p = x.prime();
    let n0 = x.exponent();
    if exponents[0] < n0 {
        return Err(CharError::InvalidInput(
            "the first exponent must be at least the order exponent of x".into(),
        ));
    }
    for (index, w) in exponents.windows(2).enumerate() {
        let gap = w[1] - w[0];
        if gap <= n0 {
            return Err(CharError::GapTooSmall {
                index: index + 1,
                gap,
                required: n0,
            });
        }
    }
    if truncation < n0 as usize {
        return Err(CharError::TruncationTooShort {
            needed: n0,
            len: truncation,
        });
    }

    let x_digits = base_digits(x.numerator(), p.get(), n0 as usize);
    let mut digits = vec![0u32; truncation];
    digits[0] = 1;

    let mut complete_blocks = Vec::new();
    for w in exponents.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi as usize > truncation {
            break;
        }
        for (j, &d) in x_digits.iter().enumerate() {
            digits[(hi - n0) as usize + j] = d;
        }
        complete_blocks.push((lo, hi));
    }

    let pinned = |pos: u32| -> bool {
        if pos < n0 {
            return true;
        }
        complete_blocks
            .iter()
            .any(|&(_, hi)| pos >= hi - n0 && pos < hi)
    };
    for (&pos, &d) in overrides {
        if pos as usize >= truncation {
            return Err(CharError::TruncationTooShort {
                needed: pos + 1,
                len: truncation,
            });
        }
        if pinned(pos) {
            return Err(CharError::InvalidInput(format!(
                "digit position {pos} is pinned by the construction"
            )));
        }
        if u64::from(d) >= p.get() {
            return Err(CharError::DigitOutOfRange {
                position: pos as usize,
                digit: u64::from(d),
                p: p.get(),
            });
        }
        digits[pos as usize] = d;
    }

    let free_positions =
        truncation as u64 - u64::from(n0) - u64::from(n0) * complete_blocks.len() as u64;
    Ok(FaithfulWitness {
        character: TruncatedPAdic::new(p, digits)?,
        free_positions,
        complete_blocks,
    })
}

fn base_digits(value: &BigUint, base: u64, len: usize) -> Vec<u32> {
    let b = BigUint::from(base);
    let mut rest = value.clone();
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let (q, r) = rest.div_rem(&b);
        out.push(u32::try_from(u64::try_from(r).unwrap()).unwrap());
        rest = q;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::circle::CircleRational;
    use crate::group::prime::Prime;
    use num_bigint::BigInt;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    #[test]
    fn blocks_encode_x_exactly() {
        let x = PruferElement::unit(p3(), 1);
        let exps: Vec<u32> = (1..=8).map(|k| k * k).collect();
        let w = build_faithful_witness(&x, &exps, 50, &BTreeMap::new()).unwrap();
        assert!(!w.complete_blocks.is_empty());
        let xv = x.to_circle();
        for &(lo, hi) in &w.complete_blocks {
            assert_eq!(w.character.block_value(lo, hi).unwrap(), xv);
        }
        assert_eq!(w.character.eval(&x).unwrap(), xv);
        assert!(!w
            .character
            .eval(&PruferElement::unit(p3(), 1))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn acts_as_identity_below_the_order_of_x() {
        let x = PruferElement::new(p3(), 2u32, 2); // order 9
        let exps: Vec<u32> = (2..=7).map(|k| k * k).collect();
        let w = build_faithful_witness(&x, &exps, 60, &BTreeMap::new()).unwrap();
        for y in [
            PruferElement::unit(p3(), 1),
            PruferElement::unit(p3(), 2),
            PruferElement::new(p3(), 5u32, 2),
        ] {
            assert_eq!(w.character.eval(&y).unwrap(), y.to_circle());
        }
    }

    #[test]
    fn free_position_count_and_overrides() {
        let x = PruferElement::unit(p3(), 1);
        let exps: Vec<u32> = vec![1, 4, 9, 16, 25];
        let w = build_faithful_witness(&x, &exps, 20, &BTreeMap::new()).unwrap();
        // blocks [1,4), [4,9), [9,16) fit below 20; each pins one digit
        assert_eq!(w.complete_blocks.len(), 3);
        assert_eq!(w.free_positions, 20 - 1 - 3);

        // overriding a free digit gives a second, distinct witness
        let w2 =
            build_faithful_witness(&x, &exps, 20, &BTreeMap::from([(1u32, 2u32)])).unwrap();
        assert_ne!(w.character, w2.character);
        assert_eq!(
            w2.character.block_value(1, 4).unwrap(),
            x.to_circle()
                .add(&CircleRational::from_ratio(BigInt::from(2), BigInt::from(27)).unwrap())
        );
        // pinned positions reject overrides
        assert!(build_faithful_witness(&x, &exps, 20, &BTreeMap::from([(3u32, 1u32)])).is_err());
    }

    #[test]
    fn small_gaps_are_rejected() {
        let x = PruferElement::new(p3(), 2u32, 2);
        let err = build_faithful_witness(&x, &[2, 4, 6], 30, &BTreeMap::new()).unwrap_err();
        assert_eq!(
            err,
            CharError::GapTooSmall {
                index: 1,
                gap: 2,
                required: 2
            }
        );
    }
}
