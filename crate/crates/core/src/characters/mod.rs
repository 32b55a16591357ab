//! Characters of the ambient groups at finite truncation.
//!
//! A character of `Z(p^∞)` is determined by a digit vector `α_0, α_1, …` in
//! base `p`, acting on `num/p^exp` by `num · (Σ_{l<exp} α_l p^l) / p^exp`
//! mod 1. Truncating at level `N` pins the action on all elements with
//! exponent at most `N`; everything this module reports is relative to that
//! truncation and an explicit horizon.

pub mod dsum_char;
pub mod radical;
pub mod report;
pub mod witness;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::circle::CircleRational;
use crate::group::prime::Prime;
use crate::group::prufer::PruferElement;
use crate::group::GroupError;
use crate::sequences::SequenceError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharError {
    #[error("truncation holds {len} digits but the evaluation needs {needed}")]
    TruncationTooShort { needed: u32, len: usize },
    #[error("digit {digit} at position {position} is not below p = {p}")]
    DigitOutOfRange { position: usize, digit: u64, p: u64 },
    #[error("block {index} has gap {gap}, need more than {required}")]
    GapTooSmall { index: usize, gap: u32, required: u32 },
    #[error("character and element live over different structures")]
    ContextMismatch,
    #[error("kernel computation exceeded the cap of {cap} elements")]
    CapExceeded { cap: u64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

/// A character of `Z(p^∞)` truncated at level `N = digits.len()`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Wire", into = "Wire")]
pub struct TruncatedPAdic {
    p: Prime,
    digits: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    p: Prime,
    digits: Vec<u32>,
}

impl TryFrom<Wire> for TruncatedPAdic {
    type Error = CharError;
    fn try_from(w: Wire) -> Result<Self, CharError> {
        TruncatedPAdic::new(w.p, w.digits)
    }
}

impl From<TruncatedPAdic> for Wire {
    fn from(c: TruncatedPAdic) -> Wire {
        Wire {
            p: c.p,
            digits: c.digits,
        }
    }
}

impl TruncatedPAdic {
    pub fn new(p: Prime, digits: Vec<u32>) -> Result<Self, CharError> {
        if digits.is_empty() {
            return Err(CharError::InvalidInput("need at least one digit".into()));
        }
        for (position, &d) in digits.iter().enumerate() {
            if u64::from(d) >= p.get() {
                return Err(CharError::DigitOutOfRange {
                    position,
                    digit: u64::from(d),
                    p: p.get(),
                });
            }
        }
        Ok(TruncatedPAdic { p, digits })
    }

    /// The digits of `value mod p^len`: the scaled embeddings `m·χ_1` are
    /// exactly the integer-valued characters.
    pub fn from_uint(p: Prime, value: &BigUint, len: usize) -> Result<Self, CharError> {
        if len == 0 {
            return Err(CharError::InvalidInput("need at least one digit".into()));
        }
        let pb = BigUint::from(p.get());
        let mut rest = value.clone();
        let mut digits = Vec::with_capacity(len);
        for _ in 0..len {
            let (q, r) = rest.div_rem(&pb);
            digits.push(u32::try_from(u64::try_from(r).unwrap()).unwrap());
            rest = q;
        }
        Ok(TruncatedPAdic { p, digits })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        false // at least one digit by construction
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// `Σ_{l<upto} α_l p^l`.
    fn prefix_value(&self, upto: u32) -> BigUint {
        let mut acc = BigUint::zero();
        let pb = BigUint::from(self.p.get());
        for l in (0..upto as usize).rev() {
            acc = acc * &pb + BigUint::from(self.digits[l]);
        }
        acc
    }

    /// Exact value `χ(y)` in the circle. Fails if the truncation cannot
    /// determine it.
    pub fn eval(&self, y: &PruferElement) -> Result<CircleRational, CharError> {
        if y.prime() != self.p {
            return Err(CharError::ContextMismatch);
        }
        let exp = y.exponent();
        if exp as usize > self.digits.len() {
            return Err(CharError::TruncationTooShort {
                needed: exp,
                len: self.digits.len(),
            });
        }
        let s = self.prefix_value(exp);
        let num = BigInt::from(y.numerator() * s);
        CircleRational::from_ratio(num, BigInt::from(self.p.power(exp))).map_err(CharError::Group)
    }

    /// The block value across digit positions `[lo, hi)`:
    /// `(Σ_{l=lo}^{hi-1} α_l p^{l-lo}) / p^{hi-lo}`.
    pub fn block_value(&self, lo: u32, hi: u32) -> Result<CircleRational, CharError> {
        if lo >= hi {
            return Err(CharError::InvalidInput(
                "block bounds must satisfy lo < hi".into(),
            ));
        }
        if hi as usize > self.digits.len() {
            return Err(CharError::TruncationTooShort {
                needed: hi,
                len: self.digits.len(),
            });
        }
        let mut acc = BigUint::zero();
        let pb = BigUint::from(self.p.get());
        for l in (lo..hi).rev() {
            acc = acc * &pb + BigUint::from(self.digits[l as usize]);
        }
        CircleRational::from_ratio(BigInt::from(acc), BigInt::from(self.p.power(hi - lo)))
            .map_err(CharError::Group)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn chi(digits: &[u32]) -> TruncatedPAdic {
        TruncatedPAdic::new(p3(), digits.to_vec()).unwrap()
    }

    fn rat(n: i64, d: i64) -> CircleRational {
        CircleRational::from_ratio(BigInt::from(n), BigInt::from(d)).unwrap()
    }

    #[test]
    fn eval_examples() {
        let e2 = PruferElement::unit(p3(), 2);
        assert_eq!(chi(&[1, 0]).eval(&e2).unwrap(), rat(1, 9));
        assert_eq!(chi(&[1, 2]).eval(&e2).unwrap(), rat(7, 9));
        // 3·χ_1 kills 1/3
        let triple = TruncatedPAdic::from_uint(p3(), &BigUint::from(3u64), 4).unwrap();
        assert!(triple
            .eval(&PruferElement::unit(p3(), 1))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn truncation_guard() {
        let e5 = PruferElement::unit(p3(), 5);
        assert_eq!(
            chi(&[1, 0]).eval(&e5).unwrap_err(),
            CharError::TruncationTooShort { needed: 5, len: 2 }
        );
    }

    #[test]
    fn additivity() {
        let c = chi(&[2, 1, 0, 2, 1]);
        let a = PruferElement::new(p3(), 7u32, 3);
        let b = PruferElement::new(p3(), 11u32, 4);
        let lhs = c.eval(&a.add(&b).unwrap()).unwrap();
        let rhs = c.eval(&a).unwrap().add(&c.eval(&b).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn block_values() {
        // digits (α_0, α_1, α_2) = (0, 2, 1): block [1, 3) gives (2 + 1·3)/9
        let c = chi(&[0, 2, 1]);
        assert_eq!(c.block_value(1, 3).unwrap(), rat(5, 9));
        assert!(chi(&[1, 0, 0]).block_value(1, 3).unwrap().is_zero());
        // all digits p-1 over a gap g: (p^g - 1)/p^g
        let c = chi(&[2, 2, 2, 2]);
        assert_eq!(c.block_value(0, 4).unwrap(), rat(80, 81));
    }

    #[test]
    fn block_decomposition_identity() {
        // χ(e_hi) = χ(e_lo)/p^(hi-lo) + block(lo, hi), exactly as rationals
        let c = chi(&[2, 0, 1, 2, 2, 0, 1]);
        for (lo, hi) in [(1u32, 3u32), (2, 5), (3, 7)] {
            let lhs = c.eval(&PruferElement::unit(p3(), hi)).unwrap();
            let prev = c.eval(&PruferElement::unit(p3(), lo)).unwrap();
            let scale = BigRational::new(1.into(), BigInt::from(p3().power(hi - lo)));
            let rhs = prev.ratio() * scale + c.block_value(lo, hi).unwrap().ratio();
            assert_eq!(lhs.ratio(), &rhs);
        }
    }

    #[test]
    fn json_round_trip() {
        let c = chi(&[1, 0, 2]);
        let js = serde_json::to_string(&c).unwrap();
        assert_eq!(js, r#"{"p":3,"digits":[1,0,2]}"#);
        assert_eq!(serde_json::from_str::<TruncatedPAdic>(&js).unwrap(), c);
        assert!(serde_json::from_str::<TruncatedPAdic>(r#"{"p":3,"digits":[3]}"#).is_err());
    }
}
