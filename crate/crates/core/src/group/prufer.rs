//! Elements of the Prüfer group `Z(p^∞)`: normalized fractions `num / p^exp`
//! taken mod 1.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::circle::CircleRational;
use super::prime::Prime;
use super::GroupError;
use crate::factored::Factored;

/// A normalized element of `Z(p^∞)`.
///
/// Zero is `(num, exp) = (0, 0)`; otherwise `0 < num < p^exp` and `p ∤ num`,
/// so two elements are equal iff their fields are equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Wire", into = "Wire")]
pub struct PruferElement {
    p: Prime,
    num: BigUint,
    exp: u32,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    p: Prime,
    #[serde(with = "super::serde_util::biguint")]
    num: BigUint,
    exp: u32,
}

impl TryFrom<Wire> for PruferElement {
    type Error = GroupError;
    fn try_from(w: Wire) -> Result<Self, GroupError> {
        Ok(PruferElement::new(w.p, w.num, w.exp))
    }
}

impl From<PruferElement> for Wire {
    fn from(e: PruferElement) -> Wire {
        Wire {
            p: e.p,
            num: e.num,
            exp: e.exp,
        }
    }
}

impl PruferElement {
    /// The normalized representative of `num / p^exp` mod 1. Total.
    pub fn new(p: Prime, num: impl Into<BigUint>, exp: u32) -> Self {
        let mut num: BigUint = num.into() % p.power(exp);
        let mut exp = exp;
        let pb = BigUint::from(p.get());
        while exp > 0 && !num.is_zero() && (&num % &pb).is_zero() {
            num /= &pb;
            exp -= 1;
        }
        if num.is_zero() {
            exp = 0;
        }
        PruferElement { p, num, exp }
    }

    pub fn zero(p: Prime) -> Self {
        PruferElement {
            p,
            num: BigUint::zero(),
            exp: 0,
        }
    }

    /// `e_n = 1 / p^n`; `e_0` is zero.
    pub fn unit(p: Prime, n: u32) -> Self {
        Self::new(p, 1u32, n)
    }

    /// Parse "num/den" where `den` must be a power of `p`.
    pub fn from_fraction_str(p: Prime, s: &str) -> Result<Self, GroupError> {
        let bad = |m: &str| GroupError::InvalidElement(format!("`{s}`: {m}"));
        let (num_s, den_s) = s.split_once('/').unwrap_or((s, "1"));
        let num: BigInt = num_s
            .trim()
            .parse()
            .map_err(|_| bad("numerator is not an integer"))?;
        let mut den: BigUint = den_s
            .trim()
            .parse()
            .map_err(|_| bad("denominator is not a positive integer"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        let pb = BigUint::from(p.get());
        let mut exp = 0u32;
        while (&den % &pb).is_zero() {
            den /= &pb;
            exp += 1;
        }
        if den != BigUint::from(1u32) {
            return Err(bad("denominator is not a power of p"));
        }
        let modulus = BigInt::from(p.power(exp));
        let num = num.mod_floor(&modulus).to_biguint().unwrap();
        Ok(Self::new(p, num, exp))
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &PruferElement) -> Result<PruferElement, GroupError> {
        if self.p != other.p {
            return Err(GroupError::ContextMismatch);
        }
        let e = self.exp.max(other.exp);
        let a = &self.num * self.p.power(e - self.exp);
        let b = &other.num * self.p.power(e - other.exp);
        Ok(Self::new(self.p, a + b, e))
    }

    pub fn sub(&self, other: &PruferElement) -> Result<PruferElement, GroupError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PruferElement {
        if self.is_zero() {
            return self.clone();
        }
        PruferElement {
            p: self.p,
            num: self.p.power(self.exp) - &self.num,
            exp: self.exp,
        }
    }

    pub fn scalar_mul(&self, m: &BigInt) -> PruferElement {
        if self.is_zero() || m.is_zero() {
            return Self::zero(self.p);
        }
        let modulus = BigInt::from(self.p.power(self.exp));
        let m = m.mod_floor(&modulus).to_biguint().unwrap();
        Self::new(self.p, m * &self.num, self.exp)
    }

    /// `o(a) = p^exp` for a normalized element.
    pub fn order(&self) -> BigUint {
        self.p.power(self.exp)
    }

    pub fn order_factored(&self) -> Factored {
        Factored::prime_power(self.p.get(), self.exp)
    }

    pub fn to_circle(&self) -> CircleRational {
        CircleRational::from_ratio(BigInt::from(self.num.clone()), BigInt::from(self.order()))
            .expect("p^exp is nonzero")
    }
}

impl fmt::Display for PruferElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn el(num: u64, exp: u32) -> PruferElement {
        PruferElement::new(p3(), num, exp)
    }

    #[test]
    fn normalization() {
        let a = el(8, 2);
        assert_eq!((a.numerator().to_string().as_str(), a.exponent()), ("8", 2));
        assert!(el(9, 2).is_zero());
        let b = PruferElement::new(Prime::new(5).unwrap(), 7u64, 1);
        assert_eq!(b.to_string(), "2/5");
        assert_eq!(el(6, 2), el(2, 1)); // 6/9 = 2/3
    }

    #[test]
    fn addition() {
        assert!(el(1, 1).add(&el(2, 1)).unwrap().is_zero());
        assert_eq!(el(1, 1).add(&el(1, 2)).unwrap(), el(4, 2));
    }

    #[test]
    fn difference_identity_from_shifted_terms() {
        // a_n = -1/3 + 1/3^n; then 3*a_{n+1} - a_n = 1/3 for every n.
        let e1 = PruferElement::unit(p3(), 1);
        for n in 1..20u32 {
            let a_n = e1.neg().add(&PruferElement::unit(p3(), n)).unwrap();
            let a_n1 = e1.neg().add(&PruferElement::unit(p3(), n + 1)).unwrap();
            let got = a_n1.scalar_mul(&BigInt::from(3)).sub(&a_n).unwrap();
            assert_eq!(got, e1);
        }
    }

    #[test]
    fn scalar_multiples() {
        assert_eq!(el(1, 2).scalar_mul(&BigInt::from(3)), el(1, 1));
        assert_eq!(el(1, 1).scalar_mul(&BigInt::from(-1)), el(2, 1));
        assert_eq!(el(1, 1).scalar_mul(&BigInt::from(-2)), el(1, 1));
        assert!(el(1, 1).scalar_mul(&BigInt::zero()).is_zero());
    }

    #[test]
    fn orders() {
        assert_eq!(el(8, 2).order(), BigUint::from(9u64));
        assert_eq!(PruferElement::zero(p3()).order(), BigUint::from(1u64));
        // o(-x + e_4) = 3^4 when o(x) = 3: unequal orders take the max.
        let x = el(1, 1);
        let a = x.neg().add(&PruferElement::unit(p3(), 4)).unwrap();
        assert_eq!(a.order(), BigUint::from(81u64));
    }

    #[test]
    fn fraction_parsing() {
        assert_eq!(PruferElement::from_fraction_str(p3(), "1/3").unwrap(), el(1, 1));
        assert_eq!(PruferElement::from_fraction_str(p3(), "-1/3").unwrap(), el(2, 1));
        assert_eq!(PruferElement::from_fraction_str(p3(), "4/3").unwrap(), el(1, 1));
        assert!(PruferElement::from_fraction_str(p3(), "1/6").is_err());
        assert!(PruferElement::from_fraction_str(p3(), "1/0").is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = el(8, 2);
        let js = serde_json::to_string(&a).unwrap();
        assert_eq!(js, r#"{"p":3,"num":8,"exp":2}"#);
        assert_eq!(serde_json::from_str::<PruferElement>(&js).unwrap(), a);

        let big = PruferElement::unit(p3(), 300).neg();
        let js = serde_json::to_string(&big).unwrap();
        assert_eq!(serde_json::from_str::<PruferElement>(&js).unwrap(), big);
    }
}
