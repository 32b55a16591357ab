//! Rational points of the circle group `T = R/Z`, kept as reduced fractions
//! in `[0, 1)` with the norm `‖q‖ = min(q, 1-q)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::GroupError;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CircleRational(BigRational);

impl CircleRational {
    /// Reduce an arbitrary rational mod 1 into `[0, 1)`.
    pub fn new(q: BigRational) -> Self {
        let f = q.floor();
        CircleRational(q - f)
    }

    pub fn from_ratio(num: BigInt, den: BigInt) -> Result<Self, GroupError> {
        if den.is_zero() {
            return Err(GroupError::InvalidElement("zero denominator".into()));
        }
        Ok(Self::new(BigRational::new(num, den)))
    }

    pub fn zero() -> Self {
        CircleRational(BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &CircleRational) -> CircleRational {
        Self::new(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &CircleRational) -> CircleRational {
        Self::new(&self.0 - &other.0)
    }

    pub fn neg(&self) -> CircleRational {
        Self::new(-self.0.clone())
    }

    pub fn scalar_mul(&self, m: &BigInt) -> CircleRational {
        Self::new(&self.0 * BigRational::from_integer(m.clone()))
    }

    /// Distance to 0 in `T`: `min(q, 1-q)`, always in `[0, 1/2]`.
    pub fn norm(&self) -> BigRational {
        let one_minus = BigRational::one() - &self.0;
        if self.0 <= one_minus {
            self.0.clone()
        } else {
            one_minus
        }
    }

    /// The representative in `[0, 1)`.
    pub fn ratio(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for CircleRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for CircleRational {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, GroupError> {
        let bad = || GroupError::InvalidElement(format!("cannot parse fraction `{s}`"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| bad())?;
        let den = BigInt::from_str(den).map_err(|_| bad())?;
        if den.is_zero() || den.is_negative() {
            return Err(bad());
        }
        Self::from_ratio(num, den)
    }
}

impl Serialize for CircleRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CircleRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// "num/den" serde for plain rationals appearing in reports.
pub mod ratio_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        let (n, dd) = s
            .split_once('/')
            .ok_or_else(|| de::Error::custom("expected num/den"))?;
        let n = BigInt::from_str(n).map_err(de::Error::custom)?;
        let dd = BigInt::from_str(dd).map_err(de::Error::custom)?;
        if dd.is_zero() {
            return Err(de::Error::custom("zero denominator"));
        }
        Ok(BigRational::new(n, dd))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> CircleRational {
        CircleRational::from_ratio(BigInt::from(n), BigInt::from(d)).unwrap()
    }

    #[test]
    fn reduction_into_unit_interval() {
        assert_eq!(q(7, 5), q(2, 5));
        assert_eq!(q(-1, 3), q(2, 3));
        assert!(q(9, 3).is_zero());
    }

    #[test]
    fn norm_is_distance_to_zero() {
        assert_eq!(q(2, 3).norm(), BigRational::new(1.into(), 3.into()));
        assert_eq!(q(1, 2).norm(), BigRational::new(1.into(), 2.into()));
        assert!(q(0, 1).norm().is_zero());
    }

    #[test]
    fn parse_display_round_trip() {
        let v = q(5, 9);
        assert_eq!(v.to_string(), "5/9");
        assert_eq!(v.to_string().parse::<CircleRational>().unwrap(), v);
    }
}
