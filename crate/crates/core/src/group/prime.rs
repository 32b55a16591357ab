//! Certified primes. Trial division is enough at the scales this library
//! targets.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Pow;
use serde::{Deserialize, Serialize};

use super::GroupError;

/// A prime number, verified at construction.
#[derive(Debug, Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, GroupError> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(GroupError::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// `p^e` as a big integer.
    pub fn power(self, e: u32) -> BigUint {
        Pow::pow(&BigUint::from(self.0), e)
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    /// `(p-1)/2`, the canonical coefficient bound for odd `p`.
    pub fn half(self) -> u64 {
        (self.0 - 1) / 2
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl TryFrom<u64> for Prime {
    type Error = GroupError;
    fn try_from(p: u64) -> Result<Self, GroupError> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_primes_rejects_composites() {
        for p in [2u64, 3, 5, 7, 11, 97, 101] {
            assert!(Prime::new(p).is_ok());
        }
        for n in [0u64, 1, 4, 9, 91, 100] {
            assert!(Prime::new(n).is_err());
        }
    }

    #[test]
    fn power_is_exact() {
        let p = Prime::new(3).unwrap();
        assert_eq!(p.power(4), BigUint::from(81u64));
        assert_eq!(p.power(0), BigUint::from(1u64));
    }
}
