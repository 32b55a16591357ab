//! Positive integers carried as factored multisets (prime -> exponent), so
//! gcd/lcm chains over element orders never materialize huge values.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Pow};

/// A positive integer in factored form.
///
/// The empty map represents 1. Exponents are always nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Factored(BTreeMap<u64, u32>);

impl Factored {
    pub fn one() -> Self {
        Factored(BTreeMap::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Factor `n` by trial division. Panics if `n == 0`.
    pub fn from_u64(mut n: u64) -> Self {
        assert!(n > 0, "cannot factor zero");
        let mut map = BTreeMap::new();
        let mut d = 2u64;
        while d.saturating_mul(d) <= n {
            if n % d == 0 {
                let mut e = 0u32;
                while n % d == 0 {
                    n /= d;
                    e += 1;
                }
                map.insert(d, e);
            }
            d += 1;
        }
        if n > 1 {
            *map.entry(n).or_insert(0) += 1;
        }
        Factored(map)
    }

    /// `p^e` without factoring. Panics unless `p ≥ 2`.
    pub fn prime_power(p: u64, e: u32) -> Self {
        assert!(p >= 2);
        let mut map = BTreeMap::new();
        if e > 0 {
            map.insert(p, e);
        }
        Factored(map)
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.0.get(&p).copied().unwrap_or(0)
    }

    pub fn value(&self) -> BigUint {
        let mut v = BigUint::one();
        for (&p, &e) in &self.0 {
            v *= Pow::pow(&BigUint::from(p), e);
        }
        v
    }

    pub fn mul(&self, other: &Factored) -> Factored {
        let mut map = self.0.clone();
        for (&p, &e) in &other.0 {
            *map.entry(p).or_insert(0) += e;
        }
        Factored(map)
    }

    pub fn gcd(&self, other: &Factored) -> Factored {
        let mut map = BTreeMap::new();
        for (&p, &e) in &self.0 {
            let f = other.exponent_of(p).min(e);
            if f > 0 {
                map.insert(p, f);
            }
        }
        Factored(map)
    }

    pub fn lcm(&self, other: &Factored) -> Factored {
        let mut map = self.0.clone();
        for (&p, &e) in &other.0 {
            let slot = map.entry(p).or_insert(0);
            *slot = (*slot).max(e);
        }
        Factored(map)
    }

    pub fn divides(&self, other: &Factored) -> bool {
        self.0.iter().all(|(&p, &e)| other.exponent_of(p) >= e)
    }

    /// `self / gcd(self, other)`, the part of `self` not covered by `other`.
    pub fn quotient_by_gcd(&self, other: &Factored) -> Factored {
        let mut map = BTreeMap::new();
        for (&p, &e) in &self.0 {
            let f = e.saturating_sub(other.exponent_of(p));
            if f > 0 {
                map.insert(p, f);
            }
        }
        Factored(map)
    }

    pub fn value_cmp(&self, other: &Factored) -> std::cmp::Ordering {
        if self == other {
            return std::cmp::Ordering::Equal;
        }
        self.value().cmp(&other.value())
    }

    /// All divisors in ascending order.
    pub fn divisors(&self) -> Vec<BigUint> {
        let mut out = vec![BigUint::one()];
        for (&p, &e) in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            let pb = BigUint::from(p);
            for d in &out {
                let mut acc = d.clone();
                next.push(acc.clone());
                for _ in 0..e {
                    acc = &acc * &pb;
                    next.push(acc.clone());
                }
            }
            out = next;
        }
        out.sort();
        out
    }
}

impl fmt::Display for Factored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (&p, &e) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_and_value_round_trip() {
        for n in 1..500u64 {
            assert_eq!(Factored::from_u64(n).value(), BigUint::from(n));
        }
    }

    #[test]
    fn gcd_lcm_match_integer_versions() {
        use num_integer::Integer;
        for a in 1..60u64 {
            for b in 1..60u64 {
                let fa = Factored::from_u64(a);
                let fb = Factored::from_u64(b);
                assert_eq!(fa.gcd(&fb).value(), BigUint::from(a.gcd(&b)));
                assert_eq!(fa.lcm(&fb).value(), BigUint::from(a.lcm(&b)));
            }
        }
    }

    #[test]
    fn quotient_by_gcd_is_exact_ratio() {
        let t = Factored::from_u64(54); // 2 * 3^3
        let l = Factored::from_u64(12); // 2^2 * 3
        // 54 / gcd(54, 12) = 54 / 6 = 9
        assert_eq!(t.quotient_by_gcd(&l).value(), BigUint::from(9u64));
    }

    #[test]
    fn divisors_sorted() {
        let d = Factored::from_u64(12).divisors();
        let expect: Vec<BigUint> = [1u64, 2, 3, 4, 6, 12].iter().map(|&n| n.into()).collect();
        assert_eq!(d, expect);
    }

    #[test]
    fn huge_prime_power_stays_cheap() {
        let t = Factored::prime_power(3, 1728);
        let l = Factored::prime_power(3, 1331);
        assert_eq!(t.quotient_by_gcd(&l), Factored::prime_power(3, 397));
    }
}
