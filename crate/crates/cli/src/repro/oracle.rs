//! Exhaustive search oracle for canonical forms, independent of the carry
//! algorithm in the library.
//!
//! Values are scaled integers: an element `num/p^e` with `e ≤ 10` is the
//! residue `num·p^(10-e) mod p^10`, and a coefficient vector `(σ_1…σ_10)`
//! evaluates to `Σ σ_n p^(10-n)`. The oracle enumerates the full space of
//! bounded-coefficient vectors, split meet-in-the-middle into a low half
//! (indices 6..=10, precomputed into a table) and a high half (indices
//! 1..=5, scanned per query), and returns every vector matching a target
//! value. Agreement means: exactly one match, equal to the candidate.

use std::collections::HashMap;

/// Exhaustive canonical-vector searcher over indices `1..=10` for one prime.
pub struct CanonicalOracle {
    half: i64,
    modulus: u64,
    /// place value p^(10-n) for n = 1..=10
    places: [u64; 10],
    /// low-half value -> digits at indices 6..=10
    low: HashMap<u64, [i8; 5]>,
}

impl CanonicalOracle {
    pub fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p >= 3 && p <= 7, "desk-scale odd prime");
        let half = ((p - 1) / 2) as i8;
        let modulus = p.pow(10);
        let mut places = [0u64; 10];
        for n in 1..=10usize {
            places[n - 1] = p.pow(10 - n as u32);
        }
        let mut low = HashMap::new();
        let mut digits = [-half; 5];
        loop {
            let mut v = 0i64;
            for (j, &d) in digits.iter().enumerate() {
                v += i64::from(d) * places[5 + j] as i64;
            }
            let key = v.rem_euclid(modulus as i64) as u64;
            let prev = low.insert(key, digits);
            assert!(prev.is_none(), "low-half values must be distinct");
            // odometer
            let mut pos = 0;
            loop {
                if pos == 5 {
                    return CanonicalOracle {
                        half: half as i64,
                        modulus,
                        places,
                        low,
                    };
                }
                if digits[pos] < half {
                    digits[pos] += 1;
                    break;
                }
                digits[pos] = -half;
                pos += 1;
            }
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The scaled value of a coefficient list over indices `1..=10`.
    pub fn value_of_terms(&self, terms: impl Iterator<Item = (u32, i64)>) -> u64 {
        let mut v = 0i128;
        for (n, s) in terms {
            assert!((1..=10).contains(&n));
            v += i128::from(s) * i128::from(self.places[(n - 1) as usize]);
        }
        v.rem_euclid(i128::from(self.modulus)) as u64
    }

    /// Every bounded-coefficient vector evaluating to `target`, as sorted
    /// `(index, coefficient)` pairs with zeros dropped.
    pub fn search(&self, target: u64) -> Vec<Vec<(u32, i64)>> {
        let mut found = Vec::new();
        let half = self.half as i8;
        let mut digits = [-half; 5];
        loop {
            let mut hv = 0i64;
            for (j, &d) in digits.iter().enumerate() {
                hv += i64::from(d) * self.places[j] as i64;
            }
            let rest = (target as i64 - hv).rem_euclid(self.modulus as i64) as u64;
            if let Some(low) = self.low.get(&rest) {
                let mut vec = Vec::new();
                for (j, &d) in digits.iter().enumerate() {
                    if d != 0 {
                        vec.push((j as u32 + 1, i64::from(d)));
                    }
                }
                for (j, &d) in low.iter().enumerate() {
                    if d != 0 {
                        vec.push((j as u32 + 6, i64::from(d)));
                    }
                }
                found.push(vec);
            }
            let mut pos = 0;
            loop {
                if pos == 5 {
                    return found;
                }
                if digits[pos] < half {
                    digits[pos] += 1;
                    break;
                }
                digits[pos] = -half;
                pos += 1;
            }
        }
    }
}
