//! Canonical coefficient forms in `Z(p^∞)` for odd `p`.
//!
//! Every element is a sum `Σ σ_n e_n` with `e_n = 1/p^n`; the representation
//! is canonical when every `|σ_n| ≤ (p-1)/2`. For odd `p` the canonical form
//! exists and is unique, which makes its support a well-defined invariant of
//! the element.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::prime::Prime;
use crate::group::prufer::PruferElement;
use crate::group::GroupError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CanonicalError {
    #[error("canonical forms are only defined for odd p")]
    PEqualsTwo,
    #[error("coefficient index {0} appears twice")]
    DuplicateIndex(u32),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// An integer combination `Σ σ_n e_n` with distinct indices `n ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Wire", into = "Wire")]
pub struct CoeffRep {
    p: Prime,
    terms: BTreeMap<u32, BigInt>,
}

#[derive(Serialize, Deserialize)]
struct Coeff(#[serde(with = "crate::group::serde_util::bigint")] BigInt);

#[derive(Serialize, Deserialize)]
struct Wire {
    p: Prime,
    terms: Vec<(u32, Coeff)>,
}

impl TryFrom<Wire> for CoeffRep {
    type Error = CanonicalError;
    fn try_from(w: Wire) -> Result<Self, CanonicalError> {
        CoeffRep::new(w.p, w.terms.into_iter().map(|(n, Coeff(s))| (n, s)))
    }
}

impl From<CoeffRep> for Wire {
    fn from(r: CoeffRep) -> Wire {
        Wire {
            p: r.p,
            terms: r.terms.into_iter().map(|(n, s)| (n, Coeff(s))).collect(),
        }
    }
}

impl CoeffRep {
    /// Build from `(index, coefficient)` pairs. Indices must be distinct and
    /// at least 1; zero coefficients are dropped.
    pub fn new(
        p: Prime,
        terms: impl IntoIterator<Item = (u32, BigInt)>,
    ) -> Result<Self, CanonicalError> {
        let mut map = BTreeMap::new();
        for (n, sigma) in terms {
            if n == 0 {
                return Err(CanonicalError::Group(GroupError::InvalidElement(
                    "coefficient indices start at 1".into(),
                )));
            }
            if map.insert(n, sigma).is_some() {
                return Err(CanonicalError::DuplicateIndex(n));
            }
        }
        map.retain(|_, s| !s.is_zero());
        Ok(CoeffRep { p, terms: map })
    }

    pub fn from_i64_terms(
        p: Prime,
        terms: impl IntoIterator<Item = (u32, i64)>,
    ) -> Result<Self, CanonicalError> {
        Self::new(p, terms.into_iter().map(|(n, s)| (n, BigInt::from(s))))
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn terms(&self) -> &BTreeMap<u32, BigInt> {
        &self.terms
    }

    /// Total coefficient weight `Σ |σ_n|`.
    pub fn weight(&self) -> BigUint {
        let mut w = BigUint::zero();
        for s in self.terms.values() {
            w += s.magnitude();
        }
        w
    }

    /// Exact evaluation in `Z(p^∞)`.
    pub fn eval(&self) -> PruferElement {
        let top = match self.terms.keys().next_back() {
            Some(&n) => n,
            None => return PruferElement::zero(self.p),
        };
        // Σ σ_n e_n = (Σ σ_n p^(top-n)) / p^top
        let mut acc = BigInt::zero();
        for (&n, sigma) in &self.terms {
            acc += sigma * BigInt::from(self.p.power(top - n));
        }
        let modulus = BigInt::from(self.p.power(top));
        let num = acc.mod_floor(&modulus).to_biguint().unwrap();
        PruferElement::new(self.p, num, top)
    }
}

/// A representation in canonical form: odd `p`, every `|σ_n| ≤ (p-1)/2`, no
/// zero coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalRep {
    p: Prime,
    terms: BTreeMap<u32, i64>,
}

impl CanonicalRep {
    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn terms(&self) -> &BTreeMap<u32, i64> {
        &self.terms
    }

    /// The support Λ of the canonical form.
    pub fn support(&self) -> BTreeSet<u32> {
        self.terms.keys().copied().collect()
    }

    /// λ, the number of nonzero canonical coefficients.
    pub fn weight_count(&self) -> usize {
        self.terms.len()
    }

    /// Total coefficient weight `Σ |σ_n|`.
    pub fn weight(&self) -> BigUint {
        BigUint::from(self.terms.values().map(|s| s.unsigned_abs()).sum::<u64>())
    }

    pub fn to_coeff_rep(&self) -> CoeffRep {
        CoeffRep {
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(&n, &s)| (n, BigInt::from(s)))
                .collect(),
        }
    }

    pub fn eval(&self) -> PruferElement {
        self.to_coeff_rep().eval()
    }

    /// Largest support index, which determines the order of the element.
    pub fn top_index(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }
}

impl fmt::Display for CanonicalRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&n, &s) in &self.terms {
            if first {
                if s < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if s < 0 { " - " } else { " + " })?;
            }
            first = false;
            let a = s.unsigned_abs();
            if a == 1 {
                write!(f, "e{n}")?;
            } else {
                write!(f, "{a}*e{n}")?;
            }
        }
        Ok(())
    }
}

/// Balanced division: `sigma = q·p + r` with `|r| ≤ (p-1)/2`, unique for odd
/// `p`.
fn balanced_divrem(sigma: &BigInt, p: Prime) -> (BigInt, i64) {
    let pb = BigInt::from(p.get());
    let mut r = sigma.mod_floor(&pb).to_i64().expect("residue fits");
    if r > p.half() as i64 {
        r -= p.get() as i64;
    }
    let q = (sigma - BigInt::from(r)) / pb;
    (q, r)
}

/// Rewrite a representation into canonical form.
///
/// Works from the highest index downward: the balanced residue stays at the
/// current index, the quotient carries to the index below (`p·e_n = e_{n-1}`),
/// and carries reaching index 0 vanish. The total coefficient weight never
/// increases.
pub fn canonicalize(rep: &CoeffRep) -> Result<CanonicalRep, CanonicalError> {
    if !rep.p.is_odd() {
        return Err(CanonicalError::PEqualsTwo);
    }
    let mut work = rep.terms.clone();
    let mut out = BTreeMap::new();
    while let Some((&n, _)) = work.iter().next_back() {
        let sigma = work.remove(&n).unwrap();
        if sigma.is_zero() {
            continue;
        }
        let (q, r) = balanced_divrem(&sigma, rep.p);
        if r != 0 {
            out.insert(n, r);
        }
        if !q.is_zero() && n > 1 {
            let slot = work.entry(n - 1).or_insert_with(BigInt::zero);
            *slot += q;
        }
    }
    Ok(CanonicalRep { p: rep.p, terms: out })
}

/// The canonical support `(Λ(y), λ(y))` of a Prüfer element.
///
/// Expands the numerator in base `p` (a representation with digits as
/// coefficients) and canonicalizes, an `O(exp)` deterministic path.
pub fn canonical_support(y: &PruferElement) -> Result<(BTreeSet<u32>, usize), CanonicalError> {
    Ok(canonical_rep_of(y)?.support_pair())
}

impl CanonicalRep {
    fn support_pair(&self) -> (BTreeSet<u32>, usize) {
        let s = self.support();
        let n = s.len();
        (s, n)
    }
}

/// The unique canonical representation of a Prüfer element.
pub fn canonical_rep_of(y: &PruferElement) -> Result<CanonicalRep, CanonicalError> {
    let p = y.prime();
    if !p.is_odd() {
        return Err(CanonicalError::PEqualsTwo);
    }
    // num/p^exp = Σ digit_j p^j / p^exp = Σ digit_j e_{exp-j}
    let pb = BigUint::from(p.get());
    let mut digits = y.numerator().clone();
    let mut terms = Vec::new();
    let mut j = 0u32;
    while !digits.is_zero() {
        let (q, r) = digits.div_rem(&pb);
        if !r.is_zero() {
            terms.push((y.exponent() - j, BigInt::from(r)));
        }
        digits = q;
        j += 1;
    }
    canonicalize(&CoeffRep::new(p, terms)?)
}
