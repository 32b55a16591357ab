//! Windowed enumeration of signed combination sets.
//!
//! For a sequence `{a_k}` and a weight budget `l`, the combination set over a
//! window `[m, K]` consists of all sums `m_1 a_{k_1} + ⋯ + m_h a_{k_h}` with
//! `m ≤ k_1 < ⋯ < k_h ≤ K`, nonzero integer coefficients, and `Σ|m_i| ≤ l`.
//! The empty combination is excluded, so zero only occurs via cancellation.
//!
//! Results are always labeled with the window: "not in the window" is a
//! statement about indices `≤ K`, never about the full infinite set.

pub mod criteria;

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Element, GroupError};
use crate::sequences::{SequenceError, SequenceHandle};
use crate::verdict::Verdict;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WindowsError {
    #[error("window [{start}, {end}] is empty or starts below 1")]
    InvalidWindow { start: u64, end: u64 },
    #[error("enumeration of {estimated} combinations exceeds the budget of {cap}")]
    BudgetExceeded { estimated: u128, cap: u64 },
    #[error("exponents must be strictly increasing")]
    NotIncreasing,
    #[error("need at least {needed} entries, got {got}")]
    TooFewEntries { needed: u64, got: u64 },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

/// A finite index range `[start, end]`, 1-based and inclusive.
#[derive(Debug, Copy, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub start: u64,
    pub end: u64,
}

impl Window {
    pub fn new(start: u64, end: u64) -> Result<Self, WindowsError> {
        if start == 0 || start > end {
            return Err(WindowsError::InvalidWindow { start, end });
        }
        Ok(Window { start, end })
    }

    pub fn len(&self) -> u64 {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn indices(&self) -> impl Iterator<Item = u64> {
        self.start..=self.end
    }
}

/// Enumeration budget; counts evaluated coefficient/index combinations.
#[derive(Debug, Copy, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_combinations: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_combinations: 10_000_000,
        }
    }
}

/// A checked witness that an element is a windowed combination.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombWitness {
    /// Strictly increasing sequence indices.
    pub indices: Vec<u64>,
    /// Matching nonzero coefficients, `Σ|coeffs| ≤ l`.
    pub coeffs: Vec<i64>,
    /// The evaluated element.
    pub element: Element,
}

impl CombWitness {
    /// Re-evaluate against the sequence and check every structural
    /// constraint for the given weight budget and window.
    pub fn verify(
        &self,
        seq: &SequenceHandle,
        l: u32,
        w: Window,
    ) -> Result<(), WindowsError> {
        let structural = self.indices.len() == self.coeffs.len()
            && !self.indices.is_empty()
            && self.indices.windows(2).all(|v| v[0] < v[1])
            && self.indices.iter().all(|&k| k >= w.start && k <= w.end)
            && self.coeffs.iter().all(|&c| c != 0)
            && self.coeffs.iter().map(|c| c.unsigned_abs()).sum::<u64>() <= u64::from(l);
        if !structural {
            return Err(WindowsError::Group(GroupError::InvalidElement(
                "witness violates the combination constraints".into(),
            )));
        }
        let mut acc = seq.ambient().zero();
        for (&k, &c) in self.indices.iter().zip(&self.coeffs) {
            acc = acc.add(&seq.term(k)?.scalar_mul(&BigInt::from(c)))?;
        }
        if acc != self.element {
            return Err(WindowsError::Group(GroupError::InvalidElement(
                "witness does not evaluate to its element".into(),
            )));
        }
        Ok(())
    }
}

/// Number of signed combinations the window/budget pair generates.
pub fn combination_count(window_len: u64, l: u32) -> u128 {
    let mut total = 0u128;
    for h in 1..=u64::from(l).min(window_len) {
        let idx = binomial(window_len, h);
        let mag = binomial(u64::from(l), h);
        total = total.saturating_add(
            idx.saturating_mul(mag)
                .saturating_mul(1u128 << h.min(127)),
        );
    }
    total
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc.saturating_mul(u128::from(n - i)) / u128::from(i + 1);
    }
    acc
}

/// Magnitude vectors `(c_1..c_h)` with every `c_i ≥ 1` and `Σ c_i ≤ l`, in
/// lexicographic order.
fn magnitude_vectors(h: usize, l: u32) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![1i64; h];
    fn rec(cur: &mut Vec<i64>, pos: usize, remaining: i64, out: &mut Vec<Vec<i64>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        let tail = (cur.len() - pos - 1) as i64;
        for c in 1..=(remaining - tail) {
            cur[pos] = c;
            rec(cur, pos + 1, remaining - c, out);
        }
    }
    rec(&mut cur, 0, i64::from(l), &mut out);
    out
}

/// Drive `visit` over every windowed combination in deterministic order:
/// combination size ascending, index tuples lexicographic, magnitudes
/// lexicographic, then sign patterns.
fn for_each_combination(
    seq: &SequenceHandle,
    l: u32,
    w: Window,
    budget: &Budget,
    mut visit: impl FnMut(&[u64], &[i64], &Element) -> ControlFlow<()>,
) -> Result<bool, WindowsError> {
    let estimated = combination_count(w.len(), l);
    if estimated > u128::from(budget.max_combinations) {
        return Err(WindowsError::BudgetExceeded {
            estimated,
            cap: budget.max_combinations,
        });
    }
    let terms: Vec<(u64, Element)> = w
        .indices()
        .map(|k| Ok((k, seq.term(k)?)))
        .collect::<Result<_, WindowsError>>()?;
    let count = terms.len();

    for h in 1..=(l as usize).min(count) {
        let mags = magnitude_vectors(h, l);
        // lexicographic h-subsets of the window positions
        let mut pick: Vec<usize> = (0..h).collect();
        loop {
            let indices: Vec<u64> = pick.iter().map(|&i| terms[i].0).collect();
            for mag in &mags {
                for signs in 0..(1u32 << h) {
                    let coeffs: Vec<i64> = mag
                        .iter()
                        .enumerate()
                        .map(|(i, &c)| if signs >> i & 1 == 1 { -c } else { c })
                        .collect();
                    let mut acc = seq.ambient().zero();
                    for (&pos, &c) in pick.iter().zip(&coeffs) {
                        acc = acc.add(&terms[pos].1.scalar_mul(&BigInt::from(c)))?;
                    }
                    if let ControlFlow::Break(()) = visit(&indices, &coeffs, &acc) {
                        return Ok(true);
                    }
                }
            }
            if !next_combination(&mut pick, count) {
                break;
            }
        }
    }
    Ok(false)
}

/// Lexicographic successor of an h-subset of `{0..n}`; false when exhausted.
fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let h = pick.len();
    let mut i = h;
    while i > 0 {
        i -= 1;
        if pick[i] < i + n - h {
            pick[i] += 1;
            for j in i + 1..h {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// All distinct elements of the windowed combination set, each with the
/// first witness found in enumeration order.
pub fn enumerate_window(
    seq: &SequenceHandle,
    l: u32,
    w: Window,
    budget: &Budget,
) -> Result<BTreeMap<Element, CombWitness>, WindowsError> {
    let mut out: BTreeMap<Element, CombWitness> = BTreeMap::new();
    for_each_combination(seq, l, w, budget, |indices, coeffs, elem| {
        out.entry(elem.clone()).or_insert_with(|| CombWitness {
            indices: indices.to_vec(),
            coeffs: coeffs.to_vec(),
            element: elem.clone(),
        });
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Outcome of a windowed membership query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "membership", rename_all = "snake_case")]
pub enum Membership {
    Member { witness: CombWitness },
    /// Silent about indices beyond the window.
    NotInWindow,
}

/// Decide whether `g` is a combination within the window.
pub fn membership(
    g: &Element,
    seq: &SequenceHandle,
    l: u32,
    w: Window,
    budget: &Budget,
) -> Result<Membership, WindowsError> {
    let mut found = None;
    for_each_combination(seq, l, w, budget, |indices, coeffs, elem| {
        if elem == g {
            found = Some(CombWitness {
                indices: indices.to_vec(),
                coeffs: coeffs.to_vec(),
                element: elem.clone(),
            });
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(match found {
        Some(witness) => Membership::Member { witness },
        None => Membership::NotInWindow,
    })
}

/// Membership witnesses found at every tested start index: the refutation
/// certificate for an escape scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipFamily {
    pub weight_budget: u32,
    pub window_width: u64,
    pub members: Vec<(u64, CombWitness)>,
}

/// What was observed when `g` escaped at least one window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscapeEnvelope {
    pub weight_budget: u32,
    pub window_width: u64,
    pub escaped_at: Vec<u64>,
    pub members_at: Vec<(u64, CombWitness)>,
}

pub type ScanVerdict = Verdict<(), EscapeEnvelope, MembershipFamily>;

/// Scan the windows `[m, m+width]` for `m` in the given range: does `g` stay
/// inside the combination sets, or does it escape?
///
/// `Refuted` means membership persisted at every tested start (a refutation
/// candidate for the escape property, certified by the witness family).
/// `Evidence` means `g` escaped at least one tested window. The full sets are
/// infinite, so `Proven` is never returned.
pub fn escape_scan(
    g: &Element,
    seq: &SequenceHandle,
    l: u32,
    m_range: (u64, u64),
    width: u64,
    budget: &Budget,
) -> Result<ScanVerdict, WindowsError> {
    if g.is_zero() {
        return Err(WindowsError::Group(GroupError::InvalidElement(
            "escape scans are about nonzero elements".into(),
        )));
    }
    let (lo, hi) = m_range;
    if lo == 0 || lo > hi {
        return Err(WindowsError::InvalidWindow { start: lo, end: hi });
    }
    let mut members = Vec::new();
    let mut escaped = Vec::new();
    for m in lo..=hi {
        let w = Window::new(m, m + width)?;
        match membership(g, seq, l, w, budget)? {
            Membership::Member { witness } => members.push((m, witness)),
            Membership::NotInWindow => escaped.push(m),
        }
    }
    if escaped.is_empty() {
        Ok(Verdict::Refuted {
            witness: MembershipFamily {
                weight_budget: l,
                window_width: width,
                members,
            },
        })
    } else {
        Ok(Verdict::Evidence {
            horizon: hi,
            envelope: EscapeEnvelope {
                weight_budget: l,
                window_width: width,
                escaped_at: escaped,
                members_at: members,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::prime::Prime;
    use crate::group::prufer::PruferElement;
    use crate::sequences::{embedding_sequence, shifted_unit_sequence};
    use std::collections::BTreeSet;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn frac(s: &str) -> Element {
        Element::Prufer(PruferElement::from_fraction_str(p3(), s).unwrap())
    }

    fn elements(map: &BTreeMap<Element, CombWitness>) -> BTreeSet<String> {
        map.keys()
            .map(|e| match e {
                Element::Prufer(a) => a.to_string(),
                Element::Sum(a) => a.to_string(),
            })
            .collect()
    }

    #[test]
    fn enumeration_examples() {
        let e = embedding_sequence(p3());
        let b = Budget::default();

        let set = enumerate_window(&e, 1, Window::new(2, 3).unwrap(), &b).unwrap();
        assert_eq!(
            elements(&set),
            ["1/9", "8/9", "1/27", "26/27"].map(String::from).into()
        );

        let set = enumerate_window(&e, 3, Window::new(1, 1).unwrap(), &b).unwrap();
        assert_eq!(elements(&set), ["1/3", "2/3", "0/1"].map(String::from).into());

        let a = shifted_unit_sequence(p3());
        let set = enumerate_window(&a, 2, Window::new(2, 2).unwrap(), &b).unwrap();
        assert_eq!(
            elements(&set),
            ["7/9", "2/9", "5/9", "4/9"].map(String::from).into()
        );
    }

    #[test]
    fn every_emitted_witness_verifies() {
        let a = shifted_unit_sequence(p3());
        let w = Window::new(2, 5).unwrap();
        let set = enumerate_window(&a, 3, w, &Budget::default()).unwrap();
        for (elem, wit) in &set {
            assert_eq!(&wit.element, elem);
            wit.verify(&a, 3, w).unwrap();
        }
    }

    #[test]
    fn membership_examples() {
        let b = Budget::default();
        let a = shifted_unit_sequence(p3());
        let m = membership(&frac("1/3"), &a, 4, Window::new(3, 4).unwrap(), &b).unwrap();
        match m {
            Membership::Member { witness } => {
                witness.verify(&a, 4, Window::new(3, 4).unwrap()).unwrap();
                assert_eq!(witness.element, frac("1/3"));
            }
            Membership::NotInWindow => panic!("expected a member"),
        }

        let e = embedding_sequence(p3());
        assert_eq!(
            membership(&frac("1/3"), &e, 1, Window::new(2, 5).unwrap(), &b).unwrap(),
            Membership::NotInWindow
        );

        let zero = frac("0/1");
        match membership(&zero, &e, 3, Window::new(1, 1).unwrap(), &b).unwrap() {
            Membership::Member { witness } => {
                assert_eq!(witness.coeffs.iter().map(|c| c.abs()).sum::<i64>(), 3)
            }
            Membership::NotInWindow => panic!("zero arises as 3·e_1"),
        }
    }

    #[test]
    fn escape_scan_examples() {
        let b = Budget::default();
        let a = shifted_unit_sequence(p3());
        let v = escape_scan(&frac("1/3"), &a, 4, (1, 10), 2, &b).unwrap();
        match v {
            Verdict::Refuted { witness } => {
                assert_eq!(witness.members.len(), 10);
                for (m, wit) in &witness.members {
                    wit.verify(&a, 4, Window::new(*m, m + 2).unwrap()).unwrap();
                }
            }
            _ => panic!("membership persists for the shifted unit sequence"),
        }

        let e = embedding_sequence(p3());
        for g in ["1/3", "2/3"] {
            let v = escape_scan(&frac(g), &e, 1, (2, 6), 3, &b).unwrap();
            match v {
                Verdict::Evidence { envelope, .. } => {
                    assert_eq!(envelope.escaped_at, vec![2, 3, 4, 5, 6])
                }
                _ => panic!("{g} escapes every window of the unit sequence"),
            }
        }
    }

    #[test]
    fn escape_scan_rejects_zero() {
        let e = embedding_sequence(p3());
        assert!(escape_scan(&frac("0/1"), &e, 1, (1, 3), 2, &Budget::default()).is_err());
    }

    #[test]
    fn window_monotonicity() {
        let e = embedding_sequence(p3());
        let b = Budget::default();
        let big = enumerate_window(&e, 2, Window::new(2, 6).unwrap(), &b).unwrap();
        let late = enumerate_window(&e, 2, Window::new(4, 6).unwrap(), &b).unwrap();
        for k in late.keys() {
            assert!(big.contains_key(k));
        }
        let heavier = enumerate_window(&e, 3, Window::new(2, 6).unwrap(), &b).unwrap();
        for k in big.keys() {
            assert!(heavier.contains_key(k));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let e = embedding_sequence(p3());
        let tiny = Budget { max_combinations: 5 };
        assert!(matches!(
            enumerate_window(&e, 3, Window::new(1, 10).unwrap(), &tiny),
            Err(WindowsError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn nonzero_elements_escape_late_windows_of_the_unit_sequence() {
        // For weight budgets below p, any nonzero g with exponent below the
        // window start stays out: canonical supports of window combinations
        // sit too high. At l = p this fails (p·e_{m} = e_{m-1}).
        let e = embedding_sequence(p3());
        let b = Budget::default();
        for exp in 1..=3u32 {
            for num in 1..3u64.pow(exp) {
                if num % 3 == 0 {
                    continue;
                }
                let g = Element::Prufer(PruferElement::new(p3(), num, exp));
                for l in 1..3u32 {
                    for m in (exp as u64 + 1)..=(exp as u64 + 3) {
                        let w = Window::new(m, m + 4).unwrap();
                        assert_eq!(
                            membership(&g, &e, l, w, &b).unwrap(),
                            Membership::NotInWindow,
                            "g={g:?} l={l} m={m}"
                        );
                    }
                }
            }
        }
        // boundary: weight p reaches back one index
        let g = frac("1/3");
        match membership(&g, &e, 3, Window::new(2, 4).unwrap(), &b).unwrap() {
            Membership::Member { witness } => {
                assert_eq!((witness.indices.as_slice(), witness.coeffs.as_slice()), (&[2u64][..], &[3i64][..]));
            }
            _ => panic!("3·e_2 = e_1"),
        }
    }
}
