//! Tail-supremum reports: the finite-horizon rendering of `χ(a_k) → 0`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{CharError, TruncatedPAdic};
use crate::group::circle::ratio_serde;
use crate::group::prime::Prime;
use crate::group::{Ambient, Element};
use crate::sequences::SequenceHandle;
use crate::verdict::Verdict;

/// `sup_{start ≤ k ≤ horizon} ‖χ(a_k)‖`, with the earliest index attaining
/// it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointSup {
    pub start: u64,
    #[serde(with = "ratio_serde")]
    pub sup: BigRational,
    pub argmax: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailEnvelope {
    pub final_start: u64,
    #[serde(with = "ratio_serde")]
    pub final_sup: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivergenceWitness {
    /// A late index whose value stays at or above the bound.
    pub index: u64,
    #[serde(with = "ratio_serde")]
    pub value: BigRational,
}

pub type ReportVerdict = Verdict<(), TailEnvelope, DivergenceWitness>;

/// Exact tail suprema of `‖χ(a_k)‖` at each checkpoint, and the verdict at
/// the declared tolerance: evidence of tending to zero when the final tail
/// supremum drops to the tolerance, refuted (at this horizon) when a bound
/// at least the tolerance persists through every checkpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub horizon: u64,
    #[serde(with = "ratio_serde")]
    pub tolerance: BigRational,
    pub checkpoints: Vec<CheckpointSup>,
    pub verdict: ReportVerdict,
}

impl ConvergenceReport {
    pub fn tends_to_zero(&self) -> bool {
        self.verdict.is_evidence()
    }

    pub fn final_sup(&self) -> &BigRational {
        &self.checkpoints.last().expect("at least one checkpoint").sup
    }
}

fn validate_checkpoints(checkpoints: &[u64], horizon: u64) -> Result<(), CharError> {
    if horizon == 0 {
        return Err(CharError::InvalidInput("horizon must be positive".into()));
    }
    if checkpoints.is_empty()
        || checkpoints.windows(2).any(|w| w[0] >= w[1])
        || checkpoints[0] == 0
        || *checkpoints.last().unwrap() > horizon
    {
        return Err(CharError::InvalidInput(
            "checkpoints must be strictly increasing within [1, horizon]".into(),
        ));
    }
    Ok(())
}

/// Evenly spaced default checkpoints: start, quarters, and the last quarter
/// as the decisive tail.
pub fn default_checkpoints(horizon: u64) -> Vec<u64> {
    let set: BTreeSet<u64> = [1, horizon / 4 + 1, horizon / 2 + 1, 3 * horizon / 4 + 1]
        .into_iter()
        .filter(|&s| s <= horizon)
        .collect();
    set.into_iter().collect()
}

/// Assemble a report from the 1-based norm list.
pub(crate) fn tail_report(
    norms: &[BigRational],
    checkpoints: &[u64],
    tol: &BigRational,
) -> Result<ConvergenceReport, CharError> {
    let horizon = norms.len() as u64;
    validate_checkpoints(checkpoints, horizon)?;
    // suffix maxima, preferring the earliest attaining index
    let mut suffix: Vec<(BigRational, u64)> = vec![(BigRational::one(), 0); norms.len()];
    let mut best = norms[norms.len() - 1].clone();
    let mut arg = horizon;
    for i in (0..norms.len()).rev() {
        if norms[i] >= best {
            best = norms[i].clone();
            arg = i as u64 + 1;
        }
        suffix[i] = (best.clone(), arg);
    }
    let cps: Vec<CheckpointSup> = checkpoints
        .iter()
        .map(|&start| {
            let (sup, argmax) = suffix[(start - 1) as usize].clone();
            CheckpointSup { start, sup, argmax }
        })
        .collect();
    let last = cps.last().unwrap();
    let verdict = if last.sup <= *tol {
        Verdict::Evidence {
            horizon,
            envelope: TailEnvelope {
                final_start: last.start,
                final_sup: last.sup.clone(),
            },
        }
    } else {
        Verdict::Refuted {
            witness: DivergenceWitness {
                index: last.argmax,
                value: last.sup.clone(),
            },
        }
    };
    Ok(ConvergenceReport {
        horizon,
        tolerance: tol.clone(),
        checkpoints: cps,
        verdict,
    })
}

/// Same assembly over small exact fractions `(num, den)` with `num < den`,
/// promoting to big rationals only at the checkpoints.
pub(crate) fn tail_report_frac(
    norms: &[(u64, u64)],
    checkpoints: &[u64],
    tol: &BigRational,
) -> Result<ConvergenceReport, CharError> {
    let horizon = norms.len() as u64;
    validate_checkpoints(checkpoints, horizon)?;
    let ge = |a: (u64, u64), b: (u64, u64)| -> bool {
        u128::from(a.0) * u128::from(b.1) >= u128::from(b.0) * u128::from(a.1)
    };
    let mut suffix: Vec<((u64, u64), u64)> = vec![((0, 1), 0); norms.len()];
    let mut best = norms[norms.len() - 1];
    let mut arg = horizon;
    for i in (0..norms.len()).rev() {
        if ge(norms[i], best) {
            best = norms[i];
            arg = i as u64 + 1;
        }
        suffix[i] = (best, arg);
    }
    let to_big = |(n, d): (u64, u64)| BigRational::new(BigInt::from(n), BigInt::from(d));
    let cps: Vec<CheckpointSup> = checkpoints
        .iter()
        .map(|&start| {
            let ((n, d), argmax) = suffix[(start - 1) as usize];
            CheckpointSup {
                start,
                sup: to_big((n, d)),
                argmax,
            }
        })
        .collect();
    let last = cps.last().unwrap();
    let verdict = if last.sup <= *tol {
        Verdict::Evidence {
            horizon,
            envelope: TailEnvelope {
                final_start: last.start,
                final_sup: last.sup.clone(),
            },
        }
    } else {
        Verdict::Refuted {
            witness: DivergenceWitness {
                index: last.argmax,
                value: last.sup.clone(),
            },
        }
    };
    Ok(ConvergenceReport {
        horizon,
        tolerance: tol.clone(),
        checkpoints: cps,
        verdict,
    })
}

/// Exact tail report of `‖χ(a_k)‖` over a Prüfer-valued sequence.
pub fn continuity_report(
    chi: &TruncatedPAdic,
    seq: &SequenceHandle,
    horizon: u64,
    checkpoints: &[u64],
    tol: &BigRational,
) -> Result<ConvergenceReport, CharError> {
    let mut norms = Vec::with_capacity(horizon as usize);
    for k in 1..=horizon {
        let term = seq.term(k)?;
        let y = match &term {
            Element::Prufer(y) => y,
            Element::Sum(_) => return Err(CharError::ContextMismatch),
        };
        norms.push(chi.eval(y)?.norm());
    }
    tail_report(&norms, checkpoints, tol)
}

/// Classification of the scaled embeddings `m·χ_1` for `m mod p^mod_exp`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingClassification {
    pub modulus: u64,
    /// Residues whose report tends to zero at the tolerance.
    pub continuous: BTreeSet<u64>,
    pub reports: BTreeMap<u64, ConvergenceReport>,
    /// True when the sequence contains a tail of `{e_n}`, in which case the
    /// scaled embeddings exhaust the continuous characters and the result is
    /// a complete classification; otherwise it only covers this family.
    pub family_complete: bool,
}

pub fn classify_embedding_multiples(
    seq: &SequenceHandle,
    mod_exp: u32,
    horizon: u64,
    truncation: usize,
    checkpoints: &[u64],
    tol: &BigRational,
) -> Result<EmbeddingClassification, CharError> {
    let p = match seq.ambient() {
        Ambient::Prufer(p) => *p,
        Ambient::Sum(_) => return Err(CharError::ContextMismatch),
    };
    let modulus = p
        .get()
        .checked_pow(mod_exp)
        .ok_or_else(|| CharError::InvalidInput("modulus exponent too large".into()))?;
    let mut continuous = BTreeSet::new();
    let mut reports = BTreeMap::new();
    for m in 0..modulus {
        let chi = TruncatedPAdic::from_uint(p, &m.into(), truncation)?;
        let report = continuity_report(&chi, seq, horizon, checkpoints, tol)?;
        if report.tends_to_zero() {
            continuous.insert(m);
        }
        reports.insert(m, report);
    }
    Ok(EmbeddingClassification {
        modulus,
        continuous,
        reports,
        family_complete: seq.contains_embedding_tail(),
    })
}

pub(crate) fn prime_power_tolerance(p: Prime, exp: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(p.power(exp)))
}

/// The default tolerance schedule `p^{-j}` for `j ≤ 8`.
pub fn tolerance_schedule(p: Prime, max_exp: u32) -> Vec<BigRational> {
    (1..=max_exp.min(8)).map(|j| prime_power_tolerance(p, j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{block_sum_interleaved, embedding_sequence};
    use num_traits::Zero;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    #[test]
    fn embedding_sups() {
        let e = embedding_sequence(p3());
        let chi = TruncatedPAdic::from_uint(p3(), &1u64.into(), 12).unwrap();
        let tol = prime_power_tolerance(p3(), 6);
        let r = continuity_report(&chi, &e, 10, &[2, 4, 6], &tol).unwrap();
        let sups: Vec<String> = r.checkpoints.iter().map(|c| c.sup.to_string()).collect();
        assert_eq!(sups, vec!["1/9", "1/81", "1/729"]);
        assert!(r.tends_to_zero());
        // suprema never increase along checkpoints
        for w in r.checkpoints.windows(2) {
            assert!(w[0].sup >= w[1].sup);
        }
    }

    #[test]
    fn interleaved_block_sums_separate_multiples() {
        let x = crate::group::prufer::PruferElement::unit(p3(), 1);
        let d = block_sum_interleaved(p3(), x).unwrap();
        let tol = prime_power_tolerance(p3(), 2);
        let cps = default_checkpoints(12);
        // the identity embedding sees -x in the block tail
        let chi1 = TruncatedPAdic::from_uint(p3(), &1u64.into(), 250).unwrap();
        let r = continuity_report(&chi1, &d, 12, &cps, &tol).unwrap();
        assert!(r.verdict.is_refuted());
        match &r.verdict {
            Verdict::Refuted { witness } => {
                assert!(witness.value >= BigRational::new(1.into(), 4.into()))
            }
            _ => unreachable!(),
        }
        // three times the embedding kills x
        let chi3 = TruncatedPAdic::from_uint(p3(), &3u64.into(), 250).unwrap();
        let r = continuity_report(&chi3, &d, 12, &cps, &tol).unwrap();
        assert!(r.tends_to_zero());
    }

    #[test]
    fn classify_over_the_plain_embedding_sequence() {
        let e = embedding_sequence(p3());
        let tol = prime_power_tolerance(p3(), 2);
        let cps = default_checkpoints(12);
        let c = classify_embedding_multiples(&e, 3, 12, 40, &cps, &tol).unwrap();
        assert_eq!(c.modulus, 27);
        assert_eq!(c.continuous.len(), 27); // every multiple tends to zero
        assert!(c.family_complete);
    }

    #[test]
    fn frac_and_big_reports_agree() {
        let norms_small: Vec<(u64, u64)> = vec![(1, 3), (1, 9), (2, 9), (1, 27), (1, 81)];
        let norms_big: Vec<BigRational> = norms_small
            .iter()
            .map(|&(n, d)| BigRational::new(n.into(), d.into()))
            .collect();
        let tol = BigRational::new(1.into(), 9.into());
        let a = tail_report(&norms_big, &[1, 3, 5], &tol).unwrap();
        let b = tail_report_frac(&norms_small, &[1, 3, 5], &tol).unwrap();
        assert_eq!(a, b);
        assert!(!a.final_sup().is_zero());
    }

    #[test]
    fn checkpoint_validation() {
        let norms = vec![BigRational::zero(); 5];
        let tol = BigRational::new(1.into(), 9.into());
        assert!(tail_report(&norms, &[], &tol).is_err());
        assert!(tail_report(&norms, &[0, 2], &tol).is_err());
        assert!(tail_report(&norms, &[2, 2], &tol).is_err());
        assert!(tail_report(&norms, &[2, 9], &tol).is_err());
    }
}
