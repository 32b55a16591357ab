//! Checkers for the sufficient order-based convergence conditions: ratio
//! divergence along a prefix, windowed tuple infima, torsion-window
//! separation, coprimality/divisibility reports, and exponent-gap envelopes.
//!
//! Every result is finite-horizon and labeled as such; a bounded envelope is
//! a refutation candidate, never a refutation of the limit statement.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{combination_count, enumerate_window, Budget, CombWitness, Window, WindowsError};
use crate::factored::Factored;
use crate::group::subgroup::{order_mod_subgroup, torsion_subgroup, SubgroupTable};
use crate::group::Element;
use crate::sequences::SequenceHandle;
use crate::verdict::Verdict;

/// The factored orders `o(a_k)` along a prefix of the sequence.
pub fn sequence_orders(
    seq: &SequenceHandle,
    upto: u64,
) -> Result<Vec<Factored>, WindowsError> {
    (1..=upto)
        .map(|k| Ok(seq.term(k)?.order_factored()))
        .collect()
}

/// The ratio sequence `t_k / gcd(t_k, lcm(t_1, …, t_{k-1}))`, whose
/// divergence is the simplest sufficient condition.
pub fn order_ratios(orders: &[Factored]) -> Vec<BigUint> {
    let mut running_lcm = Factored::one();
    let mut out = Vec::with_capacity(orders.len());
    for t in orders {
        out.push(t.quotient_by_gcd(&running_lcm).value());
        running_lcm = running_lcm.lcm(t);
    }
    out
}

fn check_window_against(len: u64, w: Window) -> Result<(), WindowsError> {
    if w.end > len {
        return Err(WindowsError::TooFewEntries {
            needed: w.end,
            got: len,
        });
    }
    Ok(())
}

fn windowed_tuples(w: Window, l: u32) -> Vec<Vec<u64>> {
    let idx: Vec<u64> = w.indices().collect();
    let mut out = Vec::new();
    let h = l as usize;
    if h == 0 || h > idx.len() {
        return out;
    }
    let mut pick: Vec<usize> = (0..h).collect();
    loop {
        out.push(pick.iter().map(|&i| idx[i]).collect());
        if !super::next_combination(&mut pick, idx.len()) {
            break;
        }
    }
    out
}

/// Exact infimum over windowed `l`-tuples of the maximal order ratio
/// `t_{k_i} / gcd(t_{k_i}, lcm(of the others))`.
pub fn tuple_ratio_infimum(
    orders: &[Factored],
    l: u32,
    w: Window,
    budget: &Budget,
) -> Result<BigUint, WindowsError> {
    check_window_against(orders.len() as u64, w)?;
    if l == 0 || u64::from(l) > w.len() {
        return Err(WindowsError::TooFewEntries {
            needed: u64::from(l),
            got: w.len(),
        });
    }
    if combination_count(w.len(), l) > u128::from(budget.max_combinations) {
        return Err(WindowsError::BudgetExceeded {
            estimated: combination_count(w.len(), l),
            cap: budget.max_combinations,
        });
    }
    let mut best: Option<Factored> = None;
    for tuple in windowed_tuples(w, l) {
        let mut tuple_max: Option<Factored> = None;
        for (i, &ki) in tuple.iter().enumerate() {
            let mut lcm_others = Factored::one();
            for (j, &kj) in tuple.iter().enumerate() {
                if i != j {
                    lcm_others = lcm_others.lcm(&orders[(kj - 1) as usize]);
                }
            }
            let ratio = orders[(ki - 1) as usize].quotient_by_gcd(&lcm_others);
            if tuple_max
                .as_ref()
                .map_or(true, |m| ratio.value_cmp(m).is_gt())
            {
                tuple_max = Some(ratio);
            }
        }
        let tuple_max = tuple_max.expect("l ≥ 1");
        if best
            .as_ref()
            .map_or(true, |b| tuple_max.value_cmp(b).is_lt())
        {
            best = Some(tuple_max);
        }
    }
    Ok(best.expect("window admits at least one tuple").value())
}

/// Exact infimum over windowed `l`-tuples of the maximal quotient order
/// `o(a_{k_i} + ⟨the other tuple terms⟩)`.
pub fn quotient_order_infimum(
    seq: &SequenceHandle,
    l: u32,
    w: Window,
    subgroup_cap: u64,
    budget: &Budget,
) -> Result<BigUint, WindowsError> {
    if l == 0 || u64::from(l) > w.len() {
        return Err(WindowsError::TooFewEntries {
            needed: u64::from(l),
            got: w.len(),
        });
    }
    if combination_count(w.len(), l) > u128::from(budget.max_combinations) {
        return Err(WindowsError::BudgetExceeded {
            estimated: combination_count(w.len(), l),
            cap: budget.max_combinations,
        });
    }
    let ambient = seq.ambient().clone();
    let mut best: Option<BigUint> = None;
    for tuple in windowed_tuples(w, l) {
        let terms: Vec<Element> = tuple
            .iter()
            .map(|&k| seq.term(k))
            .collect::<Result<_, _>>()?;
        let mut tuple_max: Option<BigUint> = None;
        for i in 0..terms.len() {
            let others: Vec<Element> = terms
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, t)| t.clone())
                .collect();
            let h = SubgroupTable::generate(ambient.clone(), others, subgroup_cap)?;
            let q = order_mod_subgroup(&terms[i], &h)?;
            if tuple_max.as_ref().map_or(true, |m| q > *m) {
                tuple_max = Some(q);
            }
        }
        let tuple_max = tuple_max.expect("l ≥ 1");
        if best.as_ref().map_or(true, |b| tuple_max < *b) {
            best = Some(tuple_max);
        }
    }
    Ok(best.expect("window admits at least one tuple"))
}

/// Does any nonzero n-torsion element appear among the windowed combinations?
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum TorsionWindowOutcome {
    Holds,
    Violation {
        element: Element,
        witness: CombWitness,
    },
}

pub fn torsion_window_check(
    seq: &SequenceHandle,
    l: u32,
    n: u64,
    w: Window,
    ds_depth: Option<u64>,
    torsion_cap: u64,
    budget: &Budget,
) -> Result<TorsionWindowOutcome, WindowsError> {
    let torsion = torsion_subgroup(seq.ambient(), n, ds_depth, torsion_cap)?;
    let combos = enumerate_window(seq, l, w, budget)?;
    for (elem, witness) in combos {
        if !elem.is_zero() && torsion.contains(&elem) {
            return Ok(TorsionWindowOutcome::Violation {
                element: elem,
                witness,
            });
        }
    }
    Ok(TorsionWindowOutcome::Holds)
}

/// Certificate that every pair of listed orders is coprime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoprimeCertificate {
    /// 1-based index pairs, each verified to have gcd 1.
    pub pairs: Vec<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoprimeFailure {
    pub i: u64,
    pub j: u64,
    pub gcd: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioEnvelope {
    /// Consecutive ratios `t_{k+1} / t_k`, as decimal strings.
    pub ratios: Vec<String>,
    /// Set when one bound on the ratios keeps recurring through the whole
    /// prefix, which rules out divergence up to this horizon.
    pub persistent_bound: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityFailure {
    pub index: u64,
    pub order: String,
    pub next_order: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoprimeDivReport {
    /// Pairwise coprimality of the given prefix, proven or refuted outright.
    pub coprime: Verdict<CoprimeCertificate, (), CoprimeFailure>,
    /// Divisibility chain `t_k | t_{k+1}` with the growth envelope of the
    /// consecutive ratios; divergence itself stays evidence-only.
    pub divisibility: Verdict<(), RatioEnvelope, DivisibilityFailure>,
}

/// Tail minima of `vals` at quarter checkpoints, plus the bound when the
/// same minimum recurs through every quarter.
fn quarter_tail_minima<T: Ord + Clone>(vals: &[T]) -> (Vec<(u64, T)>, Option<T>) {
    let len = vals.len();
    let mut starts: Vec<usize> = [0, len / 4, len / 2, 3 * len / 4]
        .into_iter()
        .filter(|&s| s < len)
        .collect();
    starts.dedup();
    let minima: Vec<(u64, T)> = starts
        .iter()
        .map(|&s| {
            let min = vals[s..].iter().min().expect("nonempty tail").clone();
            (s as u64 + 1, min)
        })
        .collect();
    let persistent = match minima.split_first() {
        Some(((_, first), rest)) if !rest.is_empty() && rest.iter().all(|(_, m)| m == first) => {
            Some(first.clone())
        }
        _ => None,
    };
    (minima, persistent)
}

pub fn coprime_divisibility_report(orders: &[Factored]) -> CoprimeDivReport {
    let mut pairs = Vec::new();
    let mut coprime = None;
    'outer: for i in 0..orders.len() {
        for j in i + 1..orders.len() {
            let g = orders[i].gcd(&orders[j]);
            if g.is_one() {
                pairs.push((i as u64 + 1, j as u64 + 1));
            } else {
                coprime = Some(Verdict::Refuted {
                    witness: CoprimeFailure {
                        i: i as u64 + 1,
                        j: j as u64 + 1,
                        gcd: g.value().to_string(),
                    },
                });
                break 'outer;
            }
        }
    }
    let coprime = coprime.unwrap_or(Verdict::Proven {
        certificate: CoprimeCertificate { pairs },
    });

    let mut divisibility = None;
    let mut ratios: Vec<BigUint> = Vec::new();
    for k in 0..orders.len().saturating_sub(1) {
        if !orders[k].divides(&orders[k + 1]) {
            divisibility = Some(Verdict::Refuted {
                witness: DivisibilityFailure {
                    index: k as u64 + 1,
                    order: orders[k].value().to_string(),
                    next_order: orders[k + 1].value().to_string(),
                },
            });
            break;
        }
        ratios.push(orders[k + 1].quotient_by_gcd(&orders[k]).value());
    }
    let divisibility = divisibility.unwrap_or_else(|| {
        let (_, persistent) = quarter_tail_minima(&ratios);
        Verdict::Evidence {
            horizon: orders.len() as u64,
            envelope: RatioEnvelope {
                ratios: ratios.iter().map(|r| r.to_string()).collect(),
                persistent_bound: persistent.map(|b| b.to_string()),
            },
        }
    });

    CoprimeDivReport {
        coprime,
        divisibility,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapEnvelope {
    /// `(start index, min of gaps from there on)` at quarter checkpoints.
    pub tail_minima: Vec<(u64, u64)>,
    /// A gap bound that recurs through the whole horizon; for shifted
    /// sequences this is a refutation candidate.
    pub persistent_bound: Option<u64>,
}

pub type GapVerdict = Verdict<(), GapEnvelope, ()>;

/// Envelope of the differences `n_{k+1} - n_k` of a strictly increasing
/// exponent sequence. Always evidence: finite data cannot settle divergence.
pub fn gap_report(exponents: &[u64]) -> Result<GapVerdict, WindowsError> {
    if exponents.len() < 2 {
        return Err(WindowsError::TooFewEntries {
            needed: 2,
            got: exponents.len() as u64,
        });
    }
    if exponents.windows(2).any(|w| w[0] >= w[1]) {
        return Err(WindowsError::NotIncreasing);
    }
    let gaps: Vec<u64> = exponents.windows(2).map(|w| w[1] - w[0]).collect();
    let (tail_minima, persistent_bound) = quarter_tail_minima(&gaps);
    Ok(Verdict::Evidence {
        horizon: exponents.len() as u64,
        envelope: GapEnvelope {
            tail_minima,
            persistent_bound,
        },
    })
}
