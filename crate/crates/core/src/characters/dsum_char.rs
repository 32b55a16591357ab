//! Finitely supported characters of a direct sum `⊕ C_i`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::report::{tail_report, tail_report_frac, ConvergenceReport};
use super::CharError;
use crate::group::circle::CircleRational;
use crate::group::dsum::{DirectSumContext, DirectSumElement};
use crate::group::Element;
use crate::sequences::SequenceHandle;

/// A character `Σ α_i g_i ↦ Σ c_i α_i / n_i mod 1` with finite support.
///
/// Finite support is a type invariant: characters hitting infinitely many
/// summands are not representable here.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Wire", into = "Wire")]
pub struct DsCharacter {
    ctx: Arc<DirectSumContext>,
    targets: BTreeMap<u64, u64>,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    orders: crate::group::dsum::OrdersRule,
    targets: BTreeMap<u64, u64>,
}

impl TryFrom<Wire> for DsCharacter {
    type Error = CharError;
    fn try_from(w: Wire) -> Result<Self, CharError> {
        let ctx = DirectSumContext::new(w.orders).map_err(CharError::Group)?;
        DsCharacter::new(ctx, w.targets)
    }
}

impl From<DsCharacter> for Wire {
    fn from(c: DsCharacter) -> Wire {
        Wire {
            orders: c.ctx.rule().clone(),
            targets: c.targets,
        }
    }
}

impl DsCharacter {
    pub fn new(
        ctx: Arc<DirectSumContext>,
        targets: impl IntoIterator<Item = (u64, u64)>,
    ) -> Result<Self, CharError> {
        let mut map = BTreeMap::new();
        for (i, c) in targets {
            let n = ctx.order_of(i).map_err(CharError::Group)?;
            let c = c % n;
            if c != 0 {
                map.insert(i, c);
            }
        }
        Ok(DsCharacter { ctx, targets: map })
    }

    /// The coordinate character `χ_j`: `Σ α_i g_i ↦ α_j / n_j`.
    pub fn unit(ctx: Arc<DirectSumContext>, j: u64) -> Result<Self, CharError> {
        Self::new(ctx, [(j, 1)])
    }

    pub fn context(&self) -> &Arc<DirectSumContext> {
        &self.ctx
    }

    pub fn targets(&self) -> &BTreeMap<u64, u64> {
        &self.targets
    }

    pub fn support_max(&self) -> Option<u64> {
        self.targets.keys().next_back().copied()
    }

    pub fn is_single_coordinate(&self) -> bool {
        self.targets.len() <= 1
    }

    fn check_ctx(&self, y: &DirectSumElement) -> Result<(), CharError> {
        if self.ctx != *y.context() {
            return Err(CharError::ContextMismatch);
        }
        Ok(())
    }

    /// Exact value in the circle.
    pub fn eval(&self, y: &DirectSumElement) -> Result<CircleRational, CharError> {
        self.check_ctx(y)?;
        let mut acc = CircleRational::zero();
        for (&i, &c) in &self.targets {
            let alpha = y.coord(i);
            if alpha == 0 {
                continue;
            }
            let n = self.ctx.order_of(i).map_err(CharError::Group)?;
            let term = CircleRational::from_ratio(
                BigInt::from(u128::from(c) * u128::from(alpha)),
                BigInt::from(n),
            )
            .map_err(CharError::Group)?;
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Value as a reduced small fraction `(num, den)` in `[0, 1)`, when the
    /// common denominator fits in a machine word.
    pub(crate) fn eval_frac(&self, y: &DirectSumElement) -> Result<Option<(u64, u64)>, CharError> {
        self.check_ctx(y)?;
        let mut num = 0u128;
        let mut den = 1u128;
        for (&i, &c) in &self.targets {
            let alpha = y.coord(i);
            if alpha == 0 {
                continue;
            }
            let n = u128::from(self.ctx.order_of(i).map_err(CharError::Group)?);
            let t = u128::from(c) * u128::from(alpha) % n;
            let g = den.gcd(&n);
            let new_den = match (den / g).checked_mul(n) {
                Some(d) if d <= u128::from(u64::MAX) => d,
                _ => return Ok(None),
            };
            num = match num
                .checked_mul(new_den / den)
                .and_then(|a| a.checked_add(t * (new_den / n) % new_den))
            {
                Some(v) => v % new_den,
                None => return Ok(None),
            };
            den = new_den;
        }
        let g = num.gcd(&den);
        Ok(Some(((num / g) as u64, (den / g) as u64)))
    }

    pub fn eval_is_zero(&self, y: &DirectSumElement) -> Result<bool, CharError> {
        match self.eval_frac(y)? {
            Some((num, _)) => Ok(num == 0),
            None => Ok(self.eval(y)?.is_zero()),
        }
    }
}

/// Exact tail report of `‖χ(a_k)‖` over pre-materialized direct-sum terms.
/// Uses machine fractions while the denominators stay small, falling back to
/// big rationals otherwise; both paths are exact.
pub fn ds_continuity_over(
    chi: &DsCharacter,
    terms: &[Element],
    checkpoints: &[u64],
    tol: &BigRational,
) -> Result<ConvergenceReport, CharError> {
    let mut small: Vec<(u64, u64)> = Vec::with_capacity(terms.len());
    let mut promoted: Option<Vec<BigRational>> = None;
    for term in terms {
        let y = match term {
            Element::Sum(y) => y,
            Element::Prufer(_) => return Err(CharError::ContextMismatch),
        };
        if let Some(big) = &mut promoted {
            big.push(chi.eval(y)?.norm());
            continue;
        }
        match chi.eval_frac(y)? {
            Some((num, den)) => {
                // ‖q‖ = min(q, 1-q)
                let n = num.min(den - num);
                small.push((n, den));
            }
            None => {
                let mut big: Vec<BigRational> = small
                    .iter()
                    .map(|&(n, d)| BigRational::new(n.into(), d.into()))
                    .collect();
                big.push(chi.eval(y)?.norm());
                promoted = Some(big);
            }
        }
    }
    match promoted {
        Some(big) => tail_report(&big, checkpoints, tol),
        None => tail_report_frac(&small, checkpoints, tol),
    }
}

/// Exact tail report of `‖χ(a_k)‖` over a direct-sum sequence.
pub fn ds_continuity(
    chi: &DsCharacter,
    seq: &SequenceHandle,
    horizon: u64,
    checkpoints: &[u64],
    tol: &BigRational,
) -> Result<ConvergenceReport, CharError> {
    let terms = seq.terms(1..=horizon)?;
    ds_continuity_over(chi, &terms, checkpoints, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::dsum::OrdersRule;
    use crate::sequences::sum_sequences;
    use num_bigint::BigInt;

    fn const3() -> Arc<DirectSumContext> {
        DirectSumContext::new(OrdersRule::Const(3)).unwrap()
    }

    #[test]
    fn eval_matches_frac_path() {
        let ctx = DirectSumContext::new(OrdersRule::Powers(3)).unwrap();
        let chi = DsCharacter::new(ctx.clone(), [(1, 2), (3, 5), (4, 17)]).unwrap();
        let y = DirectSumElement::new(ctx, [(1, 1), (3, 20), (4, 33)]).unwrap();
        let exact = chi.eval(&y).unwrap();
        let (n, d) = chi.eval_frac(&y).unwrap().unwrap();
        assert_eq!(
            exact,
            CircleRational::from_ratio(BigInt::from(n), BigInt::from(d)).unwrap()
        );
    }

    #[test]
    fn coordinate_characters_beyond_the_pivot_tend_to_zero() {
        let ctx = const3();
        let x = DirectSumElement::generator(ctx.clone(), 1).unwrap();
        let s = sum_sequences(&ctx, &x).unwrap();
        let tol = BigRational::new(1.into(), 9.into());
        let cps = crate::characters::report::default_checkpoints(60);

        let chi2 = DsCharacter::unit(ctx.clone(), 2).unwrap();
        let r = ds_continuity(&chi2, &s.interleaved, 60, &cps, &tol).unwrap();
        assert!(r.tends_to_zero());

        // a character not killing x sees -χ(x) on the block tail
        let chi_x = DsCharacter::new(ctx.clone(), [(1, 1), (2, 1)]).unwrap();
        let r = ds_continuity(&chi_x, &s.interleaved, 60, &cps, &tol).unwrap();
        assert!(r.verdict.is_refuted());
    }

    #[test]
    fn zero_test_agrees_with_eval() {
        let ctx = const3();
        let chi = DsCharacter::new(ctx.clone(), [(1, 1), (2, 2)]).unwrap();
        let y = DirectSumElement::new(ctx.clone(), [(1, 1), (2, 1)]).unwrap();
        assert!(chi.eval_is_zero(&y).unwrap());
        let z = DirectSumElement::new(ctx, [(1, 1)]).unwrap();
        assert!(!chi.eval_is_zero(&z).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let chi = DsCharacter::new(const3(), [(2, 1)]).unwrap();
        let js = serde_json::to_string(&chi).unwrap();
        assert_eq!(js, r#"{"orders":"const:3","targets":{"2":1}}"#);
        assert_eq!(serde_json::from_str::<DsCharacter>(&js).unwrap(), chi);
    }
}
