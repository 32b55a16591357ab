//! Deterministic sequence rules: the named constructions this library
//! studies, plus interleaving and explicit finite lists for experiments.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::group::dsum::{DirectSumContext, DirectSumElement, OrdersRule, SumShape};
use crate::group::prime::Prime;
use crate::group::prufer::PruferElement;
use crate::group::{Ambient, Element, GroupError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequenceError {
    #[error("invalid sequence spec: {0}")]
    InvalidSpec(String),
    #[error("terms {first} and {second} coincide")]
    RepeatedTerms { first: u64, second: u64 },
    #[error("sequences live in different ambient groups")]
    ContextMismatch,
    #[error("index {index} is outside the sequence domain (max {max})")]
    IndexOutOfRange { index: u64, max: u64 },
    #[error("exponent overflow at index {index}")]
    ExponentOverflow { index: u64 },
    #[error(transparent)]
    Group(#[from] GroupError),
}

type Rule = Arc<dyn Fn(u64) -> Result<Element, SequenceError> + Send + Sync>;

/// A pure, total rule `k ↦ a_k` (1-based) into a fixed ambient group.
#[derive(Clone)]
pub struct SequenceHandle {
    name: String,
    ambient: Ambient,
    max_index: Option<u64>,
    contains_embedding_tail: bool,
    rule: Rule,
}

impl fmt::Debug for SequenceHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SequenceHandle")
            .field("name", &self.name)
            .field("ambient", &self.ambient)
            .field("max_index", &self.max_index)
            .finish_non_exhaustive()
    }
}

impl SequenceHandle {
    pub fn new(
        name: impl Into<String>,
        ambient: Ambient,
        max_index: Option<u64>,
        contains_embedding_tail: bool,
        rule: Rule,
    ) -> Self {
        SequenceHandle {
            name: name.into(),
            ambient,
            max_index,
            contains_embedding_tail,
            rule,
        }
    }

    /// A finite sequence given by an explicit term list.
    pub fn from_elements(
        name: impl Into<String>,
        ambient: Ambient,
        terms: Vec<Element>,
    ) -> Result<Self, SequenceError> {
        for t in &terms {
            if t.ambient() != ambient {
                return Err(SequenceError::ContextMismatch);
            }
        }
        let max = terms.len() as u64;
        let terms = Arc::new(terms);
        Ok(SequenceHandle::new(
            name,
            ambient,
            Some(max),
            false,
            Arc::new(move |k| {
                terms
                    .get((k - 1) as usize)
                    .cloned()
                    .ok_or(SequenceError::IndexOutOfRange { index: k, max })
            }),
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn max_index(&self) -> Option<u64> {
        self.max_index
    }

    /// Whether the terms of `{e_n}` appear cofinally in this sequence, which
    /// is what justifies classifying characters within the multiples of the
    /// natural embedding.
    pub fn contains_embedding_tail(&self) -> bool {
        self.contains_embedding_tail
    }

    pub fn term(&self, k: u64) -> Result<Element, SequenceError> {
        if k == 0 {
            return Err(SequenceError::IndexOutOfRange { index: 0, max: 0 });
        }
        if let Some(max) = self.max_index {
            if k > max {
                return Err(SequenceError::IndexOutOfRange { index: k, max });
            }
        }
        (self.rule)(k)
    }

    pub fn terms(&self, range: std::ops::RangeInclusive<u64>) -> Result<Vec<Element>, SequenceError> {
        range.map(|k| self.term(k)).collect()
    }
}

/// Exponent rule `k ↦ n_k` for shifted sequences; always strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExponentRule {
    /// `n_k = k^2`
    Square,
    /// `n_k = step·k + offset`
    Linear { step: u32, offset: u32 },
    /// `1, 2, 3, 5, 8, …`
    Fibonacci,
    Listed(Vec<u32>),
}

impl ExponentRule {
    pub fn validate(&self) -> Result<(), SequenceError> {
        match self {
            ExponentRule::Linear { step, .. } if *step == 0 => Err(SequenceError::InvalidSpec(
                "linear exponent rule needs step ≥ 1".into(),
            )),
            ExponentRule::Listed(v) => {
                if v.is_empty() || v.windows(2).any(|w| w[0] >= w[1]) {
                    Err(SequenceError::InvalidSpec(
                        "listed exponents must be non-empty and strictly increasing".into(),
                    ))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, k: u64) -> Result<u32, SequenceError> {
        let over = SequenceError::ExponentOverflow { index: k };
        match self {
            ExponentRule::Square => {
                let k = u32::try_from(k).map_err(|_| over.clone())?;
                k.checked_mul(k).ok_or(over)
            }
            ExponentRule::Linear { step, offset } => {
                let k = u32::try_from(k).map_err(|_| over.clone())?;
                step.checked_mul(k).and_then(|v| v.checked_add(*offset)).ok_or(over)
            }
            ExponentRule::Fibonacci => {
                let (mut a, mut b) = (1u32, 2u32);
                for _ in 1..k {
                    let next = a.checked_add(b).ok_or(over.clone())?;
                    a = b;
                    b = next;
                }
                Ok(a)
            }
            ExponentRule::Listed(v) => v
                .get((k - 1) as usize)
                .copied()
                .ok_or(SequenceError::IndexOutOfRange {
                    index: k,
                    max: v.len() as u64,
                }),
        }
    }

    pub fn max_index(&self) -> Option<u64> {
        match self {
            ExponentRule::Listed(v) => Some(v.len() as u64),
            _ => None,
        }
    }
}

impl fmt::Display for ExponentRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentRule::Square => write!(f, "square"),
            ExponentRule::Linear { step, offset } => write!(f, "linear:{step},{offset}"),
            ExponentRule::Fibonacci => write!(f, "fib"),
            ExponentRule::Listed(v) => {
                write!(f, "list:")?;
                for (i, n) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{n}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for ExponentRule {
    type Err = SequenceError;

    fn from_str(s: &str) -> Result<Self, SequenceError> {
        let bad = || SequenceError::InvalidSpec(format!("cannot parse exponent rule `{s}`"));
        let rule = match s {
            "square" => ExponentRule::Square,
            "fib" => ExponentRule::Fibonacci,
            _ => match s.split_once(':') {
                Some(("linear", args)) => {
                    let (a, b) = args.split_once(',').unwrap_or((args, "0"));
                    ExponentRule::Linear {
                        step: a.trim().parse().map_err(|_| bad())?,
                        offset: b.trim().parse().map_err(|_| bad())?,
                    }
                }
                Some(("list", args)) => ExponentRule::Listed(
                    args.split(',')
                        .map(|t| t.trim().parse::<u32>().map_err(|_| bad()))
                        .collect::<Result<Vec<_>, _>>()?,
                ),
                _ => return Err(bad()),
            },
        };
        rule.validate()?;
        Ok(rule)
    }
}

impl Serialize for ExponentRule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExponentRule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}

/// `e_k = 1/p^k`, the natural null sequence of `Z(p^∞)`.
pub fn embedding_sequence(p: Prime) -> SequenceHandle {
    SequenceHandle::new(
        "e",
        Ambient::Prufer(p),
        None,
        true,
        Arc::new(move |k| {
            let n = u32::try_from(k).map_err(|_| SequenceError::ExponentOverflow { index: k })?;
            Ok(Element::Prufer(PruferElement::unit(p, n)))
        }),
    )
}

/// `a_k = -e_1 + e_k`, the classic sequence that no Hausdorff group topology
/// can send to zero.
pub fn shifted_unit_sequence(p: Prime) -> SequenceHandle {
    let e1 = PruferElement::unit(p, 1);
    SequenceHandle::new(
        "ex12",
        Ambient::Prufer(p),
        None,
        false,
        Arc::new(move |k| {
            let n = u32::try_from(k).map_err(|_| SequenceError::ExponentOverflow { index: k })?;
            let t = e1.neg().add(&PruferElement::unit(p, n))?;
            Ok(Element::Prufer(t))
        }),
    )
}

/// `a_k = -x + e_{n_k}` for a nonzero `x` and strictly increasing exponents.
pub fn shifted_embedding(
    p: Prime,
    x: PruferElement,
    exponents: ExponentRule,
) -> Result<SequenceHandle, SequenceError> {
    if x.prime() != p {
        return Err(SequenceError::ContextMismatch);
    }
    if x.is_zero() {
        return Err(SequenceError::InvalidSpec("x must be nonzero".into()));
    }
    exponents.validate()?;
    let max = exponents.max_index();
    let name = format!("shifted[x={x},n={exponents}]");
    Ok(SequenceHandle::new(
        name,
        Ambient::Prufer(p),
        max,
        false,
        Arc::new(move |k| {
            let n = exponents.eval(k)?;
            let t = x.neg().add(&PruferElement::unit(p, n))?;
            Ok(Element::Prufer(t))
        }),
    ))
}

/// `b_n = -x + e_{n³-n²} + e_{n³-n²+n} + ⋯ + e_{n³}`: block sums converging
/// to `-x` in the circle with `n+1` summands and internal gaps of size `n`.
///
/// Defined for odd `p` only. The `n = 1` term keeps its leading `e_0`, which
/// evaluates to zero.
pub fn block_sum_sequence(p: Prime, x: PruferElement) -> Result<SequenceHandle, SequenceError> {
    if x.prime() != p {
        return Err(SequenceError::ContextMismatch);
    }
    if x.is_zero() {
        return Err(SequenceError::InvalidSpec("x must be nonzero".into()));
    }
    if !p.is_odd() {
        return Err(SequenceError::InvalidSpec(
            "block-sum sequences are defined for odd p".into(),
        ));
    }
    let name = format!("blocksum[x={x}]");
    Ok(SequenceHandle::new(
        name,
        Ambient::Prufer(p),
        None,
        false,
        Arc::new(move |n| {
            let mut acc = x.neg();
            for j in 0..=n {
                let idx = n * n * n - n * n + j * n;
                let idx =
                    u32::try_from(idx).map_err(|_| SequenceError::ExponentOverflow { index: n })?;
                acc = acc.add(&PruferElement::unit(p, idx))?;
            }
            Ok(Element::Prufer(acc))
        }),
    ))
}

/// Alternation `s1_1, s2_1, s1_2, s2_2, …` with a finite duplicate check over
/// the first `2·check_horizon` terms.
pub fn interleave(
    s1: &SequenceHandle,
    s2: &SequenceHandle,
    check_horizon: u64,
) -> Result<SequenceHandle, SequenceError> {
    if s1.ambient() != s2.ambient() {
        return Err(SequenceError::ContextMismatch);
    }
    let max_index = match (s1.max_index(), s2.max_index()) {
        (None, None) => None,
        (Some(a), None) => Some(2 * a),
        (None, Some(b)) => Some(2 * b + 1),
        (Some(a), Some(b)) => Some(if a <= b { 2 * a } else { 2 * b + 1 }),
    };
    let tail = s1.contains_embedding_tail() || s2.contains_embedding_tail();
    let (r1, r2) = (s1.clone(), s2.clone());
    let handle = SequenceHandle::new(
        format!("interleave[{},{}]", s1.name(), s2.name()),
        s1.ambient().clone(),
        max_index,
        tail,
        Arc::new(move |k| {
            if k % 2 == 1 {
                r1.term(k / 2 + 1)
            } else {
                r2.term(k / 2)
            }
        }),
    );
    let upto = match handle.max_index() {
        Some(m) => m.min(2 * check_horizon),
        None => 2 * check_horizon,
    };
    let mut seen: BTreeMap<Element, u64> = BTreeMap::new();
    for k in 1..=upto {
        let t = handle.term(k)?;
        if let Some(&first) = seen.get(&t) {
            return Err(SequenceError::RepeatedTerms { first, second: k });
        }
        seen.insert(t, k);
    }
    Ok(handle)
}

const INTERLEAVE_CHECK_HORIZON: u64 = 32;

/// The interleaving `b_1, e_1, b_2, e_2, …` of the block sums with the
/// natural null sequence.
pub fn block_sum_interleaved(p: Prime, x: PruferElement) -> Result<SequenceHandle, SequenceError> {
    let blocks = block_sum_sequence(p, x)?;
    let units = embedding_sequence(p);
    interleave(&blocks, &units, INTERLEAVE_CHECK_HORIZON)
}

/// The three sequences attached to a direct sum `⊕ C_i` and a nonzero `x`.
#[derive(Debug, Clone)]
pub struct SumSequences {
    /// `max Λ(x)`: everything below is frozen, fresh generators start above.
    pub pivot: u64,
    /// Row enumeration `g_{i+1}, 2g_{i+1}, …, (n_{i+1}-1)g_{i+1}, g_{i+2}, …`
    /// of all nonzero multiples of the generators above the pivot.
    pub units: SequenceHandle,
    /// Triangular blocks `-x + g_{s+1} + ⋯ + g_{s+r}` over fresh generators.
    pub blocks: SequenceHandle,
    /// The alternation `units_1, blocks_1, units_2, blocks_2, …`.
    pub interleaved: SequenceHandle,
}

/// Build the direct-sum sequences. The orders rule must be constant or
/// strictly increasing; pick a monotone subfamily first if it is neither.
pub fn sum_sequences(
    ctx: &Arc<DirectSumContext>,
    x: &DirectSumElement,
) -> Result<SumSequences, SequenceError> {
    if x.context() != ctx {
        return Err(SequenceError::ContextMismatch);
    }
    if x.is_zero() {
        return Err(SequenceError::InvalidSpec("x must be nonzero".into()));
    }
    if ctx.shape() == Option::<SumShape>::None {
        return Err(SequenceError::InvalidSpec(
            "orders must be constant or strictly increasing; select a monotone subfamily".into(),
        ));
    }
    let pivot = *x.support().0.iter().next_back().unwrap();
    let ambient = Ambient::Sum(ctx.clone());

    let uctx = ctx.clone();
    let units = SequenceHandle::new(
        "sum-units",
        ambient.clone(),
        None,
        false,
        Arc::new(move |k| {
            let mut rest = k;
            let mut i = pivot + 1;
            loop {
                let n = uctx.order_of(i)?;
                if rest < n {
                    // rest ∈ [1, n-1]: the multiple j = rest of g_i
                    return Ok(Element::Sum(DirectSumElement::new(
                        uctx.clone(),
                        [(i, rest)],
                    )?));
                }
                rest -= n - 1;
                i += 1;
            }
        }),
    );

    let bctx = ctx.clone();
    let bx = x.clone();
    let blocks = SequenceHandle::new(
        "sum-blocks",
        ambient.clone(),
        None,
        false,
        Arc::new(move |r| {
            let start = pivot + r * (r - 1) / 2;
            let mut acc = bx.neg();
            for i in start + 1..=start + r {
                acc = acc.add(&DirectSumElement::generator(bctx.clone(), i)?)?;
            }
            Ok(Element::Sum(acc))
        }),
    );

    let interleaved = interleave(&units, &blocks, INTERLEAVE_CHECK_HORIZON)?;
    Ok(SumSequences {
        pivot,
        units,
        blocks,
        interleaved,
    })
}

/// Integer-keyed coordinate maps ride through tagged enums as string keys.
mod coord_map {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(m: &BTreeMap<u64, u64>, s: S) -> Result<S::Ok, S::Error> {
        let by_name: BTreeMap<String, u64> = m.iter().map(|(&k, &v)| (k.to_string(), v)).collect();
        by_name.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u64, u64>, D::Error> {
        BTreeMap::<String, u64>::deserialize(d)?
            .into_iter()
            .map(|(k, v)| {
                k.parse::<u64>()
                    .map(|k| (k, v))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

/// Wire form of a sequence description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SequenceSpec {
    E {
        p: u64,
    },
    Ex12 {
        p: u64,
    },
    Shifted {
        p: u64,
        x: String,
        exponents: ExponentRule,
    },
    #[serde(rename = "thm410_b")]
    BlockSum {
        p: u64,
        x: String,
    },
    #[serde(rename = "thm410_d")]
    BlockSumInterleaved {
        p: u64,
        x: String,
    },
    #[serde(rename = "prop33_a")]
    SumUnits {
        orders: OrdersRule,
        #[serde(with = "coord_map")]
        x: BTreeMap<u64, u64>,
    },
    #[serde(rename = "prop33_b")]
    SumBlocks {
        orders: OrdersRule,
        #[serde(with = "coord_map")]
        x: BTreeMap<u64, u64>,
    },
    #[serde(rename = "prop33_d")]
    SumInterleaved {
        orders: OrdersRule,
        #[serde(with = "coord_map")]
        x: BTreeMap<u64, u64>,
    },
}

fn parse_p(p: u64) -> Result<Prime, SequenceError> {
    Prime::new(p).map_err(SequenceError::Group)
}

fn parse_x(p: Prime, s: &str) -> Result<PruferElement, SequenceError> {
    PruferElement::from_fraction_str(p, s).map_err(SequenceError::Group)
}

fn sum_parts(
    orders: &OrdersRule,
    x: &BTreeMap<u64, u64>,
) -> Result<(Arc<DirectSumContext>, DirectSumElement), SequenceError> {
    let ctx = DirectSumContext::new(orders.clone())?;
    let x = DirectSumElement::new(ctx.clone(), x.iter().map(|(&i, &r)| (i, r)))?;
    Ok((ctx, x))
}

/// Realize a sequence spec as a handle.
pub fn make_sequence(spec: &SequenceSpec) -> Result<SequenceHandle, SequenceError> {
    match spec {
        SequenceSpec::E { p } => Ok(embedding_sequence(parse_p(*p)?)),
        SequenceSpec::Ex12 { p } => Ok(shifted_unit_sequence(parse_p(*p)?)),
        SequenceSpec::Shifted { p, x, exponents } => {
            let p = parse_p(*p)?;
            shifted_embedding(p, parse_x(p, x)?, exponents.clone())
        }
        SequenceSpec::BlockSum { p, x } => {
            let p = parse_p(*p)?;
            block_sum_sequence(p, parse_x(p, x)?)
        }
        SequenceSpec::BlockSumInterleaved { p, x } => {
            let p = parse_p(*p)?;
            block_sum_interleaved(p, parse_x(p, x)?)
        }
        SequenceSpec::SumUnits { orders, x } => {
            let (ctx, x) = sum_parts(orders, x)?;
            Ok(sum_sequences(&ctx, &x)?.units)
        }
        SequenceSpec::SumBlocks { orders, x } => {
            let (ctx, x) = sum_parts(orders, x)?;
            Ok(sum_sequences(&ctx, &x)?.blocks)
        }
        SequenceSpec::SumInterleaved { orders, x } => {
            let (ctx, x) = sum_parts(orders, x)?;
            Ok(sum_sequences(&ctx, &x)?.interleaved)
        }
    }
}

/// Scalar shift helper used in tests and demos: `k ↦ m·s_k`.
pub fn scaled(s: &SequenceHandle, m: i64) -> SequenceHandle {
    let inner = s.clone();
    SequenceHandle::new(
        format!("{}*{m}", s.name()),
        s.ambient().clone(),
        s.max_index(),
        false,
        Arc::new(move |k| Ok(inner.term(k)?.scalar_mul(&BigInt::from(m)))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::dsum::OrdersRule;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn frac(s: &str) -> PruferElement {
        PruferElement::from_fraction_str(p3(), s).unwrap()
    }

    #[test]
    fn embedding_terms() {
        let e = embedding_sequence(p3());
        assert_eq!(e.term(2).unwrap(), Element::Prufer(frac("1/9")));
    }

    #[test]
    fn shifted_unit_terms() {
        let a = shifted_unit_sequence(p3());
        assert_eq!(a.term(4).unwrap(), Element::Prufer(frac("55/81")));
        assert!(a.term(1).unwrap().is_zero());
    }

    #[test]
    fn block_sum_terms() {
        let b = block_sum_sequence(p3(), frac("1/3")).unwrap();
        // n = 2: -1/3 + e_4 + e_6 + e_8 = 4465/6561
        assert_eq!(b.term(2).unwrap(), Element::Prufer(frac("4465/6561")));
        // n = 1 keeps the vanishing e_0 term: -1/3 + 0 + 1/3 = 0
        assert!(b.term(1).unwrap().is_zero());
    }

    #[test]
    fn block_sum_rejects_even_p() {
        let p2 = Prime::new(2).unwrap();
        let x = PruferElement::unit(p2, 1);
        assert!(block_sum_sequence(p2, x).is_err());
    }

    #[test]
    fn interleave_alternates() {
        let b = block_sum_sequence(p3(), frac("1/3")).unwrap();
        let e = embedding_sequence(p3());
        let d = interleave(&b, &e, 8).unwrap();
        assert_eq!(d.term(1).unwrap(), b.term(1).unwrap());
        assert_eq!(d.term(2).unwrap(), e.term(1).unwrap());
        assert_eq!(d.term(3).unwrap(), b.term(2).unwrap());
        assert!(d.contains_embedding_tail());
    }

    #[test]
    fn interleave_flags_repeats() {
        let e = embedding_sequence(p3());
        assert!(matches!(
            interleave(&e, &e, 8),
            Err(SequenceError::RepeatedTerms { .. })
        ));
        // e interleaved with its own shift repeats e_2, e_3, ...
        let shifted = {
            let inner = embedding_sequence(p3());
            SequenceHandle::new(
                "e>>1",
                inner.ambient().clone(),
                None,
                true,
                Arc::new(move |k| inner.term(k + 1)),
            )
        };
        assert!(matches!(
            interleave(&e, &shifted, 8),
            Err(SequenceError::RepeatedTerms { .. })
        ));
    }

    #[test]
    fn sum_sequence_rows_and_blocks() {
        let ctx = DirectSumContext::new(OrdersRule::Const(3)).unwrap();
        let x = DirectSumElement::generator(ctx.clone(), 1).unwrap();
        let s = sum_sequences(&ctx, &x).unwrap();
        assert_eq!(s.pivot, 1);

        let g = |i: u64, r: u64| {
            Element::Sum(DirectSumElement::new(ctx.clone(), [(i, r)]).unwrap())
        };
        // units: g_2, 2g_2, g_3, 2g_3, ...
        assert_eq!(s.units.term(1).unwrap(), g(2, 1));
        assert_eq!(s.units.term(2).unwrap(), g(2, 2));
        assert_eq!(s.units.term(3).unwrap(), g(3, 1));
        assert_eq!(s.units.term(4).unwrap(), g(3, 2));

        // blocks: -x + g_2, then -x + g_3 + g_4
        let b1 = x.neg().add(&DirectSumElement::generator(ctx.clone(), 2).unwrap()).unwrap();
        assert_eq!(s.blocks.term(1).unwrap(), Element::Sum(b1));
        let b2 = x
            .neg()
            .add(&DirectSumElement::generator(ctx.clone(), 3).unwrap())
            .unwrap()
            .add(&DirectSumElement::generator(ctx.clone(), 4).unwrap())
            .unwrap();
        assert_eq!(s.blocks.term(2).unwrap(), Element::Sum(b2.clone()));

        // block support is fresh: λ(b_r + x) = r
        for r in 1..6u64 {
            let br = s.blocks.term(r).unwrap();
            let shifted = br.add(&Element::Sum(x.clone())).unwrap();
            match shifted {
                Element::Sum(v) => assert_eq!(v.support().1 as u64, r),
                _ => unreachable!(),
            }
        }

        // interleaved: a_1, b_1, a_2, b_2, ...
        assert_eq!(s.interleaved.term(1).unwrap(), s.units.term(1).unwrap());
        assert_eq!(s.interleaved.term(2).unwrap(), s.blocks.term(1).unwrap());
        assert_eq!(s.interleaved.term(3).unwrap(), s.units.term(2).unwrap());
    }

    #[test]
    fn sum_sequences_reject_bad_inputs() {
        let ctx = DirectSumContext::new(OrdersRule::Const(3)).unwrap();
        let zero = DirectSumElement::zero(ctx.clone());
        assert!(sum_sequences(&ctx, &zero).is_err());
        let mixed = DirectSumContext::new(OrdersRule::Listed(vec![3, 2, 5])).unwrap();
        let x = DirectSumElement::generator(mixed.clone(), 1).unwrap();
        assert!(sum_sequences(&mixed, &x).is_err());
    }

    #[test]
    fn exponent_rules() {
        assert_eq!(ExponentRule::Square.eval(5).unwrap(), 25);
        assert_eq!(ExponentRule::Fibonacci.eval(4).unwrap(), 5);
        let r: ExponentRule = "linear:2,0".parse().unwrap();
        assert_eq!(r.eval(7).unwrap(), 14);
        assert!("list:3,2".parse::<ExponentRule>().is_err());
        let l: ExponentRule = "list:1,4,9".parse().unwrap();
        assert_eq!(l.eval(3).unwrap(), 9);
        assert!(l.eval(4).is_err());
    }

    #[test]
    fn spec_round_trip() {
        let spec = SequenceSpec::BlockSumInterleaved {
            p: 3,
            x: "1/3".into(),
        };
        let js = serde_json::to_string(&spec).unwrap();
        assert!(js.contains(r#""kind":"thm410_d""#));
        assert_eq!(serde_json::from_str::<SequenceSpec>(&js).unwrap(), spec);
        let d = make_sequence(&spec).unwrap();
        assert_eq!(d.term(2).unwrap(), Element::Prufer(frac("1/3")));

        let spec: SequenceSpec =
            serde_json::from_str(r#"{"kind":"prop33_d","orders":"const:3","x":{"1":1}}"#).unwrap();
        let d = make_sequence(&spec).unwrap();
        assert!(!d.term(1).unwrap().is_zero());
    }

    #[test]
    fn finite_sequences_respect_domain() {
        let p = p3();
        let amb = Ambient::Prufer(p);
        let s = SequenceHandle::from_elements(
            "list",
            amb,
            vec![
                Element::Prufer(PruferElement::unit(p, 1)),
                Element::Prufer(PruferElement::unit(p, 2)),
            ],
        )
        .unwrap();
        assert!(s.term(2).is_ok());
        assert!(matches!(
            s.term(3),
            Err(SequenceError::IndexOutOfRange { .. })
        ));
    }
}
