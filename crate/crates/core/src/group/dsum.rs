//! Direct sums of finite cyclic groups `⊕ C_i` with `|C_i| = n_i > 1`.
//!
//! The orders may be given by a lazily-extended rule, so an "infinite" sum is
//! represented by the rule plus whatever truncation depth a computation needs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::GroupError;
use crate::factored::Factored;

/// Rule assigning the cyclic order `n_i` to the 1-based coordinate `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrdersRule {
    /// `n_i = n` for every `i`.
    Const(u64),
    /// `n_i = base^i`, strictly increasing.
    Powers(u64),
    /// Explicit finite list; coordinates beyond it are out of range.
    Listed(Vec<u64>),
}

/// Whether an orders rule matches one of the two supported shapes.
#[derive(Debug, Copy, Clone, PartialEq, Eq)]
pub enum SumShape {
    Uniform,
    Increasing,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirectSumContext {
    rule: OrdersRule,
}

impl DirectSumContext {
    pub fn new(rule: OrdersRule) -> Result<Arc<Self>, GroupError> {
        let ok = match &rule {
            OrdersRule::Const(n) => *n > 1,
            OrdersRule::Powers(b) => *b > 1,
            OrdersRule::Listed(v) => !v.is_empty() && v.iter().all(|&n| n > 1),
        };
        if !ok {
            return Err(GroupError::InvalidElement(
                "every cyclic order must exceed 1".into(),
            ));
        }
        Ok(Arc::new(DirectSumContext { rule }))
    }

    pub fn rule(&self) -> &OrdersRule {
        &self.rule
    }

    /// Order of the 1-based coordinate `i`.
    pub fn order_of(&self, i: u64) -> Result<u64, GroupError> {
        if i == 0 {
            return Err(GroupError::IndexOutOfRange { index: 0 });
        }
        match &self.rule {
            OrdersRule::Const(n) => Ok(*n),
            OrdersRule::Powers(b) => {
                let e = u32::try_from(i).map_err(|_| GroupError::OrderOverflow { index: i })?;
                b.checked_pow(e).ok_or(GroupError::OrderOverflow { index: i })
            }
            OrdersRule::Listed(v) => v
                .get((i - 1) as usize)
                .copied()
                .ok_or(GroupError::IndexOutOfRange { index: i }),
        }
    }

    /// Highest valid coordinate, when the rule is finite.
    pub fn max_index(&self) -> Option<u64> {
        match &self.rule {
            OrdersRule::Listed(v) => Some(v.len() as u64),
            _ => None,
        }
    }

    pub fn shape(&self) -> Option<SumShape> {
        match &self.rule {
            OrdersRule::Const(_) => Some(SumShape::Uniform),
            OrdersRule::Powers(_) => Some(SumShape::Increasing),
            OrdersRule::Listed(v) => {
                if v.windows(2).all(|w| w[0] == w[1]) {
                    Some(SumShape::Uniform)
                } else if v.windows(2).all(|w| w[0] < w[1]) {
                    Some(SumShape::Increasing)
                } else {
                    None
                }
            }
        }
    }
}

impl fmt::Display for OrdersRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrdersRule::Const(n) => write!(f, "const:{n}"),
            OrdersRule::Powers(b) => write!(f, "pow:{b}"),
            OrdersRule::Listed(v) => {
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

impl FromStr for OrdersRule {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, GroupError> {
        let bad = || GroupError::InvalidElement(format!("cannot parse orders rule `{s}`"));
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "const" => Ok(OrdersRule::Const(arg.parse().map_err(|_| bad())?)),
            "pow" => Ok(OrdersRule::Powers(arg.parse().map_err(|_| bad())?)),
            "list" => {
                let v = arg
                    .split(',')
                    .map(|t| t.trim().parse::<u64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(OrdersRule::Listed(v))
            }
            _ => Err(bad()),
        }
    }
}

impl Serialize for OrdersRule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for OrdersRule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}

/// A finitely supported element of `⊕ C_i`: coordinate -> nonzero residue.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Wire", into = "Wire")]
pub struct DirectSumElement {
    ctx: Arc<DirectSumContext>,
    coords: BTreeMap<u64, u64>,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    orders: OrdersRule,
    coords: BTreeMap<u64, u64>,
}

impl TryFrom<Wire> for DirectSumElement {
    type Error = GroupError;
    fn try_from(w: Wire) -> Result<Self, GroupError> {
        let ctx = DirectSumContext::new(w.orders)?;
        DirectSumElement::new(ctx, w.coords)
    }
}

impl From<DirectSumElement> for Wire {
    fn from(e: DirectSumElement) -> Wire {
        Wire {
            orders: e.ctx.rule().clone(),
            coords: e.coords,
        }
    }
}

impl DirectSumElement {
    /// Build from raw coordinates; residues are reduced mod `n_i` and zeros
    /// dropped.
    pub fn new(
        ctx: Arc<DirectSumContext>,
        coords: impl IntoIterator<Item = (u64, u64)>,
    ) -> Result<Self, GroupError> {
        let mut map = BTreeMap::new();
        for (i, r) in coords {
            let n = ctx.order_of(i)?;
            let r = r % n;
            if r != 0 {
                map.insert(i, r);
            }
        }
        Ok(DirectSumElement { ctx, coords: map })
    }

    pub fn zero(ctx: Arc<DirectSumContext>) -> Self {
        DirectSumElement {
            ctx,
            coords: BTreeMap::new(),
        }
    }

    /// The chosen generator `g_i` of the i-th summand.
    pub fn generator(ctx: Arc<DirectSumContext>, i: u64) -> Result<Self, GroupError> {
        Self::new(ctx, [(i, 1)])
    }

    pub fn context(&self) -> &Arc<DirectSumContext> {
        &self.ctx
    }

    pub fn coords(&self) -> &BTreeMap<u64, u64> {
        &self.coords
    }

    pub fn coord(&self, i: u64) -> u64 {
        self.coords.get(&i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// The support set and its size.
    pub fn support(&self) -> (BTreeSet<u64>, usize) {
        let set: BTreeSet<u64> = self.coords.keys().copied().collect();
        let count = set.len();
        (set, count)
    }

    fn same_ctx(&self, other: &DirectSumElement) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx
    }

    pub fn add(&self, other: &DirectSumElement) -> Result<DirectSumElement, GroupError> {
        if !self.same_ctx(other) {
            return Err(GroupError::ContextMismatch);
        }
        let mut map = self.coords.clone();
        for (&i, &r) in &other.coords {
            let n = self.ctx.order_of(i)?;
            let slot = map.entry(i).or_insert(0);
            *slot = (*slot + r) % n;
            if *slot == 0 {
                map.remove(&i);
            }
        }
        Ok(DirectSumElement {
            ctx: self.ctx.clone(),
            coords: map,
        })
    }

    pub fn neg(&self) -> DirectSumElement {
        let coords = self
            .coords
            .iter()
            .map(|(&i, &r)| {
                let n = self.ctx.order_of(i).expect("stored coordinate is valid");
                (i, n - r)
            })
            .collect();
        DirectSumElement {
            ctx: self.ctx.clone(),
            coords,
        }
    }

    pub fn scalar_mul(&self, m: &BigInt) -> DirectSumElement {
        if m.is_zero() {
            return Self::zero(self.ctx.clone());
        }
        let mut map = BTreeMap::new();
        for (&i, &r) in &self.coords {
            let n = self.ctx.order_of(i).expect("stored coordinate is valid");
            let mm = m.mod_floor(&BigInt::from(n)).to_u64().unwrap();
            let v = (u128::from(mm) * u128::from(r) % u128::from(n)) as u64;
            if v != 0 {
                map.insert(i, v);
            }
        }
        DirectSumElement {
            ctx: self.ctx.clone(),
            coords: map,
        }
    }

    pub fn order_factored(&self) -> Factored {
        let mut ord = Factored::one();
        for (&i, &r) in &self.coords {
            let n = self.ctx.order_of(i).expect("stored coordinate is valid");
            ord = ord.lcm(&Factored::from_u64(n / n.gcd(&r)));
        }
        ord
    }
}

impl fmt::Display for DirectSumElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&i, &r) in &self.coords {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if r == 1 {
                write!(f, "g{i}")?;
            } else {
                write!(f, "{r}*g{i}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn const3() -> Arc<DirectSumContext> {
        DirectSumContext::new(OrdersRule::Const(3)).unwrap()
    }

    #[test]
    fn support_examples() {
        let ctx = const3();
        let g1 = DirectSumElement::generator(ctx.clone(), 1).unwrap();
        assert_eq!(g1.support(), ([1].into(), 1));
        assert_eq!(DirectSumElement::zero(ctx.clone()).support(), (BTreeSet::new(), 0));
        let x = DirectSumElement::new(ctx, [(2, 1), (5, 2)]).unwrap();
        assert_eq!(x.support(), ([2, 5].into(), 2));
    }

    #[test]
    fn arithmetic_reduces_mod_orders() {
        let ctx = const3();
        let a = DirectSumElement::new(ctx.clone(), [(1, 2), (2, 2)]).unwrap();
        let b = DirectSumElement::new(ctx.clone(), [(1, 1), (2, 2)]).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.coords(), &BTreeMap::from([(2, 1)]));
        assert!(a.add(&a.neg()).unwrap().is_zero());
        assert_eq!(a.scalar_mul(&BigInt::from(-1)), a.neg());
    }

    #[test]
    fn order_is_lcm_of_coordinate_orders() {
        let ctx = DirectSumContext::new(OrdersRule::Listed(vec![2, 3])).unwrap();
        let x = DirectSumElement::new(ctx, [(1, 1), (2, 1)]).unwrap();
        assert_eq!(x.order_factored().value(), 6u64.into());
    }

    #[test]
    fn powers_rule_orders() {
        let ctx = DirectSumContext::new(OrdersRule::Powers(3)).unwrap();
        assert_eq!(ctx.order_of(4).unwrap(), 81);
        assert_eq!(ctx.shape(), Some(SumShape::Increasing));
        assert!(ctx.order_of(0).is_err());
    }

    #[test]
    fn listed_rule_bounds() {
        let ctx = DirectSumContext::new(OrdersRule::Listed(vec![2, 3, 9])).unwrap();
        assert_eq!(ctx.max_index(), Some(3));
        assert!(ctx.order_of(4).is_err());
        assert_eq!(ctx.shape(), Some(SumShape::Increasing));
        let mixed = DirectSumContext::new(OrdersRule::Listed(vec![3, 2])).unwrap();
        assert_eq!(mixed.shape(), None);
    }

    #[test]
    fn json_round_trip() {
        let ctx = const3();
        let x = DirectSumElement::new(ctx, [(2, 1)]).unwrap();
        let js = serde_json::to_string(&x).unwrap();
        assert_eq!(js, r#"{"orders":"const:3","coords":{"2":1}}"#);
        assert_eq!(serde_json::from_str::<DirectSumElement>(&js).unwrap(), x);
    }
}
