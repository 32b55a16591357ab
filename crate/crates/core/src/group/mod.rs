//! The three ambient structures and their exact group arithmetic: the Prüfer
//! group `Z(p^∞)`, direct sums of finite cyclic groups, and circle rationals.
//!
//! All values are immutable and every operation is pure, so elements may be
//! shared freely between threads.

pub mod circle;
pub mod dsum;
pub mod prime;
pub mod prufer;
pub mod subgroup;

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::factored::Factored;
use dsum::{DirectSumContext, DirectSumElement};
use prime::Prime;
use prufer::PruferElement;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("elements live in different ambient groups")]
    ContextMismatch,
    #[error("closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: u64 },
    #[error("index {index} is outside the orders list")]
    IndexOutOfRange { index: u64 },
    #[error("cyclic order overflows at index {index}")]
    OrderOverflow { index: u64 },
    #[error("invalid element: {0}")]
    InvalidElement(String),
}

/// The ambient group an element lives in.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ambient {
    Prufer(Prime),
    Sum(Arc<DirectSumContext>),
}

impl Ambient {
    pub fn zero(&self) -> Element {
        match self {
            Ambient::Prufer(p) => Element::Prufer(PruferElement::zero(*p)),
            Ambient::Sum(ctx) => Element::Sum(DirectSumElement::zero(ctx.clone())),
        }
    }
}

/// An element of one of the ambient groups, always kept in normalized form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Element {
    #[serde(rename = "prufer")]
    Prufer(PruferElement),
    #[serde(rename = "dsum")]
    Sum(DirectSumElement),
}

impl Element {
    pub fn ambient(&self) -> Ambient {
        match self {
            Element::Prufer(a) => Ambient::Prufer(a.prime()),
            Element::Sum(a) => Ambient::Sum(a.context().clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Element::Prufer(a) => a.is_zero(),
            Element::Sum(a) => a.is_zero(),
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element, GroupError> {
        match (self, other) {
            (Element::Prufer(a), Element::Prufer(b)) => Ok(Element::Prufer(a.add(b)?)),
            (Element::Sum(a), Element::Sum(b)) => Ok(Element::Sum(a.add(b)?)),
            _ => Err(GroupError::ContextMismatch),
        }
    }

    pub fn sub(&self, other: &Element) -> Result<Element, GroupError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        match self {
            Element::Prufer(a) => Element::Prufer(a.neg()),
            Element::Sum(a) => Element::Sum(a.neg()),
        }
    }

    pub fn scalar_mul(&self, m: &BigInt) -> Element {
        match self {
            Element::Prufer(a) => Element::Prufer(a.scalar_mul(m)),
            Element::Sum(a) => Element::Sum(a.scalar_mul(m)),
        }
    }

    /// Least `t ≥ 1` with `t·a = 0`.
    pub fn order(&self) -> BigUint {
        self.order_factored().value()
    }

    pub fn order_factored(&self) -> Factored {
        match self {
            Element::Prufer(a) => a.order_factored(),
            Element::Sum(a) => a.order_factored(),
        }
    }

    /// The element as a point of `T = R/Z`; only Prüfer elements embed.
    pub fn to_circle(&self) -> Option<circle::CircleRational> {
        match self {
            Element::Prufer(a) => Some(a.to_circle()),
            Element::Sum(_) => None,
        }
    }
}

pub(crate) mod serde_util {
    //! Wire helpers: arbitrary-precision integers serialize as plain JSON
    //! numbers when they fit, and as decimal strings otherwise. Oversized
    //! bare numbers are rejected rather than silently rounded through f64.

    use num_bigint::{BigInt, BigUint};
    use num_traits::ToPrimitive;
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};
    use std::fmt;
    use std::str::FromStr;

    pub mod biguint {
        use super::*;

        pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
            match n.to_u64() {
                Some(v) => s.serialize_u64(v),
                None => s.serialize_str(&n.to_string()),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
            struct V;
            impl<'de> Visitor<'de> for V {
                type Value = BigUint;
                fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                    write!(f, "a non-negative integer or decimal string")
                }
                fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigUint, E> {
                    Ok(BigUint::from(v))
                }
                fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigUint, E> {
                    u64::try_from(v)
                        .map(BigUint::from)
                        .map_err(|_| E::custom("expected a non-negative integer"))
                }
                fn visit_f64<E: de::Error>(self, _: f64) -> Result<BigUint, E> {
                    Err(E::custom(
                        "integer too large for a JSON number; use a decimal string",
                    ))
                }
                fn visit_str<E: de::Error>(self, v: &str) -> Result<BigUint, E> {
                    BigUint::from_str(v).map_err(E::custom)
                }
            }
            d.deserialize_any(V)
        }
    }

    pub mod bigint {
        use super::*;

        pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
            match n.to_i64() {
                Some(v) => s.serialize_i64(v),
                None => s.serialize_str(&n.to_string()),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
            struct V;
            impl<'de> Visitor<'de> for V {
                type Value = BigInt;
                fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                    write!(f, "an integer or decimal string")
                }
                fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
                    Ok(BigInt::from(v))
                }
                fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
                    Ok(BigInt::from(v))
                }
                fn visit_f64<E: de::Error>(self, _: f64) -> Result<BigInt, E> {
                    Err(E::custom(
                        "integer too large for a JSON number; use a decimal string",
                    ))
                }
                fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
                    BigInt::from_str(v).map_err(E::custom)
                }
            }
            d.deserialize_any(V)
        }
    }
}
