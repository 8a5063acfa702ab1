//! Integers extended with two infinities.
//!
//! Distances, player costs, and swap deltas all live in `Z ∪ {-inf, +inf}`:
//! a disconnected graph has infinite cost, and a swap that disconnects some
//! consistent world has delta `-inf` (while one that helps unboundedly in
//! some world has best-case delta `+inf`). [`ExtInt`] keeps that arithmetic
//! explicit instead of smuggling sentinels through plain integers.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub};

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An integer extended with `-inf` and `+inf`.
///
/// The derived ordering is the numeric one: `NegInf < Fin(x) < PosInf` for
/// every finite `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    /// Negative infinity.
    NegInf,
    /// A finite value.
    Fin(i64),
    /// Positive infinity.
    PosInf,
}

use ExtInt::{Fin, NegInf, PosInf};

impl ExtInt {
    /// Finite zero.
    pub const ZERO: ExtInt = Fin(0);

    /// Whether the value is finite.
    pub fn is_finite(self) -> bool {
        matches!(self, Fin(_))
    }

    /// The finite value, if any.
    pub fn finite(self) -> Option<i64> {
        match self {
            Fin(x) => Some(x),
            _ => None,
        }
    }

    /// The finite value; panics on an infinity.
    ///
    /// Use only where finiteness is an established invariant (e.g. costs in a
    /// graph already known to be connected).
    pub fn unwrap_finite(self) -> i64 {
        match self {
            Fin(x) => x,
            other => panic!("expected a finite value, got {other}"),
        }
    }
}

impl From<i64> for ExtInt {
    fn from(x: i64) -> Self {
        Fin(x)
    }
}

impl From<u32> for ExtInt {
    fn from(x: u32) -> Self {
        Fin(i64::from(x))
    }
}

impl Add for ExtInt {
    type Output = ExtInt;

    /// Extended addition.
    ///
    /// Panics on the indeterminate form `+inf + -inf` and on finite overflow;
    /// both indicate a logic error upstream, never a legitimate game state.
    fn add(self, rhs: ExtInt) -> ExtInt {
        match (self, rhs) {
            (PosInf, NegInf) | (NegInf, PosInf) => {
                panic!("indeterminate sum: +inf + -inf")
            }
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
            (Fin(a), Fin(b)) => Fin(a
                .checked_add(b)
                .expect("finite overflow in ExtInt addition")),
        }
    }
}

impl AddAssign for ExtInt {
    fn add_assign(&mut self, rhs: ExtInt) {
        *self = *self + rhs;
    }
}

impl Neg for ExtInt {
    type Output = ExtInt;

    fn neg(self) -> ExtInt {
        match self {
            PosInf => NegInf,
            NegInf => PosInf,
            Fin(x) => Fin(-x),
        }
    }
}

impl Sub for ExtInt {
    type Output = ExtInt;

    /// Extended subtraction; panics on `+inf - +inf` and `-inf - -inf`.
    fn sub(self, rhs: ExtInt) -> ExtInt {
        self + (-rhs)
    }
}

impl Sum for ExtInt {
    fn sum<I: Iterator<Item = ExtInt>>(iter: I) -> ExtInt {
        iter.fold(ExtInt::ZERO, |acc, x| acc + x)
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegInf => write!(f, "-inf"),
            PosInf => write!(f, "inf"),
            Fin(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for ExtInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Fin(x) => serializer.serialize_i64(*x),
            PosInf => serializer.serialize_str("inf"),
            NegInf => serializer.serialize_str("-inf"),
        }
    }
}

struct ExtIntVisitor;

impl Visitor<'_> for ExtIntVisitor {
    type Value = ExtInt;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "an integer or the string \"inf\"/\"-inf\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtInt, E> {
        Ok(Fin(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtInt, E> {
        i64::try_from(v)
            .map(Fin)
            .map_err(|_| E::custom("integer out of range for ExtInt"))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtInt, E> {
        match v {
            "inf" => Ok(PosInf),
            "-inf" => Ok(NegInf),
            other => Err(E::custom(format!("unrecognized ExtInt string {other:?}"))),
        }
    }
}

impl<'de> Deserialize<'de> for ExtInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<ExtInt, D::Error> {
        deserializer.deserialize_any(ExtIntVisitor)
    }
}
