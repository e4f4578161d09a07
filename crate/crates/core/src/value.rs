//! Scalar values and the built-in semirings.
//!
//! A [`Value`] is an element of one of the nine built-in semirings listed in
//! [`SemiringId`]. Values are unbounded integers extended with the special
//! elements `+inf`, `-inf` and `omega`; which of those belong to the carrier
//! depends on the semiring.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero as NumZero};
use std::fmt;
use std::str::FromStr;

use crate::error::SemiringError;

/// An element of (the carrier of) one of the built-in semirings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    /// A finite integer (unbounded precision).
    Fin(BigInt),
    /// `+inf`.
    PosInf,
    /// `-inf`.
    NegInf,
    /// `omega`, admissible only in Leung's semiring.
    Omega,
}

impl Value {
    pub fn int(v: i64) -> Value {
        Value::Fin(BigInt::from(v))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Value::Fin(_))
    }

    pub fn as_fin(&self) -> Option<&BigInt> {
        match self {
            Value::Fin(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Fin(v) => write!(f, "{}", v),
            Value::PosInf => write!(f, "+inf"),
            Value::NegInf => write!(f, "-inf"),
            Value::Omega => write!(f, "omega"),
        }
    }
}

impl FromStr for Value {
    type Err = String;

    /// Parses an element token: a decimal integer with optional leading `-`,
    /// `+inf`, `-inf`, or `omega`.
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "+inf" => Ok(Value::PosInf),
            "-inf" => Ok(Value::NegInf),
            "omega" => Ok(Value::Omega),
            _ => BigInt::from_str(s)
                .map(Value::Fin)
                .map_err(|_| format!("invalid element token `{}`", s)),
        }
    }
}

/// Identifier of a built-in semiring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SemiringId {
    /// (Z ∪ {-inf}, max, +), the max-plus semiring.
    Zmax,
    /// (Z ∪ {+inf}, min, +), isomorphic to Zmax by a change of sign.
    Zmin,
    /// (N ∪ {+inf}, min, +), the tropical semiring.
    Nmin,
    /// (N ∪ {-inf}, max, +), the boreal semiring.
    Nmax,
    /// (N ∪ {±inf}, max, +) with (+inf) + (-inf) = -inf.
    NbarMax,
    /// (N ∪ {omega, +inf}, min, +), ordered 0 < 1 < ... < omega < +inf,
    /// with a + omega = max(a, omega).
    Leung,
    /// (N, +, ×).
    Nat,
    /// (N ∪ {+inf}, +, ×) with 0 × (+inf) = 0.
    NatBar,
    /// (Z, +, ×), the ring of integers.
    Zring,
}

pub const ALL_SEMIRINGS: [SemiringId; 9] = [
    SemiringId::Zmax,
    SemiringId::Zmin,
    SemiringId::Nmin,
    SemiringId::Nmax,
    SemiringId::NbarMax,
    SemiringId::Leung,
    SemiringId::Nat,
    SemiringId::NatBar,
    SemiringId::Zring,
];

/// The semirings that admit a truncation quotient (and hence a decider).
pub const SEPARABLE_SEMIRINGS: [SemiringId; 6] = [
    SemiringId::Nmin,
    SemiringId::Nmax,
    SemiringId::NbarMax,
    SemiringId::Leung,
    SemiringId::Nat,
    SemiringId::NatBar,
];

impl SemiringId {
    pub fn name(self) -> &'static str {
        match self {
            SemiringId::Zmax => "zmax",
            SemiringId::Zmin => "zmin",
            SemiringId::Nmin => "nmin",
            SemiringId::Nmax => "nmax",
            SemiringId::NbarMax => "nbarmax",
            SemiringId::Leung => "leung",
            SemiringId::Nat => "nat",
            SemiringId::NatBar => "natbar",
            SemiringId::Zring => "zring",
        }
    }

    pub fn parse(name: &str) -> Option<SemiringId> {
        ALL_SEMIRINGS.iter().copied().find(|s| s.name() == name)
    }

    /// Whether the carrier admits a separating quotient onto a finite semiring.
    pub fn is_separable(self) -> bool {
        SEPARABLE_SEMIRINGS.contains(&self)
    }

    /// True when finite carrier elements are restricted to the naturals.
    pub fn natural_only(self) -> bool {
        !matches!(self, SemiringId::Zmax | SemiringId::Zmin | SemiringId::Zring)
    }

    /// Carrier membership test.
    pub fn contains(self, v: &Value) -> bool {
        match v {
            Value::Fin(x) => !self.natural_only() || !x.is_negative(),
            Value::PosInf => matches!(
                self,
                SemiringId::Zmin
                    | SemiringId::Nmin
                    | SemiringId::NbarMax
                    | SemiringId::Leung
                    | SemiringId::NatBar
            ),
            Value::NegInf => matches!(
                self,
                SemiringId::Zmax | SemiringId::Nmax | SemiringId::NbarMax
            ),
            Value::Omega => matches!(self, SemiringId::Leung),
        }
    }

    /// The additive identity.
    pub fn zero(self) -> Value {
        match self {
            SemiringId::Zmax | SemiringId::Nmax | SemiringId::NbarMax => Value::NegInf,
            SemiringId::Zmin | SemiringId::Nmin | SemiringId::Leung => Value::PosInf,
            SemiringId::Nat | SemiringId::NatBar | SemiringId::Zring => {
                Value::Fin(BigInt::zero())
            }
        }
    }

    /// The multiplicative identity.
    pub fn one(self) -> Value {
        match self {
            SemiringId::Nat | SemiringId::NatBar | SemiringId::Zring => {
                Value::Fin(BigInt::one())
            }
            _ => Value::Fin(BigInt::zero()),
        }
    }

    /// x ⊕ y. Both arguments must be in the carrier.
    pub(crate) fn add_raw(self, x: &Value, y: &Value) -> Value {
        match self {
            SemiringId::Zmax | SemiringId::Nmax | SemiringId::NbarMax => {
                if max_order_le(x, y) {
                    y.clone()
                } else {
                    x.clone()
                }
            }
            SemiringId::Zmin | SemiringId::Nmin => {
                if max_order_le(x, y) {
                    x.clone()
                } else {
                    y.clone()
                }
            }
            SemiringId::Leung => {
                if leung_le(x, y) {
                    x.clone()
                } else {
                    y.clone()
                }
            }
            SemiringId::Nat | SemiringId::Zring => arith_add(x, y),
            SemiringId::NatBar => match (x, y) {
                (Value::PosInf, _) | (_, Value::PosInf) => Value::PosInf,
                _ => arith_add(x, y),
            },
        }
    }

    /// x ⊗ y. Both arguments must be in the carrier.
    pub(crate) fn mul_raw(self, x: &Value, y: &Value) -> Value {
        match self {
            // Additive-group semirings: ⊗ is +, the zero element absorbs.
            SemiringId::Zmax | SemiringId::Nmax => match (x, y) {
                (Value::NegInf, _) | (_, Value::NegInf) => Value::NegInf,
                _ => arith_add(x, y),
            },
            SemiringId::Zmin | SemiringId::Nmin => match (x, y) {
                (Value::PosInf, _) | (_, Value::PosInf) => Value::PosInf,
                _ => arith_add(x, y),
            },
            // (+inf)+(-inf) = -inf: the -inf arm comes first.
            SemiringId::NbarMax => match (x, y) {
                (Value::NegInf, _) | (_, Value::NegInf) => Value::NegInf,
                (Value::PosInf, _) | (_, Value::PosInf) => Value::PosInf,
                _ => arith_add(x, y),
            },
            // a + omega = max(a, omega) in the order 0 < 1 < ... < omega < +inf.
            SemiringId::Leung => match (x, y) {
                (Value::PosInf, _) | (_, Value::PosInf) => Value::PosInf,
                (Value::Omega, _) | (_, Value::Omega) => Value::Omega,
                _ => arith_add(x, y),
            },
            SemiringId::Nat | SemiringId::Zring => arith_mul(x, y),
            // 0 × (+inf) = 0.
            SemiringId::NatBar => match (x, y) {
                (Value::Fin(a), _) if a.is_zero() => Value::Fin(BigInt::zero()),
                (_, Value::Fin(b)) if b.is_zero() => Value::Fin(BigInt::zero()),
                (Value::PosInf, _) | (_, Value::PosInf) => Value::PosInf,
                _ => arith_mul(x, y),
            },
        }
    }
}

fn arith_add(x: &Value, y: &Value) -> Value {
    match (x, y) {
        (Value::Fin(a), Value::Fin(b)) => Value::Fin(a + b),
        _ => panic!("arithmetic + on non-finite values {x} and {y}"),
    }
}

fn arith_mul(x: &Value, y: &Value) -> Value {
    match (x, y) {
        (Value::Fin(a), Value::Fin(b)) => Value::Fin(a * b),
        _ => panic!("arithmetic × on non-finite values {x} and {y}"),
    }
}

/// The order -inf < finite < +inf used by the max/min semirings.
fn max_order_le(x: &Value, y: &Value) -> bool {
    match (x, y) {
        (Value::NegInf, _) => true,
        (_, Value::NegInf) => false,
        (_, Value::PosInf) => true,
        (Value::PosInf, _) => false,
        (Value::Fin(a), Value::Fin(b)) => a <= b,
        _ => panic!("omega has no place in the max order"),
    }
}

/// The order 0 < 1 < ... < omega < +inf of Leung's semiring.
fn leung_le(x: &Value, y: &Value) -> bool {
    match (x, y) {
        (_, Value::PosInf) => true,
        (Value::PosInf, _) => false,
        (_, Value::Omega) => true,
        (Value::Omega, _) => false,
        (Value::Fin(a), Value::Fin(b)) => a <= b,
        _ => panic!("-inf has no place in Leung's order"),
    }
}

/// Checked semiring addition.
pub fn sr_add(s: SemiringId, x: &Value, y: &Value) -> Result<Value, SemiringError> {
    check_carrier(s, x)?;
    check_carrier(s, y)?;
    Ok(s.add_raw(x, y))
}

/// Checked semiring multiplication.
pub fn sr_mul(s: SemiringId, x: &Value, y: &Value) -> Result<Value, SemiringError> {
    check_carrier(s, x)?;
    check_carrier(s, y)?;
    Ok(s.mul_raw(x, y))
}

pub fn check_carrier(s: SemiringId, v: &Value) -> Result<(), SemiringError> {
    if s.contains(v) {
        Ok(())
    } else {
        Err(SemiringError::DomainViolation {
            semiring: s.name(),
            value: v.to_string(),
        })
    }
}

/// Negates a value, exchanging +inf and -inf. This realizes the sign-change
/// isomorphism between `zmax` and `zmin`.
pub fn negate_value(v: &Value) -> Result<Value, SemiringError> {
    match v {
        Value::Fin(a) => Ok(Value::Fin(-a)),
        Value::PosInf => Ok(Value::NegInf),
        Value::NegInf => Ok(Value::PosInf),
        Value::Omega => Err(SemiringError::DomainViolation {
            semiring: "negation",
            value: "omega".into(),
        }),
    }
}
