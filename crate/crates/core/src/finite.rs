//! Finite semirings given by explicit operation tables, and the truncation
//! quotients that separate elements of the built-in semirings.
//!
//! The truncation quotient at threshold `n` identifies all naturals `>= n`
//! into a single class `T` and keeps every other carrier element in a class
//! of its own. This is a semiring congruence for every built-in semiring
//! whose finite elements are naturals, and it separates any finite set of
//! values below the threshold.

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, ToPrimitive};

use crate::error::SemiringError;
use crate::value::{SemiringId, Value};

/// A finite semiring with explicit addition and multiplication tables.
///
/// Elements are indices `0..size`. Construction verifies all semiring axioms
/// by exhaustive scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSemiring {
    labels: Vec<String>,
    add: Vec<usize>,
    mul: Vec<usize>,
    zero: usize,
    one: usize,
}

impl FiniteSemiring {
    pub fn new(
        labels: Vec<String>,
        add: Vec<usize>,
        mul: Vec<usize>,
        zero: usize,
        one: usize,
    ) -> Result<Self, SemiringError> {
        let m = labels.len();
        if add.len() != m * m || mul.len() != m * m || zero >= m || one >= m {
            return Err(SemiringError::AxiomViolation(
                "table dimensions do not match element count".into(),
            ));
        }
        let sr = FiniteSemiring {
            labels,
            add,
            mul,
            zero,
            one,
        };
        sr.verify_axioms()?;
        Ok(sr)
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.size() + y]
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.size() + y]
    }

    /// Exhaustively scans every semiring axiom; `Err` carries the first
    /// violated law.
    pub fn verify_axioms(&self) -> Result<(), SemiringError> {
        let m = self.size();
        let fail = |msg: String| Err(SemiringError::AxiomViolation(msg));
        for x in 0..m {
            if self.add(x, self.zero) != x || self.add(self.zero, x) != x {
                return fail(format!("0 is not an additive identity at {x}"));
            }
            if self.mul(x, self.one) != x || self.mul(self.one, x) != x {
                return fail(format!("1 is not a multiplicative identity at {x}"));
            }
            if self.mul(x, self.zero) != self.zero || self.mul(self.zero, x) != self.zero {
                return fail(format!("0 is not absorbing at {x}"));
            }
        }
        for x in 0..m {
            for y in 0..m {
                if self.add(x, y) != self.add(y, x) {
                    return fail(format!("addition not commutative at ({x},{y})"));
                }
            }
        }
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    if self.add(self.add(x, y), z) != self.add(x, self.add(y, z)) {
                        return fail(format!("addition not associative at ({x},{y},{z})"));
                    }
                    if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                        return fail(format!("multiplication not associative at ({x},{y},{z})"));
                    }
                    if self.mul(x, self.add(y, z)) != self.add(self.mul(x, y), self.mul(x, z)) {
                        return fail(format!("left distributivity fails at ({x},{y},{z})"));
                    }
                    if self.mul(self.add(x, y), z) != self.add(self.mul(x, z), self.mul(y, z)) {
                        return fail(format!("right distributivity fails at ({x},{y},{z})"));
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for FiniteSemiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "finite semiring {{{}}}", self.labels.join(", "))
    }
}

/// The canonical morphism from a built-in semiring onto a truncation quotient.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    source: SemiringId,
    threshold: usize,
    target: Arc<FiniteSemiring>,
}

impl QuotientMap {
    pub fn source(&self) -> SemiringId {
        self.source
    }

    /// The threshold `n`: all finite naturals `>= n` collapse to the class T.
    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn target(&self) -> &Arc<FiniteSemiring> {
        &self.target
    }

    /// Applies the quotient morphism to a carrier element.
    pub fn apply(&self, v: &Value) -> Result<usize, SemiringError> {
        crate::value::check_carrier(self.source, v)?;
        Ok(self.index_of(v))
    }

    fn index_of(&self, v: &Value) -> usize {
        let n = self.threshold;
        match v {
            Value::Fin(k) => match k.to_usize() {
                Some(k) if k < n => k,
                _ => n, // class T
            },
            special => {
                let specials = special_elements(self.source);
                let pos = specials
                    .iter()
                    .position(|s| s == special)
                    .expect("carrier-checked special element");
                n + 1 + pos
            }
        }
    }

    /// A carrier element representing the class `x`.
    pub fn representative(&self, x: usize) -> Value {
        let n = self.threshold;
        if x < n {
            Value::Fin(x.into())
        } else if x == n {
            Value::Fin(n.into())
        } else {
            special_elements(self.source)[x - n - 1].clone()
        }
    }
}

/// The non-natural carrier elements of a separable semiring, in label order.
fn special_elements(s: SemiringId) -> &'static [Value] {
    match s {
        SemiringId::Nmin | SemiringId::NatBar => &[Value::PosInf],
        SemiringId::Nmax => &[Value::NegInf],
        SemiringId::NbarMax => &[Value::NegInf, Value::PosInf],
        SemiringId::Leung => &[Value::Omega, Value::PosInf],
        SemiringId::Nat => &[],
        _ => unreachable!("not a separable semiring"),
    }
}

/// Builds the truncation quotient of `s` separating every element of `b`.
///
/// The threshold is one more than the largest finite natural appearing in
/// `b`, or 1 when `b` contains no finite natural. Carrier elements of the
/// quotient are the classes of `0..n-1`, the collapsed class `T`, and one
/// singleton class per special element of `s`.
pub fn truncation_quotient(
    s: SemiringId,
    b: &[Value],
) -> Result<(Arc<FiniteSemiring>, QuotientMap), SemiringError> {
    if !s.is_separable() {
        return Err(SemiringError::SeparationUnavailable { semiring: s.name() });
    }
    let mut max_nat: Option<usize> = None;
    for v in b {
        crate::value::check_carrier(s, v)?;
        if let Value::Fin(k) = v {
            if !k.is_negative() {
                let k = k.to_usize().ok_or_else(|| {
                    SemiringError::AxiomViolation(format!(
                        "protected value {k} too large for a truncation quotient"
                    ))
                })?;
                max_nat = Some(max_nat.map_or(k, |m| m.max(k)));
            }
        }
    }
    let threshold = max_nat.map_or(1, |m| m + 1);
    build_quotient(s, threshold)
}

/// Builds the truncation quotient of `s` at an explicit threshold `n >= 1`.
pub fn truncation_quotient_at(
    s: SemiringId,
    threshold: usize,
) -> Result<(Arc<FiniteSemiring>, QuotientMap), SemiringError> {
    if !s.is_separable() {
        return Err(SemiringError::SeparationUnavailable { semiring: s.name() });
    }
    if threshold == 0 {
        return Err(SemiringError::AxiomViolation(
            "truncation threshold must be positive".into(),
        ));
    }
    build_quotient(s, threshold)
}

fn build_quotient(
    s: SemiringId,
    threshold: usize,
) -> Result<(Arc<FiniteSemiring>, QuotientMap), SemiringError> {
    let specials = special_elements(s);
    let size = threshold + 1 + specials.len();
    let mut labels: Vec<String> = (0..threshold).map(|k| k.to_string()).collect();
    labels.push("T".into());
    labels.extend(specials.iter().map(|v| v.to_string()));

    // The quotient is a congruence, so tables may be computed on any
    // representatives.
    let proto = QuotientMap {
        source: s,
        threshold,
        // placeholder target; only `index_of`/`representative` are used here
        target: Arc::new(FiniteSemiring {
            labels: Vec::new(),
            add: Vec::new(),
            mul: Vec::new(),
            zero: 0,
            one: 0,
        }),
    };
    let reps: Vec<Value> = (0..size).map(|x| proto.representative(x)).collect();
    let mut add = Vec::with_capacity(size * size);
    let mut mul = Vec::with_capacity(size * size);
    for x in &reps {
        for y in &reps {
            add.push(proto.index_of(&s.add_raw(x, y)));
            mul.push(proto.index_of(&s.mul_raw(x, y)));
        }
    }
    let zero = proto.index_of(&s.zero());
    let one = proto.index_of(&s.one());
    let target = Arc::new(FiniteSemiring::new(labels, add, mul, zero, one)?);
    Ok((
        target.clone(),
        QuotientMap {
            source: s,
            threshold,
            target,
        },
    ))
}

/// Cartesian product of two finite semirings, with entrywise operations.
pub fn product_semiring(f1: &FiniteSemiring, f2: &FiniteSemiring) -> FiniteSemiring {
    let (m1, m2) = (f1.size(), f2.size());
    let size = m1 * m2;
    let pair = |x: usize, y: usize| x * m2 + y;
    let mut labels = Vec::with_capacity(size);
    for x in 0..m1 {
        for y in 0..m2 {
            labels.push(format!("({},{})", f1.label(x), f2.label(y)));
        }
    }
    let mut add = Vec::with_capacity(size * size);
    let mut mul = Vec::with_capacity(size * size);
    for x1 in 0..m1 {
        for y1 in 0..m2 {
            for x2 in 0..m1 {
                for y2 in 0..m2 {
                    add.push(pair(f1.add(x1, x2), f2.add(y1, y2)));
                    mul.push(pair(f1.mul(x1, x2), f2.mul(y1, y2)));
                }
            }
        }
    }
    FiniteSemiring::new(
        labels,
        add,
        mul,
        pair(f1.zero(), f2.zero()),
        pair(f1.one(), f2.one()),
    )
    .expect("product of semirings is a semiring")
}
