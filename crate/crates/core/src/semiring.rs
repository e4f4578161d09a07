//! A common interface over the built-in (infinite) semirings and finite
//! table-driven semirings, so matrix algebra can be written once.

use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use crate::finite::FiniteSemiring;
use crate::value::{SemiringId, Value};

/// Runtime descriptor of a semiring together with its element type.
///
/// Matrices are parameterized over an implementor of this trait: the
/// built-in semirings use [`Value`] elements, finite semirings use element
/// indices into their tables.
pub trait Semiring: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + Eq + Ord + Hash + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn contains(&self, x: &Self::Elem) -> bool;
    fn render(&self, x: &Self::Elem) -> String;

    fn is_zero(&self, x: &Self::Elem) -> bool {
        *x == self.zero()
    }

    fn is_one(&self, x: &Self::Elem) -> bool {
        *x == self.one()
    }
}

impl Semiring for SemiringId {
    type Elem = Value;

    fn zero(&self) -> Value {
        SemiringId::zero(*self)
    }

    fn one(&self) -> Value {
        SemiringId::one(*self)
    }

    fn add(&self, x: &Value, y: &Value) -> Value {
        self.add_raw(x, y)
    }

    fn mul(&self, x: &Value, y: &Value) -> Value {
        self.mul_raw(x, y)
    }

    fn contains(&self, x: &Value) -> bool {
        SemiringId::contains(*self, x)
    }

    fn render(&self, x: &Value) -> String {
        x.to_string()
    }
}

/// Shared handle to a finite semiring; elements are table indices.
pub type FinRing = Arc<FiniteSemiring>;

impl Semiring for FinRing {
    type Elem = usize;

    fn zero(&self) -> usize {
        FiniteSemiring::zero(self)
    }

    fn one(&self) -> usize {
        FiniteSemiring::one(self)
    }

    fn add(&self, x: &usize, y: &usize) -> usize {
        FiniteSemiring::add(self, *x, *y)
    }

    fn mul(&self, x: &usize, y: &usize) -> usize {
        FiniteSemiring::mul(self, *x, *y)
    }

    fn contains(&self, x: &usize) -> bool {
        *x < self.size()
    }

    fn render(&self, x: &usize) -> String {
        self.label(*x).to_string()
    }
}
