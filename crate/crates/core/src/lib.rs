//! Reachability problems for finitely generated matrix semigroups over
//! semirings: can a product of given generator matrices attain a prescribed
//! matrix, map a vector onto another, evaluate a bilinear form to a scalar,
//! or place a scalar in the top-right corner?
//!
//! The crate provides:
//!
//! * exact matrix algebra over nine built-in semirings (max-plus and
//!   friends, the naturals, the integers) and over finite table-driven
//!   semirings,
//! * a decision procedure for the semirings whose elements can be separated
//!   by morphisms onto finite quotients (truncation quotients), with exact
//!   witness recovery and DFA extraction,
//! * instance transformations: word-mode conversions, corner/scalar
//!   equivalence, alphabet-reduction to two generators, problem-to-problem
//!   reductions, projective lifts, and a Post-correspondence encoding into
//!   integer vector mortality — each with witness translation,
//! * a bounded brute-force oracle for cross-validation, and
//! * a command-line front end over a plain-text instance format.

pub mod automaton;
pub mod bundle;
pub mod decide;
pub mod embed;
pub mod error;
pub mod finite;
pub mod instance;
pub mod matrix;
pub mod oracle;
pub mod paterson;
pub mod reduce;
pub mod semiring;
pub mod value;
pub mod witness;

pub use error::{AlgebraError, DecideError, ParseError, ReductionError, SemiringError, WitnessMapError};
pub use finite::{product_semiring, truncation_quotient, truncation_quotient_at, FiniteSemiring, QuotientMap};
pub use instance::{Decision, Instance, Payload, ProblemKind, WordMode};
pub use matrix::{proportional, zmax_norm, Mat, Morphism};
pub use semiring::{FinRing, Semiring};
pub use value::{negate_value, sr_add, sr_mul, SemiringId, Value, ALL_SEMIRINGS, SEPARABLE_SEMIRINGS};
pub use witness::Witness;
