//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemiringError {
    #[error("value {value} is not in the carrier of {semiring}")]
    DomainViolation {
        semiring: &'static str,
        value: String,
    },
    /// No separating quotient construction exists for this semiring; its
    /// reachability problems are undecidable.
    #[error("no separating finite quotient exists for {semiring}")]
    SeparationUnavailable { semiring: &'static str },
    #[error("finite semiring axiom violated: {0}")]
    AxiomViolation(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("semiring mismatch between operands")]
    SemiringMismatch,
    #[error("letter {letter} out of range 1..={letters}")]
    LetterOutOfRange { letter: usize, letters: usize },
    #[error("operation unsupported over {semiring}: {reason}")]
    Unsupported {
        semiring: &'static str,
        reason: &'static str,
    },
    /// BFS over an automaton's matrices met an entry outside {0, 1}; the
    /// automaton is not unambiguous.
    #[error("ambiguity violation: {0}")]
    AmbiguityViolation(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown semiring id `{0}`")]
    UnknownSemiring(String),
    #[error("carrier violation at line {line}, column {col}: {msg}")]
    Carrier { line: usize, col: usize, msg: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("validation error: {0}")]
    Validation(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("reduction requires a {expected} instance, got {got}")]
    WrongKind {
        expected: &'static str,
        got: &'static str,
    },
    #[error("reduction requires plus word mode; convert with plus_star_convert first")]
    NeedsPlusMode,
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessMapError {
    #[error("sub-instance index {0} out of range")]
    BadIndex(usize),
    #[error("witness does not fit the map: {0}")]
    Shape(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecideError {
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("inconsistent instance: {0}")]
    Inconsistent(String),
}
