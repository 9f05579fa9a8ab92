use thiserror::Error;

use crate::algebra::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("domain error: {0}")]
    Domain(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    /// `p(b, a, -)` vanished identically, so the fiber is infinite.
    #[error("degenerate fiber at b = {b:?}, a = {a:?}")]
    Degenerate { b: Vec<Rational>, a: Vec<Rational> },
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("input is not in normal form: {0}")]
    NotNormalized(String),
    #[error("contract violation: {0}")]
    Contract(String),
    /// Malformed input, located by a JSON pointer.
    #[error("parse error at {pointer:?}: {message}")]
    Parse { pointer: String, message: String },
    #[error("guard violated at {point:?}: {reason}")]
    Guard { point: Vec<Rational>, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
