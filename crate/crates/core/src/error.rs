use thiserror::Error;

use crate::gf::{FieldElem, Level};
use crate::linalg::Matrix;

/// Errors raised by field, code and diagram operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("level mismatch: {0}")]
    LevelMismatch(String),
    #[error("tower has no {0:?} level")]
    MissingLevel(Level),
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("invalid field element: {0}")]
    InvalidElement(String),
    #[error("polynomial is not irreducible over its base field")]
    NotIrreducible,
    #[error("no element whose norm has order q-1 was found")]
    NotFound,
    #[error("lambda rejected: {0}")]
    BadLambda(String),
    #[error("modulus does not match the tower's top extension")]
    ModulusMismatch,
    #[error("entry has a pole at the reduction modulus")]
    NotReducible,
    #[error("evaluation points are not pairwise distinct")]
    DuplicatePoints,
    #[error("evaluation points are linearly dependent")]
    DependentPoints,
    #[error("bad dimension: {0}")]
    BadDimension(String),
    #[error("reduction degree {r} is below q-1 = {min}")]
    DegreeTooSmall { r: usize, min: usize },
    #[error("enumeration of {needed} classes exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("eta has norm (-1)^(nk); the twisted code would not be MRD")]
    BadEta,
    #[error("twist automorphism exponent s = {s} is not coprime to m = {m}")]
    BadTwist { s: usize, m: usize },
    #[error("twist exponent h = {h} makes the code only semilinear; use the evaluation oracle")]
    UnsupportedTwist { h: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("matrix shape does not match the diagram: {0}")]
    ShapeMismatch(String),
    #[error("profile violates the construction hypotheses: {0}")]
    ProfileViolation(String),
    #[error("pivot block {block} is singular")]
    EliminationFailure { block: usize },
    #[error("field too small: {0}")]
    FieldTooSmall(String),
    #[error("distance {d} out of range for a diagram with {columns} columns")]
    BadDistance { d: usize, columns: usize },
    #[error("basis codeword {index} leaves the requested diagram")]
    ShapeNotAchieved {
        index: usize,
        witness: Box<Matrix<FieldElem>>,
    },
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
