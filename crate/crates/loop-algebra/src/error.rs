//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Which direction of a Cayley table failed the Latin-square check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Row,
    Column,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axis::Row => write!(f, "row"),
            Axis::Column => write!(f, "column"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{axis} {index} is not a permutation of 0..n")]
    NotLatinSquare { axis: Axis, index: usize },

    #[error("no two-sided identity element")]
    NoIdentity,

    #[error("element {element} has distinct left and right inverses")]
    NoTwoSidedInverse { element: usize },

    #[error("orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("image vector of length {n} is not a permutation")]
    NotAPermutation { n: usize },

    #[error("syntax error at byte {position}: expected {expected}")]
    Syntax { position: usize, expected: String },

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("order {order} exceeds the budget of {limit}")]
    BudgetExceeded { order: usize, limit: usize },

    #[error("pair {{{a}, {b}}} lies in {count} triples, expected exactly one")]
    NotSteinerSystem { a: usize, b: usize, count: usize },

    #[error("line {line}: {message}")]
    FileFormat { line: usize, message: String },
}
