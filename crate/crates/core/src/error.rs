//! Crate-wide error type.

use crate::space::Vector;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid system descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("dimension mismatch: vector has (m,n)=({got_m},{got_n}), expected ({want_m},{want_n})")]
    DimensionMismatch {
        got_m: usize,
        got_n: usize,
        want_m: usize,
        want_n: usize,
    },

    #[error("symbol index out of range: {0}")]
    SymbolOutOfRange(String),

    #[error("sgn is only defined on the support: {symbol} has zero coefficient in {vector}")]
    SymbolNotInSupport { symbol: String, vector: String },

    #[error("not a root of the system: {0}")]
    NotARoot(Vector),

    #[error("reflection axis is isotropic for the tagged form: {0}")]
    IsotropicReflection(Vector),

    #[error("reflection image is not integral for axis {0}")]
    NonIntegralImage(Vector),

    #[error("invalid operator arguments: {0}")]
    InvalidOperator(String),

    #[error("invalid canonical parameters: {0}")]
    InvalidParams(String),

    #[error("base has {got} elements, expected m+n+1 = {expected}")]
    WrongCardinality { got: usize, expected: usize },

    #[error("base elements are linearly dependent")]
    Dependent,

    #[error("base does not verify at cutoff: witness {witness}")]
    UnverifiedBase { witness: Vector },

    #[error("base is not of a recognized canonical form")]
    Uncertified,

    #[error("bases are not conjugate: {0}")]
    NotConjugate(String),

    #[error("out of scope for this operation: {0}")]
    OutOfScope(String),

    #[error("candidate budget exceeded: {candidates} subsets > budget {budget}")]
    BudgetExceeded { candidates: u128, budget: u128 },

    #[error("parse error: {0}")]
    Parse(String),
}
