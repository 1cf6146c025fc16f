use thiserror::Error;

use crate::series::Puncture;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("series directions differ: {0:?} vs {1:?}")]
    DirectionMismatch(Puncture, Puncture),

    #[error("exponent {exponent} lies outside the validity window (valid_to = {valid_to}, {direction:?})")]
    OutsideWindow {
        exponent: i64,
        valid_to: i64,
        direction: Puncture,
    },

    #[error("residue requested but the truncation window does not reach t^-1 (valid_to = {valid_to})")]
    ResidueOutsideWindow { valid_to: i64 },

    #[error("empty comparison window: truncation bound {valid_to} does not reach leading exponent {leading}")]
    EmptyWindow { valid_to: i64, leading: i64 },

    #[error("basis index {index} out of range for algebra of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("Witt bracket called on an element with a central coordinate")]
    CentralInWitt,

    #[error("h(0) eigenvalue is not set for this module")]
    UnsetZeroMode,

    #[error("operation not supported by this module: {0}")]
    KindMismatch(String),

    #[error("invalid module specification: {0}")]
    InvalidModule(String),

    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),

    #[error("cannot parse expression: {0}")]
    ParseExpr(String),

    #[error("invalid algebra definition: {0}")]
    Algebra(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
