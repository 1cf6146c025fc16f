//! Exact algebra for three-point current algebras, their loop embeddings,
//! Fock space realizations and the associated Virasoro-like mode algebra.

pub mod error;
pub mod expr;
pub mod fock;
pub mod lambda;
pub mod lie;
pub mod loops;
pub mod scalar;
mod serde_util;
pub mod report;
pub mod series;
pub mod suite;
pub mod threepoint;
pub mod virasoro;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use series::{Puncture, TruncSeries};
