//! Exact multivariate polynomials over ℚ and quantifier-free semialgebraic
//! descriptions built from their sign conditions.

mod multivariate;
mod semialgebraic;

use thiserror::Error;

use crate::exact_arith::ArithError;

pub use multivariate::{MultivariatePolynomial, TermRecord};
pub use semialgebraic::{Relation, SemialgebraicDescription, SignAtom};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Arith(#[from] ArithError),
}
