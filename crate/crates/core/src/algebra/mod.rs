//! Exact arithmetic: polynomials, truncated series and the text syntax.

mod matrix;
mod monomial;
mod parse;
mod poly;
mod scalar;
mod series;

use thiserror::Error;

pub use matrix::{adjugate, det, eval_matrix, identity, mat_vec, principal_minor_sum, PolyMatrix};
pub use monomial::{Monomial, MonomialOrder};
pub use parse::{parse_poly, parse_rational};
pub use poly::{Ambient, MPoly};
pub use scalar::{int, Field};
pub use series::TruncSeries;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("ambient mismatch: {left:?} vs {right:?}")]
    AmbientMismatch { left: Vec<String>, right: Vec<String> },
    #[error("variable index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("parse error at byte {offset}: expected one of {expected:?}, found {found}")]
    Parse { offset: usize, expected: Vec<&'static str>, found: String },
    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("series has zero constant term and is not invertible")]
    NotAUnit,
    #[error("division by the zero polynomial")]
    DivisionByZero,
}
