//! Exact residue invariants of one-dimensional foliations that are
//! logarithmic along free divisors.
//!
//! The core is generic over the coefficient [`algebra::Field`]; the aliases
//! below fix it to exact rationals, which is what every residue computation
//! uses.

pub mod algebra;
pub mod chern;
pub mod foliation;
pub mod ideals;
pub mod residues;
pub mod scene;
pub mod surfaces;

use num_bigint::BigInt;

pub type Rational = num_rational::BigRational;
pub type Poly = algebra::MPoly<Rational>;
pub type Series = algebra::TruncSeries<Rational>;

/// Integer as an exact rational.
pub fn q(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}
