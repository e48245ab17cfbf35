//! Coefficient fields.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_traits::{FromPrimitive, Num, Signed};

/// A coefficient field for polynomials, series and Gröbner computations.
///
/// Every exact computation in this crate runs over [`crate::Rational`]; the
/// arithmetic layer is written against this trait so the same code serves
/// `f64` experiments or other exact fields.
pub trait Field: Num + Neg<Output = Self> + FromPrimitive + Clone + PartialEq + Debug + Display + Send + Sync {
    /// Multiplicative inverse. Callers guarantee `self` is nonzero.
    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    /// `self` raised to a non-negative integer power.
    fn powu(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    /// True when the value is negative; used only for pretty printing.
    fn is_negative_for_print(&self) -> bool;
}

impl Field for num_rational::BigRational {
    fn is_negative_for_print(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl Field for f64 {
    fn is_negative_for_print(&self) -> bool {
        *self < 0.0
    }
}

impl Field for f32 {
    fn is_negative_for_print(&self) -> bool {
        *self < 0.0
    }
}

/// Builds a field element from a small integer.
pub fn int<F: Field>(v: i64) -> F {
    F::from_i64(v).expect("integer literal representable in field")
}
