//! Truncated multivariate power series.

use super::monomial::Monomial;
use super::poly::{Ambient, MPoly};
use super::scalar::Field;
use super::AlgebraError;

/// A power series known up to (and including) total degree `truncation`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<F: Field> {
    poly: MPoly<F>,
    truncation: u32,
}

impl<F: Field> TruncSeries<F> {
    pub fn from_poly(p: &MPoly<F>, truncation: u32) -> Self {
        TruncSeries { poly: p.truncated(truncation), truncation }
    }

    pub fn one(ambient: &Ambient, truncation: u32) -> Self {
        TruncSeries { poly: MPoly::one(ambient), truncation }
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn ambient(&self) -> &Ambient {
        self.poly.ambient()
    }

    pub fn as_poly(&self) -> &MPoly<F> {
        &self.poly
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.poly.coeff(m)
    }

    pub fn coeff_of(&self, exps: &[u32]) -> F {
        self.poly.coeff_of(exps)
    }

    pub fn add(&self, other: &Self) -> Self {
        let t = self.truncation.min(other.truncation);
        TruncSeries { poly: (&self.poly + &other.poly).truncated(t), truncation: t }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let t = self.truncation.min(other.truncation);
        TruncSeries { poly: (&self.poly - &other.poly).truncated(t), truncation: t }
    }

    /// Product with every term above the truncation discarded.
    pub fn mul(&self, other: &Self) -> Self {
        let t = self.truncation.min(other.truncation);
        let mut out = MPoly::zero(self.poly.ambient());
        for (m1, c1) in self.poly.terms() {
            let d1 = m1.degree();
            if d1 > t {
                continue;
            }
            for (m2, c2) in other.poly.terms() {
                if d1 + m2.degree() <= t {
                    out.add_term(m1.mul(m2), c1.clone() * c2.clone());
                }
            }
        }
        TruncSeries { poly: out, truncation: t }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.ambient(), self.truncation);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse up to the truncation degree.
    ///
    /// Writes `u = c (1 - w)` with `w` free of constant term and sums the
    /// geometric series in `w`.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        let c = self.poly.constant_term();
        if c.is_zero() {
            return Err(AlgebraError::NotAUnit);
        }
        let cinv = c.inv();
        let amb = self.ambient().clone();
        let one = Self::one(&amb, self.truncation);
        let w = one.sub(&TruncSeries { poly: self.poly.scale(&cinv), truncation: self.truncation });
        let mut acc = one.clone();
        let mut power = one;
        for _ in 0..self.truncation {
            power = power.mul(&w);
            if power.poly.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(TruncSeries { poly: acc.poly.scale(&cinv), truncation: self.truncation })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use crate::{q, Series};

    #[test]
    fn geometric_series() {
        let a = Ambient::new(&["x"]);
        let u = Series::from_poly(&parse_poly("1-x", &a).unwrap(), 3);
        let inv = u.inverse().unwrap();
        assert_eq!(inv.as_poly(), &parse_poly("1+x+x^2+x^3", &a).unwrap());
    }

    #[test]
    fn constant_inverse() {
        let a = Ambient::new(&["x"]);
        let u = Series::from_poly(&parse_poly("2", &a).unwrap(), 2);
        assert_eq!(u.inverse().unwrap().as_poly().constant_term(), q(1) / q(2));
    }

    #[test]
    fn two_variable_inverse_multiplies_back() {
        let a = Ambient::new(&["x", "y"]);
        let u = Series::from_poly(&parse_poly("1+x+y", &a).unwrap(), 2);
        let inv = u.inverse().unwrap();
        assert_eq!(inv.as_poly(), &parse_poly("1-x-y+x^2+2*x*y+y^2", &a).unwrap());
        assert_eq!(inv.mul(&u).as_poly(), &parse_poly("1", &a).unwrap());
    }

    #[test]
    fn non_unit_is_rejected() {
        let a = Ambient::new(&["x"]);
        let u = Series::from_poly(&parse_poly("x", &a).unwrap(), 2);
        assert!(matches!(u.inverse(), Err(AlgebraError::NotAUnit)));
    }

    #[test]
    fn binomial_coefficient_from_series() {
        let a = Ambient::new(&["x", "y"]);
        let s = Series::from_poly(&parse_poly("(x+y)^3", &a).unwrap(), 5);
        assert_eq!(s.coeff_of(&[2, 1]), q(3));
    }
}
