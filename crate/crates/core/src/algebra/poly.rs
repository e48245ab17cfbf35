//! Sparse multivariate polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::monomial::{Monomial, MonomialOrder};
use super::scalar::Field;
use super::AlgebraError;

/// An ordered list of variable names shared by a family of polynomials.
#[derive(Clone)]
pub struct Ambient(Arc<[String]>);

impl Ambient {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Ambient(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    /// `prefix1 .. prefixn`, e.g. `x1, x2, x3`.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        let names: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        Ambient::new(&names)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// The same names with one extra variable appended.
    pub fn with_extra(&self, name: &str) -> Ambient {
        let mut names: Vec<String> = self.0.to_vec();
        names.push(name.to_string());
        Ambient(names.into())
    }
}

impl PartialEq for Ambient {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Ambient {}

impl fmt::Debug for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// A polynomial with coefficients in `F`, stored as a map from exponent
/// vectors to nonzero coefficients.
#[derive(Clone)]
pub struct MPoly<F> {
    ambient: Ambient,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> PartialEq for MPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.terms == other.terms
    }
}

impl<F: Field> MPoly<F> {
    pub fn zero(ambient: &Ambient) -> Self {
        MPoly { ambient: ambient.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ambient: &Ambient) -> Self {
        Self::constant(ambient, F::one())
    }

    pub fn constant(ambient: &Ambient, c: F) -> Self {
        let mut p = Self::zero(ambient);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ambient.arity()), c);
        }
        p
    }

    /// The variable with index `i`.
    pub fn var(ambient: &Ambient, i: usize) -> Self {
        Self::term(ambient, Monomial::var(ambient.arity(), i, 1), F::one())
    }

    pub fn term(ambient: &Ambient, m: Monomial, c: F) -> Self {
        debug_assert_eq!(m.arity(), ambient.arity());
        let mut p = Self::zero(ambient);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated exponents.
    pub fn from_terms<I>(ambient: &Ambient, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, F)>,
    {
        let mut p = Self::zero(ambient);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn arity(&self) -> usize {
        self.ambient.arity()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, F)> {
        self.terms.into_iter()
    }

    /// Coefficient of the given monomial, zero if absent.
    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn coeff_of(&self, exps: &[u32]) -> F {
        self.coeff(&Monomial::from_exps(exps))
    }

    pub fn constant_term(&self) -> F {
        self.coeff(&Monomial::one(self.arity()))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    /// Minimum total degree of a term (order of vanishing at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Common weighted degree when all terms share it.
    pub fn weighted_homogeneous_degree(&self, weights: &[u32]) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| m.weighted_degree(weights));
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    /// `self += c * m * other`.
    pub fn add_scaled(&mut self, other: &MPoly<F>, c: &F, m: &Monomial) {
        if c.is_zero() {
            return;
        }
        for (om, oc) in &other.terms {
            self.add_term(om.mul(m), oc.clone() * c.clone());
        }
    }

    pub fn scale(&self, c: &F) -> MPoly<F> {
        if c.is_zero() {
            return Self::zero(&self.ambient);
        }
        MPoly {
            ambient: self.ambient.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c.clone())).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &F) -> MPoly<F> {
        if c.is_zero() {
            return Self::zero(&self.ambient);
        }
        MPoly {
            ambient: self.ambient.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone() * c.clone())).collect(),
        }
    }

    fn check_ambient(&self, other: &MPoly<F>) -> Result<(), AlgebraError> {
        if self.ambient == other.ambient {
            Ok(())
        } else {
            Err(AlgebraError::AmbientMismatch {
                left: self.ambient.names().to_vec(),
                right: other.ambient.names().to_vec(),
            })
        }
    }

    pub fn try_add(&self, other: &MPoly<F>) -> Result<MPoly<F>, AlgebraError> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MPoly<F>) -> Result<MPoly<F>, AlgebraError> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MPoly<F>) -> Result<MPoly<F>, AlgebraError> {
        self.check_ambient(other)?;
        let mut out = Self::zero(&self.ambient);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> MPoly<F> {
        let mut acc = Self::one(&self.ambient);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn derive(&self, var: usize) -> Result<MPoly<F>, AlgebraError> {
        if var >= self.arity() {
            return Err(AlgebraError::IndexOutOfRange { index: var, arity: self.arity() });
        }
        let mut out = Self::zero(&self.ambient);
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e > 0 {
                let mut dm = m.clone();
                dm.set(var, e - 1);
                out.add_term(dm, c.clone() * F::from_u32(e).expect("exponent in field"));
            }
        }
        Ok(out)
    }

    /// Partial derivative; panics when `var` is out of range.
    pub fn d(&self, var: usize) -> MPoly<F> {
        self.derive(var).expect("derivative index within arity")
    }

    /// Exact evaluation at a point.
    pub fn eval(&self, point: &[F]) -> F {
        assert_eq!(point.len(), self.arity(), "evaluation point has wrong length");
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exps()) {
                if e > 0 {
                    t = t * x.powu(e);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Substitutes polynomials (over a possibly different ambient) for every
    /// variable.
    pub fn compose(&self, values: &[MPoly<F>], target: &Ambient) -> MPoly<F> {
        assert_eq!(values.len(), self.arity());
        let mut cache: Vec<Vec<MPoly<F>>> = values.iter().map(|v| vec![MPoly::one(target), v.clone()]).collect();
        let mut out = MPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let powers = &mut cache[i];
                while powers.len() <= e as usize {
                    let next = &powers[powers.len() - 1] * &powers[1];
                    powers.push(next);
                }
                t = &t * &powers[e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// `p(z + shift)`: re-centres the polynomial at `shift`.
    pub fn translate(&self, shift: &[F]) -> MPoly<F> {
        let amb = self.ambient.clone();
        let values: Vec<MPoly<F>> =
            (0..self.arity()).map(|i| &MPoly::var(&amb, i) + &MPoly::constant(&amb, shift[i].clone())).collect();
        self.compose(&values, &amb)
    }

    /// Re-labels the polynomial into an ambient with the same arity.
    pub fn with_ambient(&self, ambient: &Ambient) -> MPoly<F> {
        assert_eq!(ambient.arity(), self.arity());
        MPoly { ambient: ambient.clone(), terms: self.terms.clone() }
    }

    /// Embeds into `ambient`, which extends the current one by extra
    /// trailing variables.
    pub fn embed(&self, ambient: &Ambient) -> MPoly<F> {
        let k = ambient.arity() - self.arity();
        MPoly { ambient: ambient.clone(), terms: self.terms.iter().map(|(m, c)| (m.extend(k), c.clone())).collect() }
    }

    /// Drops trailing variables; the polynomial must not involve them.
    pub fn project(&self, ambient: &Ambient) -> Option<MPoly<F>> {
        let n = ambient.arity();
        let mut out = MPoly::zero(ambient);
        for (m, c) in &self.terms {
            if m.exps()[n..].iter().any(|&e| e > 0) {
                return None;
            }
            out.terms.insert(m.truncate(n), c.clone());
        }
        Some(out)
    }

    /// Leading term with respect to `order`.
    pub fn leading(&self, order: MonomialOrder) -> Option<(&Monomial, &F)> {
        match order {
            MonomialOrder::Grevlex => self.terms.iter().next_back(),
            _ => self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0)),
        }
    }

    pub fn leading_monomial(&self, order: MonomialOrder) -> Option<&Monomial> {
        self.leading(order).map(|(m, _)| m)
    }

    /// Scales so the leading coefficient (in grevlex) is one.
    pub fn monic(&self, order: MonomialOrder) -> MPoly<F> {
        match self.leading(order) {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    /// Division by a single polynomial: returns `(q, r)` with
    /// `self = q * divisor + r` and no term of `r` divisible by the leading
    /// monomial of `divisor`.
    pub fn div_rem(&self, divisor: &MPoly<F>) -> Result<(MPoly<F>, MPoly<F>), AlgebraError> {
        self.check_ambient(divisor)?;
        let order = MonomialOrder::Grevlex;
        let (lm, lc) = match divisor.leading(order) {
            None => return Err(AlgebraError::DivisionByZero),
            Some((m, c)) => (m.clone(), c.clone()),
        };
        let mut rem = self.clone();
        let mut q = MPoly::zero(&self.ambient);
        let mut r = MPoly::zero(&self.ambient);
        while let Some((m, c)) = rem.leading(order).map(|(m, c)| (m.clone(), c.clone())) {
            match m.div(&lm) {
                Some(factor) => {
                    let coef = c / lc.clone();
                    q.add_term(factor.clone(), coef.clone());
                    rem.add_scaled(divisor, &(-coef), &factor);
                }
                None => {
                    rem.terms.remove(&m);
                    r.add_term(m, c);
                }
            }
        }
        Ok((q, r))
    }

    /// Exact quotient when `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &MPoly<F>) -> Option<MPoly<F>> {
        let (q, r) = self.div_rem(divisor).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &MPoly<F>) -> bool {
        other.div_exact(self).is_some()
    }

    /// Keeps only terms of total degree at most `t`.
    pub fn truncated(&self, t: u32) -> MPoly<F> {
        MPoly {
            ambient: self.ambient.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() <= t).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Terms of the given total (or weighted) degree.
    pub fn homogeneous_part(&self, weights: &[u32], deg: u32) -> MPoly<F> {
        MPoly {
            ambient: self.ambient.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weighted_degree(weights) == deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> MPoly<G> {
        let mut out = MPoly::zero(&self.ambient);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

impl<F: Field> fmt::Display for MPoly<F> {
    /// Canonical printing: terms in descending grevlex order, coefficients
    /// first, `*` between factors and `^` for powers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative_for_print();
            let abs = if neg { -c.clone() } else { c.clone() };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ambient.names()[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ambient.names()[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl<F: Field> $tr<&MPoly<F>> for &MPoly<F> {
            type Output = MPoly<F>;
            /// Panics when the ambients differ; use the `try_` variant to get an error.
            fn $method(self, rhs: &MPoly<F>) -> MPoly<F> {
                self.$try(rhs).expect("polynomial ambients must agree")
            }
        }
        impl<F: Field> $tr<MPoly<F>> for MPoly<F> {
            type Output = MPoly<F>;
            fn $method(self, rhs: MPoly<F>) -> MPoly<F> {
                (&self).$method(&rhs)
            }
        }
        impl<F: Field> $tr<&MPoly<F>> for MPoly<F> {
            type Output = MPoly<F>;
            fn $method(self, rhs: &MPoly<F>) -> MPoly<F> {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl<F: Field> Neg for &MPoly<F> {
    type Output = MPoly<F>;
    fn neg(self) -> MPoly<F> {
        self.scale(&(-F::one()))
    }
}

impl<F: Field> Neg for MPoly<F> {
    type Output = MPoly<F>;
    fn neg(self) -> MPoly<F> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use crate::{q, Poly, Rational};

    fn amb() -> Ambient {
        Ambient::new(&["x", "y"])
    }

    fn p(s: &str) -> Poly {
        parse_poly(s, &amb()).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&p("x+y") * &p("x-y"), p("x^2-y^2"));
    }

    #[test]
    fn additive_and_multiplicative_identity() {
        let a = p("3*x^2*y - 1/2*y + 7");
        assert_eq!(&a + &Poly::zero(&amb()), a);
        let one_var = Ambient::new(&["x1"]);
        let b: Poly = parse_poly("x1*(x1-1)", &one_var).unwrap();
        assert_eq!(&b * &Poly::one(&one_var), parse_poly("x1^2-x1", &one_var).unwrap());
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let other = Ambient::new(&["u", "v"]);
        let a = p("x");
        let b = parse_poly("u", &other).unwrap();
        assert!(matches!(a.try_add(&b), Err(AlgebraError::AmbientMismatch { .. })));
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn derivatives() {
        assert_eq!(p("x^2*y").derive(0).unwrap(), p("2*x*y"));
        assert_eq!(p("7").derive(0).unwrap(), Poly::zero(&amb()));
        let one_var = Ambient::new(&["x1"]);
        let b: Poly = parse_poly("x1*(x1-1)", &one_var).unwrap();
        assert_eq!(b.derive(0).unwrap(), parse_poly("2*x1-1", &one_var).unwrap());
        assert!(matches!(p("x").derive(2), Err(AlgebraError::IndexOutOfRange { .. })));
    }

    #[test]
    fn evaluation() {
        let a3 = Ambient::new(&["x1", "x2", "x3"]);
        let f = parse_poly("x1*x2*x3", &a3).unwrap();
        assert_eq!(f.eval(&[q(1), q(1), q(0)]), q(0));
        let one_var = Ambient::new(&["x"]);
        assert_eq!(parse_poly("2*x-1", &one_var).unwrap().eval(&[q(1)]), q(1));
        assert_eq!(Poly::zero(&amb()).eval(&[q(3), q(4)]), q(0));
    }

    #[test]
    fn coefficients() {
        assert_eq!(p("x*y").coeff_of(&[1, 1]), q(1));
        let one_var = Ambient::new(&["x"]);
        assert_eq!(parse_poly::<crate::Rational>("x^2-x", &one_var).unwrap().coeff_of(&[1]), q(-1));
        assert_eq!(p("(x+y)^3").coeff_of(&[2, 1]), q(3));
    }

    #[test]
    fn translation_recentres() {
        let f = p("x^2 - 2*x + y");
        let g = f.translate(&[q(1), q(0)]);
        assert_eq!(g, p("x^2 + y - 1"));
    }

    #[test]
    fn exact_division() {
        assert_eq!(p("x^2-y^2").div_exact(&p("x+y")), Some(p("x-y")));
        assert_eq!(p("x^2+1").div_exact(&p("x")), None);
    }

    #[test]
    fn printing_is_canonical() {
        assert_eq!(p("y - 2*x^2 + 1/3").to_string(), "-2*x^2 + y + 1/3");
        assert_eq!(p("0").to_string(), "0");
    }

    #[test]
    fn generic_over_floats() {
        let a: MPoly<f64> = p("x^2*y + 1/2").map_coeffs(|c: &Rational| {
            use num_traits::ToPrimitive;
            c.to_f64().unwrap()
        });
        assert_eq!(a.d(0).eval(&[2.0, 3.0]), 12.0);
    }
}
