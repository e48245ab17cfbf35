//! Ideals in polynomial rings: membership with explicit lifts, saturation,
//! quotient dimensions and local multiplicities at rational points.

mod groebner;

use thiserror::Error;

use crate::algebra::{Ambient, Field, MPoly, Monomial, MonomialOrder};

pub use groebner::{Budget, GroebnerData};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IdealError {
    #[error("reduction budget of {steps} steps exceeded")]
    BudgetExceeded { steps: usize },
    #[error("polynomial and ideal live in different rings")]
    AmbientMismatch,
    #[error("point is not isolated in the zero set (local quotient kept growing up to m^{cap})")]
    NotIsolated { cap: u32 },
}

/// Dimension of a quotient ring as a vector space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientDim {
    Finite(usize),
    Infinite,
}

impl QuotientDim {
    pub fn finite(self) -> Option<usize> {
        match self {
            QuotientDim::Finite(d) => Some(d),
            QuotientDim::Infinite => None,
        }
    }
}

/// Controls for [`Ideal::local_multiplicity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalOptions {
    /// Largest power of the maximal ideal tried before declaring the point
    /// non-isolated.
    pub max_power: u32,
    pub budget: Budget,
}

impl Default for LocalOptions {
    fn default() -> Self {
        LocalOptions { max_power: 24, budget: Budget::default() }
    }
}

/// An ideal given by generators. Zero generators are dropped on
/// construction; queries never depend on generator order.
#[derive(Clone, Debug)]
pub struct Ideal<F: Field> {
    ambient: Ambient,
    generators: Vec<MPoly<F>>,
}

impl<F: Field> Ideal<F> {
    pub fn new(ambient: &Ambient, generators: Vec<MPoly<F>>) -> Self {
        Ideal { ambient: ambient.clone(), generators: generators.into_iter().filter(|g| !g.is_zero()).collect() }
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn generators(&self) -> &[MPoly<F>] {
        &self.generators
    }

    pub fn groebner(&self, order: MonomialOrder) -> Result<GroebnerData<F>, IdealError> {
        GroebnerData::compute(&self.ambient, &self.generators, order, true, Budget::default())
    }

    fn groebner_plain(&self, order: MonomialOrder, budget: Budget) -> Result<GroebnerData<F>, IdealError> {
        GroebnerData::compute(&self.ambient, &self.generators, order, false, budget)
    }

    /// `Some(row)` with `f = sum(row[i] * generators[i])` when `f` lies in the
    /// ideal.
    pub fn member(&self, f: &MPoly<F>) -> Result<Option<Vec<MPoly<F>>>, IdealError> {
        let gb = self.groebner(MonomialOrder::Grevlex)?;
        let (nf, lift) = gb.reduce(f)?;
        Ok(if nf.is_zero() { lift } else { None })
    }

    pub fn contains(&self, f: &MPoly<F>) -> Result<bool, IdealError> {
        let gb = self.groebner_plain(MonomialOrder::Grevlex, Budget::default())?;
        Ok(gb.reduce(f)?.0.is_zero())
    }

    /// `(I : s^inf)`, by eliminating `t` from `I + <1 - t s>`.
    pub fn saturate(&self, s: &MPoly<F>) -> Result<Ideal<F>, IdealError> {
        let ext = self.ambient.with_extra("__sat_t");
        let t = MPoly::var(&ext, ext.arity() - 1);
        let mut gens: Vec<MPoly<F>> = self.generators.iter().map(|g| g.embed(&ext)).collect();
        gens.push(&MPoly::one(&ext) - &(&t * &s.embed(&ext)));
        let gb = GroebnerData::compute(&ext, &gens, MonomialOrder::EliminateLast(1), false, Budget::default())?;
        let kept = gb.basis().iter().filter_map(|g| g.project(&self.ambient)).collect();
        Ok(Ideal::new(&self.ambient, kept))
    }

    /// Vector-space dimension of the quotient ring.
    pub fn quotient_dim(&self) -> Result<QuotientDim, IdealError> {
        self.quotient_dim_with(Budget::default())
    }

    fn quotient_dim_with(&self, budget: Budget) -> Result<QuotientDim, IdealError> {
        let gb = self.groebner_plain(MonomialOrder::Grevlex, budget)?;
        Ok(match gb.standard_monomials() {
            Some(ms) => QuotientDim::Finite(ms.len()),
            None => QuotientDim::Infinite,
        })
    }

    /// Ideal equality by comparing reduced Gröbner bases.
    pub fn same_as(&self, other: &Ideal<F>) -> Result<bool, IdealError> {
        let a = self.groebner_plain(MonomialOrder::Grevlex, Budget::default())?;
        let b = other.groebner_plain(MonomialOrder::Grevlex, Budget::default())?;
        Ok(a.basis() == b.basis())
    }

    /// Dimension of the local quotient at `point`.
    ///
    /// Translates `point` to the origin and computes
    /// `dim O / (I + m^k)` for increasing `k` until two consecutive values
    /// agree (Nakayama then forces `m^k` into the local ideal). Returns 0 when
    /// the point is not a zero of the ideal.
    pub fn local_multiplicity(&self, point: &[F], opts: LocalOptions) -> Result<usize, IdealError> {
        let n = self.ambient.arity();
        let shifted: Vec<MPoly<F>> = self.generators.iter().map(|g| g.translate(point)).collect();
        let mut prev = 0usize;
        for k in 1..=opts.max_power {
            let mut gens = shifted.clone();
            gens.extend(monomials_of_degree(n, k).into_iter().map(|m| MPoly::term(&self.ambient, m, F::one())));
            let d = Ideal::new(&self.ambient, gens)
                .quotient_dim_with(opts.budget)?
                .finite()
                .expect("ideal containing a power of the maximal ideal is zero-dimensional");
            if d == prev {
                return Ok(d);
            }
            prev = d;
        }
        Err(IdealError::NotIsolated { cap: opts.max_power })
    }
}

/// All exponent vectors of total degree `k` in `n` variables.
pub fn monomials_of_degree(n: usize, k: u32) -> Vec<Monomial> {
    fn rec(n: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() == n - 1 {
            prefix.push(k);
            out.push(Monomial::from_exps(prefix));
            prefix.pop();
            return;
        }
        for e in (0..=k).rev() {
            prefix.push(e);
            rec(n, k - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if k == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(n, k, &mut Vec::new(), &mut out);
    out
}

/// Greatest common divisor of two nonzero polynomials, normalised to be
/// monic in grevlex. Computed as `a b / lcm(a, b)` with the lcm obtained
/// from the intersection `<a> ∩ <b>` by elimination.
pub fn poly_gcd<F: Field>(a: &MPoly<F>, b: &MPoly<F>) -> Result<MPoly<F>, IdealError> {
    let amb = a.ambient().clone();
    if a.is_zero() {
        return Ok(b.monic(MonomialOrder::Grevlex));
    }
    if b.is_zero() {
        return Ok(a.monic(MonomialOrder::Grevlex));
    }
    let ext = amb.with_extra("__gcd_t");
    let t = MPoly::var(&ext, ext.arity() - 1);
    let gens = vec![&t * &a.embed(&ext), &(&MPoly::one(&ext) - &t) * &b.embed(&ext)];
    let gb = GroebnerData::compute(&ext, &gens, MonomialOrder::EliminateLast(1), false, Budget::default())?;
    let lcm = gb
        .basis()
        .iter()
        .filter_map(|g| g.project(&amb))
        .min_by_key(|g| g.total_degree())
        .expect("intersection of principal ideals is principal and nonzero");
    let prod = a * b;
    let g = prod.div_exact(&lcm).expect("lcm divides the product");
    Ok(g.monic(MonomialOrder::Grevlex))
}
