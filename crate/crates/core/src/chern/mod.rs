//! Characteristic numbers over graded intersection rings.
//!
//! Every ring is a graded quotient `Q[x_1..x_m] / relations` together with an
//! integration functional fixed by the value on one top-degree monomial.
//! Projective space `P^n` is the special case `Q[h] / (h^{n+1})`, `∫h^n = 1`.

use std::fmt;

use thiserror::Error;

use crate::algebra::{int, parse_poly, AlgebraError, Ambient, Field, MPoly, Monomial, MonomialOrder};
use crate::ideals::{Budget, GroebnerData, IdealError};
use crate::residues::PhiSpec;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChernError {
    #[error("inconsistent presentation: {reason}")]
    InconsistentPresentation { reason: String },
    #[error("phi has degree {found} but the ring has top degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("total class entry {index} is not homogeneous of degree {index}")]
    NotGraded { index: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    Projective(usize),
    Presented,
}

/// Textual description of a presented ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub degrees: Vec<u32>,
    pub relations: Vec<String>,
    pub integral_monomial: String,
    pub integral_value: String,
}

#[derive(Clone, Debug)]
pub struct CohomologyRing<F: Field> {
    kind: RingKind,
    ambient: Ambient,
    degrees: Vec<u32>,
    gb: GroebnerData<F>,
    top: u32,
    top_monomial: Monomial,
    /// `∫` of the top standard monomial.
    top_value: F,
}

impl<F: Field> CohomologyRing<F> {
    /// `H^*(P^n) = Q[h]/(h^{n+1})`.
    pub fn pn(n: usize) -> Self {
        let amb = Ambient::new(&["h"]);
        let h = MPoly::var(&amb, 0);
        let mut ring = Self::build(&amb, vec![1], vec![h.pow(n as u32 + 1)], &h.pow(n as u32), F::one())
            .expect("projective space presentation is consistent");
        ring.kind = RingKind::Projective(n);
        ring
    }

    pub fn presented(presentation: &Presentation) -> Result<Self, ChernError> {
        let amb = Ambient::new(&presentation.generators);
        if presentation.degrees.len() != presentation.generators.len() || presentation.degrees.contains(&0) {
            return Err(ChernError::InconsistentPresentation {
                reason: "every generator needs a positive degree".into(),
            });
        }
        let relations = presentation.relations.iter().map(|r| parse_poly(r, &amb)).collect::<Result<Vec<_>, _>>()?;
        let integral_monomial = parse_poly(&presentation.integral_monomial, &amb)?;
        let value = parse_poly(&presentation.integral_value, &Ambient::new::<&str>(&[]))?;
        if !value.is_constant() {
            return Err(ChernError::InconsistentPresentation { reason: "integral value must be a number".into() });
        }
        Self::build(&amb, presentation.degrees.clone(), relations, &integral_monomial, value.constant_term())
    }

    fn build(
        amb: &Ambient,
        degrees: Vec<u32>,
        relations: Vec<MPoly<F>>,
        fundamental: &MPoly<F>,
        value: F,
    ) -> Result<Self, ChernError> {
        let bad = |reason: &str| ChernError::InconsistentPresentation { reason: reason.to_string() };
        for r in &relations {
            if !r.is_zero() && r.weighted_homogeneous_degree(&degrees).is_none() {
                return Err(bad(&format!("relation `{r}` is not homogeneous")));
            }
        }
        let top = fundamental
            .weighted_homogeneous_degree(&degrees)
            .filter(|_| !fundamental.is_zero())
            .ok_or_else(|| bad("integral class must be a nonzero homogeneous element"))?;
        if value.is_zero() {
            return Err(bad("integral value must be nonzero"));
        }
        let gb = GroebnerData::compute(amb, &relations, MonomialOrder::Grevlex, false, Budget::default())?;
        let standard = gb.standard_monomials().ok_or_else(|| bad("quotient is not finite dimensional"))?;
        let max_deg = standard.iter().map(|m| m.weighted_degree(&degrees)).max().ok_or_else(|| bad("ring is zero"))?;
        let top_basis: Vec<&Monomial> = standard.iter().filter(|m| m.weighted_degree(&degrees) == top).collect();
        if max_deg != top || top_basis.len() != 1 {
            return Err(bad("top degree must be one-dimensional and contain the integral class"));
        }
        let top_monomial = top_basis[0].clone();
        let nf = gb.reduce(fundamental)?.0;
        let coeff = nf.coeff(&top_monomial);
        if coeff.is_zero() {
            return Err(bad("integral class vanishes in the ring"));
        }
        Ok(CohomologyRing {
            kind: RingKind::Presented,
            ambient: amb.clone(),
            degrees,
            gb,
            top,
            top_monomial,
            top_value: value / coeff,
        })
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    /// Complex dimension, i.e. the top degree.
    pub fn dim(&self) -> usize {
        self.top as usize
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn parse(&self, text: &str) -> Result<MPoly<F>, ChernError> {
        Ok(self.reduce(&parse_poly(text, &self.ambient)?))
    }

    pub fn generator(&self, name: &str) -> Option<MPoly<F>> {
        self.ambient.index_of(name).map(|i| MPoly::var(&self.ambient, i))
    }

    pub fn reduce(&self, x: &MPoly<F>) -> MPoly<F> {
        self.gb.reduce(x).expect("ring elements share the ring ambient").0
    }

    pub fn degree_part(&self, x: &MPoly<F>, k: u32) -> MPoly<F> {
        x.homogeneous_part(&self.degrees, k)
    }

    /// Top-degree coefficient times the fundamental class value; zero on
    /// lower degrees.
    pub fn integrate(&self, x: &MPoly<F>) -> F {
        self.reduce(x).coeff(&self.top_monomial) * self.top_value.clone()
    }

    pub fn mul(&self, a: &MPoly<F>, b: &MPoly<F>) -> MPoly<F> {
        self.reduce(&(a * b))
    }
}

/// Total class `c_0 + c_1 + … + c_n` with `c_i` in degree `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct TotalClass<F: Field> {
    parts: Vec<MPoly<F>>,
}

impl<F: Field> TotalClass<F> {
    pub fn one(ring: &CohomologyRing<F>) -> Self {
        let mut parts = vec![MPoly::zero(ring.ambient()); ring.dim() + 1];
        parts[0] = MPoly::one(ring.ambient());
        TotalClass { parts }
    }

    /// Splits an inhomogeneous element into graded parts.
    pub fn from_total(ring: &CohomologyRing<F>, x: &MPoly<F>) -> Self {
        let x = ring.reduce(x);
        TotalClass { parts: (0..=ring.dim() as u32).map(|k| ring.degree_part(&x, k)).collect() }
    }

    /// From listed graded parts, padding missing ones with zero.
    pub fn from_parts(ring: &CohomologyRing<F>, parts: Vec<MPoly<F>>) -> Result<Self, ChernError> {
        let mut out = vec![MPoly::zero(ring.ambient()); ring.dim() + 1];
        for (i, p) in parts.into_iter().enumerate() {
            let p = ring.reduce(&p);
            if i > ring.dim() {
                if !p.is_zero() {
                    return Err(ChernError::NotGraded { index: i });
                }
                continue;
            }
            if !p.is_zero() && p.weighted_homogeneous_degree(ring.degrees()) != Some(i as u32) {
                return Err(ChernError::NotGraded { index: i });
            }
            out[i] = p;
        }
        if out[0] != MPoly::one(ring.ambient()) {
            return Err(ChernError::NotGraded { index: 0 });
        }
        Ok(TotalClass { parts: out })
    }

    /// `1 + x` for a degree-one class `x`, e.g. a line bundle.
    pub fn line(ring: &CohomologyRing<F>, x: &MPoly<F>) -> Self {
        Self::from_total(ring, &(&MPoly::one(ring.ambient()) + x))
    }

    pub fn parts(&self) -> &[MPoly<F>] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &MPoly<F> {
        &self.parts[i]
    }

    pub fn total(&self) -> MPoly<F> {
        self.parts.iter().fold(MPoly::zero(self.parts[0].ambient()), |acc, p| &acc + p)
    }

    pub fn mul(&self, other: &Self, ring: &CohomologyRing<F>) -> Self {
        let n = ring.dim();
        let parts = (0..=n)
            .map(|k| {
                let s =
                    (0..=k).fold(MPoly::zero(ring.ambient()), |acc, j| &acc + &(&self.parts[j] * &other.parts[k - j]));
                ring.reduce(&s)
            })
            .collect();
        TotalClass { parts }
    }

    /// Formal inverse: `inv_k = -Σ_{j=1..k} c_j inv_{k-j}`.
    pub fn inverse(&self, ring: &CohomologyRing<F>) -> Self {
        let n = ring.dim();
        let mut inv: Vec<MPoly<F>> = vec![MPoly::one(ring.ambient())];
        for k in 1..=n {
            let s = (1..=k).fold(MPoly::zero(ring.ambient()), |acc, j| &acc + &(&self.parts[j] * &inv[k - j]));
            inv.push(ring.reduce(&-s));
        }
        TotalClass { parts: inv }
    }

    /// `c(E - F) = c(E) c(F)^{-1}`.
    pub fn virtual_difference(&self, other: &Self, ring: &CohomologyRing<F>) -> Self {
        self.mul(&other.inverse(ring), ring)
    }

    /// The class of the dual bundle: `c_i ↦ (-1)^i c_i`.
    pub fn dual(&self) -> Self {
        TotalClass {
            parts: self.parts.iter().enumerate().map(|(i, p)| if i % 2 == 1 { -p } else { p.clone() }).collect(),
        }
    }
}

/// `∫ φ(E - F)`.
pub fn virtual_phi<F: Field>(
    phi: &PhiSpec<F>,
    e: &TotalClass<F>,
    f: &TotalClass<F>,
    ring: &CohomologyRing<F>,
) -> Result<F, ChernError> {
    if phi.dim() != ring.dim() {
        return Err(ChernError::DegreeMismatch { expected: ring.dim(), found: phi.dim() });
    }
    let v = e.virtual_difference(f, ring);
    let value = phi.substitute(&v.parts[1..], ring.ambient());
    Ok(ring.integrate(&value))
}

/// `c(T_{P^n}(-log D))` for a normal-crossing divisor whose components have
/// the given degrees: dual of `(1-h)^{n+1} Π (1 - d_i h)^{-1}`.
pub fn total_chern_log_pn<F: Field>(ring: &CohomologyRing<F>, component_degrees: &[u32]) -> TotalClass<F> {
    let n = ring.dim();
    let h = ring.generator("h").expect("projective ring");
    let one = MPoly::one(ring.ambient());
    let omega = TotalClass::from_total(ring, &(&one - &h).pow(n as u32 + 1));
    let omega_log = component_degrees.iter().fold(omega, |acc, &d| {
        let geometric = (0..=n as u32).fold(MPoly::zero(ring.ambient()), |s, k| &s + &h.scale(&int(d as i64)).pow(k));
        acc.mul(&TotalClass::from_total(ring, &geometric), ring)
    });
    omega_log.dual()
}

/// `c(T_X(-log D)) = c(T_X) Π (1 + D_i)^{-1}` for smooth normal-crossing
/// components with classes `D_i`.
pub fn total_chern_log<F: Field>(
    ring: &CohomologyRing<F>,
    tangent: &TotalClass<F>,
    components: &[MPoly<F>],
) -> TotalClass<F> {
    components.iter().fold(tangent.clone(), |acc, d| acc.mul(&TotalClass::line(ring, d).inverse(ring), ring))
}

/// `c(T_{P^n}) = (1 + h)^{n+1}`.
pub fn tangent_pn<F: Field>(ring: &CohomologyRing<F>) -> TotalClass<F> {
    let h = ring.generator("h").expect("projective ring");
    TotalClass::from_total(ring, &(&MPoly::one(ring.ambient()) + &h).pow(ring.dim() as u32 + 1))
}

/// `c(T_F) = 1 + (1 - d) h` for a degree-`d` foliation on `P^n`.
pub fn foliation_tangent_pn<F: Field>(ring: &CohomologyRing<F>, degree: u32) -> TotalClass<F> {
    let h = ring.generator("h").expect("projective ring");
    TotalClass::line(ring, &h.scale(&(F::one() - int::<F>(degree as i64))))
}

/// `c_2(T_X(-log D)) = c_2(T_X) + K·D + D²` for a smooth curve `D` on a
/// surface, with `K = -c_1(T_X)`.
pub fn log_chern_surface<F: Field>(c2_tx: F, k_dot_d: F, d_squared: F) -> F {
    c2_tx + k_dot_d + d_squared
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PoincareKind {
    BoundSatisfied,
    Boundary,
    HypothesisNotMet,
    /// Nonnegative total yet `deg D > deg F + n`.
    Violated,
    EvenDimension,
}

/// Outcome of the degree bound check for an odd-dimensional projective
/// space.
#[derive(Clone, Debug, PartialEq)]
pub struct PoincareVerdict<F: Field> {
    pub n: u32,
    pub deg_d: u32,
    pub deg_f: u32,
    pub total: F,
    /// `(deg F + n - deg D)^n`, which the total must equal.
    pub predicted_total: F,
    pub kind: PoincareKind,
}

impl<F: Field> PoincareVerdict<F> {
    pub fn total_matches_degrees(&self) -> bool {
        self.total == self.predicted_total
    }
}

impl<F: Field> fmt::Display for PoincareVerdict<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (d, e, n) = (self.deg_d, self.deg_f, self.n);
        match self.kind {
            PoincareKind::BoundSatisfied => write!(f, "bound satisfied: {d} ≤ {e}+{n}"),
            PoincareKind::Boundary => write!(f, "boundary: {d} = {e}+{n}"),
            PoincareKind::HypothesisNotMet => write!(f, "hypothesis not met: total {} < 0", self.total),
            PoincareKind::Violated => write!(f, "bound violated: {d} > {e}+{n} with total {}", self.total),
            PoincareKind::EvenDimension => write!(f, "not applicable: n = {n} is even"),
        }
    }
}

/// Classifies a total `Σ Res^log_{c_1^n}` against `deg D ≤ deg F + n`.
pub fn poincare_bound_check<F: Field + PartialOrd>(n: u32, deg_d: u32, deg_f: u32, total: F) -> PoincareVerdict<F> {
    let base = int::<F>(deg_f as i64 + n as i64 - deg_d as i64);
    let predicted_total = base.powu(n);
    let kind = if n.is_multiple_of(2) {
        PoincareKind::EvenDimension
    } else if total < F::zero() {
        PoincareKind::HypothesisNotMet
    } else if deg_d < deg_f + n {
        PoincareKind::BoundSatisfied
    } else if deg_d == deg_f + n {
        PoincareKind::Boundary
    } else {
        PoincareKind::Violated
    };
    PoincareVerdict { n, deg_d, deg_f, total, predicted_total, kind }
}
