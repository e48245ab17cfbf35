//! Grothendieck residues and the local indices built on them.
//!
//! Residues are normalized: no `(2πi)^n` factor, so a nondegenerate zero
//! contributes `h(p) / det Jv(p)`.

use std::fmt;

use thiserror::Error;

use crate::algebra::{
    det, parse_poly, principal_minor_sum, AlgebraError, Ambient, Field, MPoly, PolyMatrix, TruncSeries,
};
use crate::foliation::{log_frame, FoliationError, SaitoBasis, VectorField};
use crate::ideals::{monomials_of_degree, Budget, GroebnerData, Ideal, IdealError, LocalOptions};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ResidueError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Foliation(#[from] FoliationError),
    #[error("phi must be weighted homogeneous of degree {expected} in c1..c{expected}, got `{found}`")]
    PhiNotHomogeneous { expected: usize, found: String },
    #[error("matrix of size {found} does not match phi of degree {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("the field does not vanish at {point}")]
    NotAZero { point: String },
    #[error("a separator is required at {point}: no valid choice vanishes on the other zeros")]
    SeparatorRequired { point: String },
}

/// A weighted-homogeneous polynomial in the Chern symbols `c1..cn`,
/// `weight(c_i) = i`, of weighted degree `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiSpec<F: Field> {
    poly: MPoly<F>,
}

impl<F: Field> PhiSpec<F> {
    pub fn symbols(n: usize) -> Ambient {
        Ambient::new(&(1..=n).map(|i| format!("c{i}")).collect::<Vec<_>>())
    }

    pub fn parse(text: &str, n: usize) -> Result<Self, ResidueError> {
        Self::from_poly(parse_poly(text, &Self::symbols(n))?)
    }

    pub fn from_poly(poly: MPoly<F>) -> Result<Self, ResidueError> {
        let n = poly.arity();
        let weights: Vec<u32> = (1..=n as u32).collect();
        if poly.is_zero() || poly.weighted_homogeneous_degree(&weights) != Some(n as u32) {
            return Err(ResidueError::PhiNotHomogeneous { expected: n, found: poly.to_string() });
        }
        Ok(PhiSpec { poly })
    }

    /// `c_n`, the determinant.
    pub fn top(n: usize) -> Self {
        let amb = Self::symbols(n);
        PhiSpec { poly: MPoly::var(&amb, n - 1) }
    }

    /// `c_1^n`.
    pub fn c1_power(n: usize) -> Self {
        let amb = Self::symbols(n);
        PhiSpec { poly: MPoly::var(&amb, 0).pow(n as u32) }
    }

    pub fn dim(&self) -> usize {
        self.poly.arity()
    }

    pub fn poly(&self) -> &MPoly<F> {
        &self.poly
    }

    /// Substitutes `classes[i]` for `c_{i+1}`.
    pub fn substitute(&self, classes: &[MPoly<F>], target: &Ambient) -> MPoly<F> {
        self.poly.compose(classes, target)
    }
}

impl<F: Field> fmt::Display for PhiSpec<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// `φ(c_1(M), …, c_n(M))` where `c_i(M)` is the coefficient of `t^i` in
/// `det(I + t M)`.
pub fn phi_of_matrix<F: Field>(
    phi: &PhiSpec<F>,
    m: &PolyMatrix<F>,
    ambient: &Ambient,
) -> Result<MPoly<F>, ResidueError> {
    let n = phi.dim();
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(ResidueError::SizeMismatch { expected: n, found: m.len() });
    }
    let classes: Vec<MPoly<F>> = (1..=n).map(|k| principal_minor_sum(m, k, ambient)).collect();
    Ok(phi.substitute(&classes, ambient))
}

/// Tuning knobs for [`groth_residue`]. The defaults pick the fast path when
/// possible and the minimal exponents otherwise.
#[derive(Clone, Debug)]
pub struct ResidueOptions<F: Field> {
    pub force_transformation: bool,
    /// Explicit separator; overrides `other_zeros`.
    pub separator: Option<MPoly<F>>,
    /// The remaining zeros of the field in this chart, used to build a
    /// separator as a product of coordinate hyperplanes.
    pub other_zeros: Vec<Vec<F>>,
    pub extra_exponent: u32,
    pub extra_t: u32,
    pub max_t: u32,
    pub local: LocalOptions,
}

impl<F: Field> Default for ResidueOptions<F> {
    fn default() -> Self {
        ResidueOptions {
            force_transformation: false,
            separator: None,
            other_zeros: Vec::new(),
            extra_exponent: 0,
            extra_t: 0,
            max_t: 24,
            local: LocalOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResiduePath {
    Fast,
    /// `s^t (z_i - p_i)^N` lies in the ideal of the field.
    Transformation {
        exponent: u32,
        t: u32,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidueValue<F: Field> {
    pub value: F,
    pub path: ResiduePath,
}

fn fmt_point<F: Field>(p: &[F]) -> String {
    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Normalized Grothendieck residue `Res_p[h; v_1, …, v_n]`.
pub fn groth_residue<F: Field>(
    h: &MPoly<F>,
    v: &VectorField<F>,
    p: &[F],
    opts: &ResidueOptions<F>,
) -> Result<ResidueValue<F>, ResidueError> {
    if !v.vanishes_at(p) {
        return Err(ResidueError::NotAZero { point: fmt_point(p) });
    }
    if !opts.force_transformation {
        let jac = det(&v.jacobian(), v.ambient()).eval(p);
        if !jac.is_zero() {
            return Ok(ResidueValue { value: h.eval(p) / jac, path: ResiduePath::Fast });
        }
    }
    transformation_residue(h, v, p, opts)
}

fn transformation_residue<F: Field>(
    h: &MPoly<F>,
    v: &VectorField<F>,
    p: &[F],
    opts: &ResidueOptions<F>,
) -> Result<ResidueValue<F>, ResidueError> {
    let amb = v.ambient();
    let n = amb.arity();
    let origin = vec![F::zero(); n];
    let vt: Vec<MPoly<F>> = v.translate(p).components().to_vec();
    let ht = h.translate(p);
    let ideal = Ideal::new(amb, vt.clone());
    let mu = ideal.local_multiplicity(&origin, opts.local)? as u32;

    // smallest N with every z_i^N in the local ideal, which equals <v> + m^mu
    let mut local_gens = vt.clone();
    local_gens.extend(monomials_of_degree(n, mu).into_iter().map(|m| MPoly::term(amb, m, F::one())));
    let local =
        GroebnerData::compute(amb, &local_gens, crate::algebra::MonomialOrder::Grevlex, false, opts.local.budget)?;
    let mut exponent = 1;
    while exponent < mu
        && !(0..n).all(|i| local.reduce(&MPoly::var(amb, i).pow(exponent)).map(|r| r.0.is_zero()).unwrap_or(false))
    {
        exponent += 1;
    }
    exponent += opts.extra_exponent;

    let separator = match &opts.separator {
        Some(s) => s.translate(p),
        None => {
            let mut s = MPoly::one(amb);
            for q in &opts.other_zeros {
                if q.as_slice() == p {
                    continue;
                }
                let i = (0..n).find(|&i| q[i] != p[i]).expect("distinct points differ somewhere");
                s = &s * &(&MPoly::var(amb, i) - &MPoly::constant(amb, q[i].clone() - p[i].clone()));
            }
            s
        }
    };
    if separator.constant_term().is_zero() {
        return Err(ResidueError::SeparatorRequired { point: fmt_point(p) });
    }

    let gb = GroebnerData::compute(amb, &vt, crate::algebra::MonomialOrder::Grevlex, true, Budget::default())?;
    let lifts_for = |t: u32| -> Result<Option<Vec<Vec<MPoly<F>>>>, IdealError> {
        let st = separator.pow(t);
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let g = &st * &MPoly::var(amb, i).pow(exponent);
            let (nf, lift) = gb.reduce(&g)?;
            if !nf.is_zero() {
                return Ok(None);
            }
            rows.push(lift.expect("cofactors tracked"));
        }
        Ok(Some(rows))
    };
    let mut found = None;
    let max_t = if separator.is_constant() { 0 } else { opts.max_t };
    for t in 0..=max_t {
        if lifts_for(t)?.is_some() {
            found = Some(t + opts.extra_t);
            break;
        }
    }
    let t = found.ok_or_else(|| ResidueError::SeparatorRequired { point: fmt_point(p) })?;
    let a = lifts_for(t)?.expect("membership persists for larger t");

    let trunc = n as u32 * (exponent - 1);
    let unit = TruncSeries::from_poly(&separator.pow(n as u32 * t), trunc).inverse()?;
    let num = TruncSeries::from_poly(&(&ht * &det(&a, amb)), trunc);
    let value = num.mul(&unit).coeff_of(&vec![exponent - 1; n]);
    Ok(ResidueValue { value, path: ResiduePath::Transformation { exponent, t } })
}

/// Milnor number: the local multiplicity of `<v_1, …, v_n>` at `p`.
pub fn milnor<F: Field>(v: &VectorField<F>, p: &[F], opts: LocalOptions) -> Result<usize, ResidueError> {
    Ok(Ideal::new(v.ambient(), v.components().to_vec()).local_multiplicity(p, opts)?)
}

/// `BB_φ(v, p) = Res_p[φ(Jv); v]`.
pub fn bb_residue<F: Field>(
    phi: &PhiSpec<F>,
    v: &VectorField<F>,
    p: &[F],
    opts: &ResidueOptions<F>,
) -> Result<F, ResidueError> {
    let h = phi_of_matrix(phi, &v.jacobian(), v.ambient())?;
    Ok(groth_residue(&h, v, p, opts)?.value)
}

/// `Res^log_φ(v, D, p) = Res_p[φ(M⁺); v]`.
pub fn res_log<F: Field>(
    phi: &PhiSpec<F>,
    v: &VectorField<F>,
    basis: &SaitoBasis<F>,
    p: &[F],
    opts: &ResidueOptions<F>,
) -> Result<F, ResidueError> {
    let frame = log_frame(v, basis)?;
    let h = phi_of_matrix(phi, &frame.mplus, v.ambient())?;
    Ok(groth_residue(&h, v, p, opts)?.value)
}

/// Logarithmic index: local multiplicity of `<θ_1, …, θ_n>` at `p`; zero
/// when some `θ_i` is a unit there.
pub fn ind_log<F: Field>(
    v: &VectorField<F>,
    basis: &SaitoBasis<F>,
    p: &[F],
    opts: LocalOptions,
) -> Result<usize, ResidueError> {
    let frame = log_frame(v, basis)?;
    Ok(Ideal::new(v.ambient(), frame.theta).local_multiplicity(p, opts)?)
}

/// Local invariants at one singular point.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueReport<F: Field> {
    pub chart: usize,
    pub point: Vec<F>,
    pub label: Option<String>,
    pub on_divisor: bool,
    pub nondegenerate: bool,
    pub milnor: usize,
    pub bb: F,
    pub res_log: Option<F>,
    pub ind_log: Option<usize>,
    pub gsv: Option<u32>,
    pub cs: Option<F>,
}

impl<F: Field> ResidueReport<F> {
    /// The value entering the global sum: the log residue on the divisor and
    /// the Baum–Bott residue off it.
    pub fn contribution(&self) -> F {
        self.res_log.clone().unwrap_or_else(|| self.bb.clone())
    }
}

/// Computes every local invariant of `v` at `p`.
pub fn local_report<F: Field>(
    phi: &PhiSpec<F>,
    v: &VectorField<F>,
    basis: &SaitoBasis<F>,
    chart: usize,
    p: &[F],
    opts: &ResidueOptions<F>,
) -> Result<ResidueReport<F>, ResidueError> {
    let amb = v.ambient();
    let jac = det(&v.jacobian(), amb).eval(p);
    let on_divisor = basis.divisor().contains_point(p);
    let milnor = milnor(v, p, opts.local)?;
    let bb = bb_residue(phi, v, p, opts)?;
    let (res_log_v, ind) = if on_divisor {
        (Some(res_log(phi, v, basis, p, opts)?), Some(ind_log(v, basis, p, opts.local)?))
    } else {
        (None, None)
    };
    Ok(ResidueReport {
        chart,
        point: p.to_vec(),
        label: None,
        on_divisor,
        nondegenerate: !jac.is_zero(),
        milnor,
        bb,
        res_log: res_log_v,
        ind_log: ind,
        gsv: None,
        cs: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::{normal_crossing_basis, verify_saito, Divisor};
    use crate::{q, Poly, Rational};

    fn field(a: &Ambient, comps: &[&str]) -> VectorField<Rational> {
        VectorField::new(a, comps.iter().map(|c| parse_poly(c, a).unwrap()).collect()).unwrap()
    }

    fn pt(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| q(x)).collect()
    }

    fn arrangement_chart() -> (Ambient, VectorField<Rational>, SaitoBasis<Rational>) {
        let a = Ambient::new(&["x1", "x2", "x3"]);
        let v = field(&a, &["x1*(x1-1)", "x2*(x2-1)", "x3*(x3-1)"]);
        let d = Divisor::new(&a, ["x1", "x2", "x3"].iter().map(|s| parse_poly(s, &a).unwrap()).collect()).unwrap();
        let b = normal_crossing_basis(&d).unwrap();
        (a, v, b)
    }

    #[test]
    fn phi_specs() {
        assert!(PhiSpec::<Rational>::parse("c1^3", 3).is_ok());
        assert!(PhiSpec::<Rational>::parse("c1*c2 - c3", 3).is_ok());
        assert!(matches!(PhiSpec::<Rational>::parse("c1^2", 3), Err(ResidueError::PhiNotHomogeneous { .. })));
        assert!(matches!(PhiSpec::<Rational>::parse("c1 + c2", 2), Err(ResidueError::PhiNotHomogeneous { .. })));
    }

    #[test]
    fn phi_of_diagonal_matrices() {
        let a = Ambient::new(&["a", "b", "c"]);
        let p = |s: &str| -> Poly { parse_poly(s, &a).unwrap() };
        let z = Poly::zero(&a);
        let m =
            vec![vec![p("a"), z.clone(), z.clone()], vec![z.clone(), p("b"), z.clone()], vec![z.clone(), z, p("c")]];
        let phi = PhiSpec::parse("c1*c2 - c3", 3).unwrap();
        assert_eq!(phi_of_matrix(&phi, &m, &a).unwrap(), p("(a+b+c)*(a*b+a*c+b*c) - a*b*c"));
        assert_eq!(phi_of_matrix(&PhiSpec::c1_power(3), &m, &a).unwrap(), p("(a+b+c)^3"));
        assert_eq!(phi_of_matrix(&PhiSpec::top(3), &m, &a).unwrap(), p("a*b*c"));
        assert!(matches!(phi_of_matrix(&PhiSpec::top(2), &m, &a), Err(ResidueError::SizeMismatch { .. })));
    }

    #[test]
    fn simple_residues() {
        let a = Ambient::new(&["z", "w"]);
        let v = field(&a, &["z", "w"]);
        let one = Poly::one(&a);
        assert_eq!(groth_residue(&one, &v, &pt(&[0, 0]), &Default::default()).unwrap().value, q(1));
        let v2 = field(&a, &["z^2", "w^2"]);
        let h = parse_poly("z*w", &a).unwrap();
        let r = groth_residue(&h, &v2, &pt(&[0, 0]), &Default::default()).unwrap();
        assert_eq!(r.value, q(1));
        assert_eq!(r.path, ResiduePath::Transformation { exponent: 2, t: 0 });
        assert_eq!(groth_residue(&one, &v2, &pt(&[0, 0]), &Default::default()).unwrap().value, q(0));
    }

    #[test]
    fn arrangement_chart_residues() {
        let (_, v, b) = arrangement_chart();
        let phi = PhiSpec::c1_power(3);
        let o = ResidueOptions::default();
        assert_eq!(bb_residue(&phi, &v, &pt(&[1, 1, 0]), &o).unwrap(), q(-1));
        assert_eq!(res_log(&phi, &v, &b, &pt(&[1, 1, 0]), &o).unwrap(), q(-8));
        assert_eq!(bb_residue(&phi, &v, &pt(&[1, 1, 1]), &o).unwrap(), q(27));
        assert_eq!(res_log(&phi, &v, &b, &pt(&[0, 0, 1]), &o).unwrap(), q(1));
        assert_eq!(res_log(&phi, &v, &b, &pt(&[0, 0, 0]), &o).unwrap(), q(0));
        assert_eq!(ind_log(&v, &b, &pt(&[0, 0, 0]), LocalOptions::default()).unwrap(), 0);
    }

    #[test]
    fn diagonal_surface_field() {
        let a = Ambient::new(&["z", "w"]);
        let d = Divisor::new(&a, vec![parse_poly("z", &a).unwrap()]).unwrap();
        let b = normal_crossing_basis(&d).unwrap();
        let v = field(&a, &["2*z", "3*w"]);
        let phi = PhiSpec::c1_power(2);
        let o = ResidueOptions::default();
        let origin = pt(&[0, 0]);
        assert_eq!(bb_residue(&phi, &v, &origin, &o).unwrap(), q(25) / q(6));
        assert_eq!(res_log(&phi, &v, &b, &origin, &o).unwrap(), q(3) / q(2));
        assert_eq!(ind_log(&v, &b, &origin, LocalOptions::default()).unwrap(), 0);
    }

    #[test]
    fn milnor_numbers() {
        let a = Ambient::new(&["x", "y"]);
        let o = LocalOptions::default();
        assert_eq!(milnor(&field(&a, &["2*y", "3*x^2"]), &pt(&[0, 0]), o).unwrap(), 2);
        assert_eq!(milnor(&field(&a, &["x^2", "y^2"]), &pt(&[0, 0]), o).unwrap(), 4);
        assert_eq!(milnor(&field(&a, &["x", "y"]), &pt(&[0, 0]), o).unwrap(), 1);
    }

    #[test]
    fn index_from_staircase() {
        let a = Ambient::new(&["z", "w"]);
        let d = Divisor::new(&a, vec![parse_poly("z", &a).unwrap()]).unwrap();
        let b = normal_crossing_basis(&d).unwrap();
        // θ = (z, w^2)
        let v = field(&a, &["z^2", "w^2"]);
        assert_eq!(ind_log(&v, &b, &pt(&[0, 0]), LocalOptions::default()).unwrap(), 2);
    }

    #[test]
    fn pencil_euler_field() {
        let a = Ambient::new(&["z", "w"]);
        let p = |s: &str| -> Poly { parse_poly(s, &a).unwrap() };
        let d = Divisor::new(&a, vec![p("z"), p("w"), p("z+w")]).unwrap();
        let b = verify_saito(vec![vec![p("z"), p("z^2")], vec![p("w"), p("-w^2")]], &d).unwrap();
        let e = b.field(0);
        let r = res_log(&PhiSpec::c1_power(2), &e, &b, &pt(&[0, 0]), &Default::default()).unwrap();
        assert_eq!(r, q(1));
    }

    #[test]
    fn degenerate_with_separator() {
        let a = Ambient::new(&["z", "w"]);
        let v = field(&a, &["z^2", "w^2*(w-1)"]);
        let h = parse_poly("z*w", &a).unwrap();
        let origin = pt(&[0, 0]);
        let none = groth_residue(&h, &v, &origin, &Default::default());
        assert!(matches!(none, Err(ResidueError::SeparatorRequired { .. })));
        let o = ResidueOptions { other_zeros: vec![pt(&[0, 1])], ..Default::default() };
        let r1 = groth_residue(&h, &v, &origin, &o).unwrap();
        let s2 = parse_poly("(w-1)*(z+2)", &a).unwrap();
        let o2 = ResidueOptions { separator: Some(s2), extra_exponent: 1, extra_t: 1, ..Default::default() };
        let r2 = groth_residue(&h, &v, &origin, &o2).unwrap();
        assert_ne!(r1.path, r2.path);
        assert_eq!(r1.value, r2.value);
        // Res[zw; z^2, w^2(w-1)] = coefficient of z w in zw/(w-1) = -1
        assert_eq!(r1.value, q(-1));
    }
}
