//! Vector fields, divisors and logarithmic frames.
//!
//! A [`SaitoBasis`] stores the fields `δ_1..δ_n` as the columns of a matrix
//! `A`, so `δ_j = Σ_i A[i][j] ∂/∂z_i`. Given a logarithmic field `v`,
//! [`LogFrame`] holds its coordinates `θ` in that basis, the structure
//! constants of the basis and the matrix `M⁺` whose characteristic classes
//! give the log residue.

use thiserror::Error;

use crate::algebra::{adjugate, det, Ambient, Field, MPoly, PolyMatrix};
use crate::ideals::{poly_gcd, IdealError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FoliationError {
    #[error("vector fields or polynomials over different rings")]
    AmbientMismatch,
    #[error("expected {expected} components, got {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("divisor component `{component}` is not a coordinate hyperplane")]
    NotCoordinateNC { component: String },
    #[error("column {column} of the Saito matrix is not logarithmic")]
    NotLogarithmic { column: usize },
    #[error("det A = {det} is not a nonzero constant multiple of f")]
    DeterminantNotUnitTimesF { det: String },
    #[error("field is not logarithmic: coordinate {index} is not polynomial")]
    NotInLogSheaf { index: usize },
    #[error("divisor component `{component}` is constant")]
    ConstantComponent { component: String },
    #[error("divisor components {first} and {second} share a factor")]
    NotCoprime { first: usize, second: usize },
    #[error("divisor component `{component}` is not squarefree")]
    NotSquarefree { component: String },
    #[error("structure constant of [δ{i}, δ{j}] is not polynomial")]
    NotClosed { i: usize, j: usize },
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

/// `v = Σ v_i ∂/∂z_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField<F: Field> {
    ambient: Ambient,
    components: Vec<MPoly<F>>,
}

impl<F: Field> VectorField<F> {
    pub fn new(ambient: &Ambient, components: Vec<MPoly<F>>) -> Result<Self, FoliationError> {
        if components.len() != ambient.arity() {
            return Err(FoliationError::SizeMismatch { expected: ambient.arity(), found: components.len() });
        }
        if components.iter().any(|c| c.ambient() != ambient) {
            return Err(FoliationError::AmbientMismatch);
        }
        Ok(VectorField { ambient: ambient.clone(), components })
    }

    pub fn zero(ambient: &Ambient) -> Self {
        VectorField { ambient: ambient.clone(), components: vec![MPoly::zero(ambient); ambient.arity()] }
    }

    /// The coordinate field `∂/∂z_i`.
    pub fn coordinate(ambient: &Ambient, i: usize) -> Self {
        let mut v = Self::zero(ambient);
        v.components[i] = MPoly::one(ambient);
        v
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn components(&self) -> &[MPoly<F>] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(MPoly::is_zero)
    }

    /// The derivation `v(g) = Σ v_i ∂g/∂z_i`.
    pub fn apply(&self, g: &MPoly<F>) -> MPoly<F> {
        self.components
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(MPoly::zero(&self.ambient), |acc, (i, c)| &acc + &(c * &g.d(i)))
    }

    pub fn lie_bracket(&self, other: &Self) -> Result<Self, FoliationError> {
        if self.ambient != other.ambient {
            return Err(FoliationError::AmbientMismatch);
        }
        let components =
            (0..self.dim()).map(|j| &self.apply(&other.components[j]) - &other.apply(&self.components[j])).collect();
        Ok(VectorField { ambient: self.ambient.clone(), components })
    }

    /// `J[i][j] = ∂v_j/∂z_i`.
    pub fn jacobian(&self) -> PolyMatrix<F> {
        (0..self.dim()).map(|i| self.components.iter().map(|c| c.d(i)).collect()).collect()
    }

    pub fn eval(&self, point: &[F]) -> Vec<F> {
        self.components.iter().map(|c| c.eval(point)).collect()
    }

    pub fn vanishes_at(&self, point: &[F]) -> bool {
        self.eval(point).iter().all(|x| x.is_zero())
    }

    pub fn scale(&self, c: &F) -> Self {
        VectorField { ambient: self.ambient.clone(), components: self.components.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn translate(&self, shift: &[F]) -> Self {
        VectorField {
            ambient: self.ambient.clone(),
            components: self.components.iter().map(|p| p.translate(shift)).collect(),
        }
    }

    pub fn linear_combination(ambient: &Ambient, coeffs: &[MPoly<F>], fields: &[Self]) -> Self {
        let mut out = Self::zero(ambient);
        for (c, f) in coeffs.iter().zip(fields) {
            for (o, x) in out.components.iter_mut().zip(&f.components) {
                *o = &*o + &(c * x);
            }
        }
        out
    }
}

impl<F: Field> std::fmt::Display for VectorField<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c}) d/d{}", self.ambient.names()[i])?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A reduced divisor given by its components. The empty list is the empty
/// divisor with equation `f = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Divisor<F: Field> {
    ambient: Ambient,
    components: Vec<MPoly<F>>,
    f: MPoly<F>,
}

impl<F: Field> Divisor<F> {
    /// Validates the components: nonconstant, squarefree, pairwise coprime.
    pub fn new(ambient: &Ambient, components: Vec<MPoly<F>>) -> Result<Self, FoliationError> {
        if components.iter().any(|c| c.ambient() != ambient) {
            return Err(FoliationError::AmbientMismatch);
        }
        for c in &components {
            if c.is_constant() {
                return Err(FoliationError::ConstantComponent { component: c.to_string() });
            }
            let mut g = c.clone();
            for i in 0..ambient.arity() {
                let dc = c.d(i);
                if !dc.is_zero() {
                    g = poly_gcd(&g, &dc)?;
                }
            }
            if !g.is_constant() {
                return Err(FoliationError::NotSquarefree { component: c.to_string() });
            }
        }
        for i in 0..components.len() {
            for j in i + 1..components.len() {
                if !poly_gcd(&components[i], &components[j])?.is_constant() {
                    return Err(FoliationError::NotCoprime { first: i, second: j });
                }
            }
        }
        Ok(Self::from_trusted(ambient, components))
    }

    /// Skips validation; for components already known to be reduced.
    pub fn from_trusted(ambient: &Ambient, components: Vec<MPoly<F>>) -> Self {
        let f = components.iter().fold(MPoly::one(ambient), |acc, c| &acc * c);
        Divisor { ambient: ambient.clone(), components, f }
    }

    pub fn empty(ambient: &Ambient) -> Self {
        Self::from_trusted(ambient, Vec::new())
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn components(&self) -> &[MPoly<F>] {
        &self.components
    }

    pub fn equation(&self) -> &MPoly<F> {
        &self.f
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains_point(&self, point: &[F]) -> bool {
        self.f.eval(point).is_zero()
    }

    /// Components passing through `point`.
    pub fn components_through(&self, point: &[F]) -> Vec<usize> {
        (0..self.components.len()).filter(|&i| self.components[i].eval(point).is_zero()).collect()
    }

    /// True iff `f` divides `v(f)`.
    pub fn is_logarithmic(&self, v: &VectorField<F>) -> bool {
        self.f.divides(&v.apply(&self.f))
    }

    /// The variable index when `component` is `c * z_i` for a constant `c`.
    fn coordinate_of(component: &MPoly<F>) -> Option<usize> {
        if component.len() != 1 {
            return None;
        }
        let (m, _) = component.terms().next()?;
        if m.degree() != 1 {
            return None;
        }
        m.exps().iter().position(|&e| e == 1)
    }
}

/// Coefficient matrix of a free basis of logarithmic fields together with
/// the constant `c` in `det A = c f`.
#[derive(Clone, Debug, PartialEq)]
pub struct SaitoBasis<F: Field> {
    divisor: Divisor<F>,
    matrix: PolyMatrix<F>,
    constant: F,
}

impl<F: Field> SaitoBasis<F> {
    pub fn divisor(&self) -> &Divisor<F> {
        &self.divisor
    }

    pub fn ambient(&self) -> &Ambient {
        self.divisor.ambient()
    }

    /// `A[i][j]` is the `∂/∂z_i` coefficient of `δ_j`.
    pub fn matrix(&self) -> &PolyMatrix<F> {
        &self.matrix
    }

    pub fn certificate_constant(&self) -> &F {
        &self.constant
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn field(&self, j: usize) -> VectorField<F> {
        VectorField {
            ambient: self.ambient().clone(),
            components: self.matrix.iter().map(|row| row[j].clone()).collect(),
        }
    }

    pub fn fields(&self) -> Vec<VectorField<F>> {
        (0..self.dim()).map(|j| self.field(j)).collect()
    }

    /// True when `det A` does not vanish at `point`, i.e. the fields form a
    /// frame of the tangent bundle there.
    pub fn is_frame_at(&self, point: &[F]) -> bool {
        !det(&self.matrix, self.ambient()).eval(point).is_zero()
    }
}

/// `δ_i = z_i ∂/∂z_i` when `z_i` is a component of `D`, else `∂/∂z_i`.
pub fn normal_crossing_basis<F: Field>(d: &Divisor<F>) -> Result<SaitoBasis<F>, FoliationError> {
    let amb = d.ambient();
    let n = amb.arity();
    let mut diag = vec![MPoly::one(amb); n];
    let mut scale = F::one();
    for c in d.components() {
        let i =
            Divisor::coordinate_of(c).ok_or_else(|| FoliationError::NotCoordinateNC { component: c.to_string() })?;
        if !diag[i].is_one() {
            return Err(FoliationError::NotCoordinateNC { component: c.to_string() });
        }
        diag[i] = MPoly::var(amb, i);
        scale = scale * c.terms().next().unwrap().1.clone();
    }
    let mut a = vec![vec![MPoly::zero(amb); n]; n];
    for (i, e) in diag.into_iter().enumerate() {
        a[i][i] = e;
    }
    Ok(SaitoBasis { divisor: d.clone(), matrix: a, constant: scale.inv() })
}

/// Certifies `a` as a Saito basis for `d`.
pub fn verify_saito<F: Field>(a: PolyMatrix<F>, d: &Divisor<F>) -> Result<SaitoBasis<F>, FoliationError> {
    let amb = d.ambient();
    let n = amb.arity();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(FoliationError::SizeMismatch { expected: n, found: a.len() });
    }
    if a.iter().flatten().any(|e| e.ambient() != amb) {
        return Err(FoliationError::AmbientMismatch);
    }
    let dt = det(&a, amb);
    let c = match dt.div_exact(d.equation()).filter(|q| q.is_constant() && !q.is_zero()) {
        Some(c) => c.constant_term(),
        None => return Err(FoliationError::DeterminantNotUnitTimesF { det: dt.to_string() }),
    };
    let basis = SaitoBasis { divisor: d.clone(), matrix: a, constant: c };
    for j in 0..n {
        if !d.is_logarithmic(&basis.field(j)) {
            return Err(FoliationError::NotLogarithmic { column: j });
        }
    }
    Ok(basis)
}

/// Solves `A θ = v` exactly via the adjugate.
pub fn express_in_basis<F: Field>(v: &VectorField<F>, b: &SaitoBasis<F>) -> Result<Vec<MPoly<F>>, FoliationError> {
    let amb = b.ambient();
    if v.ambient() != amb {
        return Err(FoliationError::AmbientMismatch);
    }
    let dt = det(b.matrix(), amb);
    let adj = adjugate(b.matrix(), amb);
    crate::algebra::mat_vec(&adj, v.components(), amb)
        .into_iter()
        .enumerate()
        .map(|(i, num)| num.div_exact(&dt).ok_or(FoliationError::NotInLogSheaf { index: i }))
        .collect()
}

/// `s[i][j][k]` with `[δ_i, δ_j] = Σ_k s[i][j][k] δ_k`.
pub type StructureConstants<F> = Vec<Vec<Vec<MPoly<F>>>>;

pub fn structure_constants<F: Field>(b: &SaitoBasis<F>) -> Result<StructureConstants<F>, FoliationError> {
    let n = b.dim();
    let amb = b.ambient();
    let fields = b.fields();
    let mut s = vec![vec![vec![MPoly::zero(amb); n]; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let br = fields[i].lie_bracket(&fields[j])?;
            let coords = express_in_basis(&br, b).map_err(|_| FoliationError::NotClosed { i, j })?;
            for (k, c) in coords.into_iter().enumerate() {
                s[j][i][k] = -&c;
                s[i][j][k] = c;
            }
        }
    }
    Ok(s)
}

/// Everything needed to evaluate log residues of `v` in the basis `B`.
#[derive(Clone, Debug)]
pub struct LogFrame<F: Field> {
    pub theta: Vec<MPoly<F>>,
    pub structure: StructureConstants<F>,
    /// `mk[k][i][j] = δ_ik^j`, zero on the row `i = k`.
    pub mk: Vec<PolyMatrix<F>>,
    /// `(δ_i θ_j)`.
    pub jlog_plus: PolyMatrix<F>,
    /// `jlog_plus + Σ_k θ_k mk[k]`.
    pub mplus: PolyMatrix<F>,
}

pub fn log_frame<F: Field>(v: &VectorField<F>, b: &SaitoBasis<F>) -> Result<LogFrame<F>, FoliationError> {
    let n = b.dim();
    let amb = b.ambient();
    let theta = express_in_basis(v, b)?;
    let structure = structure_constants(b)?;
    let fields = b.fields();
    let mk: Vec<PolyMatrix<F>> = (0..n)
        .map(|k| {
            (0..n)
                .map(|i| (0..n).map(|j| if i == k { MPoly::zero(amb) } else { structure[i][k][j].clone() }).collect())
                .collect()
        })
        .collect();
    let jlog_plus: PolyMatrix<F> = (0..n).map(|i| (0..n).map(|j| fields[i].apply(&theta[j])).collect()).collect();
    let mut mplus = jlog_plus.clone();
    for k in 0..n {
        if theta[k].is_zero() {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                if !mk[k][i][j].is_zero() {
                    mplus[i][j] = &mplus[i][j] + &(&theta[k] * &mk[k][i][j]);
                }
            }
        }
    }
    Ok(LogFrame { theta, structure, mk, jlog_plus, mplus })
}
