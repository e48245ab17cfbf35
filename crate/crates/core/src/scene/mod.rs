//! Scenes: the global data of a foliation on a compact space, loaded from
//! TOML, together with the verifier that compares the sum of local residues
//! with the characteristic number.
//!
//! On `P^n` chart `j` is `{z_j ≠ 0}` with affine coordinates `x_i = z_i/z_j`
//! for `i ≠ j`, listed in increasing `i` and named `x{i}`.

mod ledger;
mod model;
mod report;
mod run;

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{parse_poly, parse_rational, AlgebraError, Ambient, MPoly};
use crate::chern::{ChernError, Presentation};
use crate::foliation::{normal_crossing_basis, verify_saito, Divisor, FoliationError, SaitoBasis, VectorField};
use crate::residues::{PhiSpec, ResidueError};
use crate::surfaces::SurfaceError;
use crate::{Poly, Rational};

pub use ledger::{surface_ledger, LedgerPointReport, SurfaceLedgerReport};
pub use model::RawScene;
pub use report::{rational_string, report_json, report_markdown};
pub use run::{
    certify_completeness, chern_side, local_residue, poincare_check, run_global, run_global_with, Certificate,
    ChernSide, GlobalReport, RunOptions, Verdict,
};

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid scene at {path}: {message}")]
    Validation { path: String, message: String },
    #[error("chart {chart} carries the zero field")]
    DegenerateChart { chart: usize },
    #[error("unsupported: {message}")]
    Unsupported { message: String },
    #[error("at {point}: {source}")]
    Residue { point: String, source: ResidueError },
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

impl SceneError {
    fn validation(path: impl Into<String>, message: impl ToString) -> Self {
        SceneError::Validation { path: path.into(), message: message.to_string() }
    }

    /// Process exit code: 2 for bad input, 3 for constructions outside the
    /// supported scope.
    pub fn exit_code(&self) -> i32 {
        match self {
            SceneError::Unsupported { .. } | SceneError::Surface(SurfaceError::UnsupportedBranch { .. }) => 3,
            SceneError::Residue { source: ResidueError::SeparatorRequired { .. } | ResidueError::Ideal(_), .. } => 3,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Space {
    Projective { n: usize },
    Presented { n: usize, presentation: Presentation },
    Affine { n: usize },
}

impl Space {
    pub fn dim(&self) -> usize {
        match self {
            Space::Projective { n } | Space::Presented { n, .. } | Space::Affine { n } => *n,
        }
    }
}

/// One affine chart: the field, the divisor and the Saito basis used for the
/// log residues there (when one is available).
#[derive(Clone, Debug)]
pub struct Chart {
    pub id: usize,
    pub ambient: Ambient,
    pub field: VectorField<Rational>,
    pub divisor: Divisor<Rational>,
    pub basis: Option<SaitoBasis<Rational>>,
    pub basis_supplied: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenePoint {
    pub chart: usize,
    pub coords: Vec<Rational>,
    pub label: Option<String>,
}

/// Characteristic-class data from the `[chern]` table, still as text.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ChernData {
    pub total_log_tangent: Option<Vec<String>>,
    pub tangent: Option<Vec<String>>,
    pub foliation_tangent: Option<Vec<String>>,
    pub log_components: Option<Vec<String>>,
    pub integral: Option<Rational>,
}

#[derive(Clone, Debug)]
pub struct Scene {
    pub name: String,
    pub description: Option<String>,
    pub space: Space,
    /// Homogeneous coordinates and the components `F_0..F_n`, for projective
    /// scenes given by a homogeneous field.
    pub homogeneous: Option<(Ambient, Vec<Poly>)>,
    /// Homogeneous divisor components for projective scenes.
    pub divisor_components: Vec<Poly>,
    pub degree: Option<u32>,
    pub charts: BTreeMap<usize, Chart>,
    pub points: Vec<ScenePoint>,
    pub phi: PhiSpec<Rational>,
    pub chern: ChernData,
    /// Non-fatal observations made while loading.
    pub flags: Vec<String>,
}

fn parse_in(text: &str, amb: &Ambient, path: &str) -> Result<Poly, SceneError> {
    parse_poly(text, amb).map_err(|e| SceneError::validation(path, e))
}

fn parse_q(text: &str, path: &str) -> Result<Rational, SceneError> {
    parse_rational(text).map_err(|e: AlgebraError| SceneError::validation(path, e))
}

/// Affine coordinate names of chart `j` on `P^n`.
pub fn chart_ambient(n: usize, j: usize) -> Ambient {
    Ambient::new(&(0..=n).filter(|&i| i != j).map(|i| format!("x{i}")).collect::<Vec<_>>())
}

/// Homogeneous coordinates of a chart point, with a 1 in slot `j`.
pub fn homogenize(j: usize, coords: &[Rational]) -> Vec<Rational> {
    let mut out = coords.to_vec();
    out.insert(j, Rational::one());
    out
}

/// Coordinates in chart `k`, if the point lies in it.
pub fn to_chart(k: usize, hom: &[Rational]) -> Option<Vec<Rational>> {
    if hom[k].is_zero() {
        return None;
    }
    Some(hom.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, x)| x / &hom[k]).collect())
}

/// Representative with first nonzero coordinate equal to 1.
pub fn normalize(hom: &[Rational]) -> Vec<Rational> {
    let lead = hom.iter().find(|x| !x.is_zero()).cloned().unwrap_or_else(Rational::one);
    hom.iter().map(|x| x / &lead).collect()
}

/// Restricts homogeneous data to chart `j`:
/// `v_i = F_i(…,1,…) - x_i F_j(…,1,…)`, divisor components dehomogenized
/// with those that become constant dropped.
pub fn chart_restrict(
    hom_amb: &Ambient,
    f: &[Poly],
    components: &[Poly],
    j: usize,
) -> Result<(VectorField<Rational>, Vec<Poly>), SceneError> {
    let n = hom_amb.arity() - 1;
    let amb = chart_ambient(n, j);
    let values: Vec<Poly> = (0..=n)
        .map(|i| match i.cmp(&j) {
            std::cmp::Ordering::Less => MPoly::var(&amb, i),
            std::cmp::Ordering::Equal => MPoly::one(&amb),
            std::cmp::Ordering::Greater => MPoly::var(&amb, i - 1),
        })
        .collect();
    let fj = f[j].compose(&values, &amb);
    let comps: Vec<Poly> =
        (0..=n).filter(|&i| i != j).map(|i| &f[i].compose(&values, &amb) - &(&values[i] * &fj)).collect();
    let field = VectorField::new(&amb, comps).expect("chart field has n components");
    if field.is_zero() {
        return Err(SceneError::DegenerateChart { chart: j });
    }
    let div = components.iter().map(|c| c.compose(&values, &amb)).filter(|c| !c.is_constant()).collect();
    Ok((field, div))
}

fn random_nonzero(rng: &mut ChaCha8Rng) -> Rational {
    let num: i64 = loop {
        let x = rng.gen_range(-9i64..=9);
        if x != 0 {
            break x;
        }
    };
    let den: i64 = rng.gen_range(1i64..=5);
    Rational::new(num.into(), den.into())
}

/// Checks that explicit charts `j` and `k` of a projective scene define the
/// same foliation, by comparing directions at seeded random points.
fn spot_check_overlap(cj: &Chart, ck: &Chart, n: usize, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (j, k) = (cj.id, ck.id);
    for sample in 0..5 {
        let hom: Vec<Rational> = (0..=n).map(|_| random_nonzero(rng)).collect();
        let x = to_chart(j, &hom).unwrap();
        let y = to_chart(k, &hom).unwrap();
        let vj = cj.field.eval(&x);
        let vk = ck.field.eval(&y);
        // normalized at k: Y_k = 1
        let big_y: Vec<Rational> = hom.iter().map(|h| h / &hom[k]).collect();
        let var_k: Vec<usize> = (0..=n).filter(|&l| l != k).collect();
        let w: Vec<Rational> = (0..=n)
            .filter(|&i| i != j)
            .map(|i| {
                var_k.iter().zip(&vk).fold(Rational::zero(), |acc, (&l, vl)| {
                    let mut d = Rational::zero();
                    if l == i {
                        d += Rational::one() / &big_y[j];
                    }
                    if l == j {
                        d -= &big_y[i] / (&big_y[j] * &big_y[j]);
                    }
                    acc + d * vl
                })
            })
            .collect();
        let zero_w = w.iter().all(Zero::is_zero);
        let zero_v = vj.iter().all(Zero::is_zero);
        let parallel = (0..n).all(|a| (a + 1..n).all(|b| &w[a] * &vj[b] == &w[b] * &vj[a]));
        if zero_w != zero_v || !parallel {
            return Err(format!("charts {j} and {k} disagree at sample {sample}"));
        }
    }
    Ok(())
}

fn default_names(prefix: &str, range: std::ops::Range<usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

/// Reads and validates a scene file.
pub fn load_scene(path: impl AsRef<Path>) -> Result<Scene, SceneError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| SceneError::Io { path: path.display().to_string(), message: e.to_string() })?;
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let mut scene = parse_scene(&text)?;
    if scene.name.is_empty() {
        scene.name = stem;
    }
    Ok(scene)
}

/// Parses and validates scene text.
pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    let raw: RawScene =
        toml::from_str(text).map_err(|e| SceneError::Parse { path: "scene".into(), message: e.to_string() })?;
    build_scene(raw)
}

fn build_scene(raw: RawScene) -> Result<Scene, SceneError> {
    let n = raw.space.dim;
    if n == 0 {
        return Err(SceneError::validation("space.dim", "dimension must be positive"));
    }
    let space = match raw.space.kind.as_str() {
        "projective" => Space::Projective { n },
        "affine" => Space::Affine { n },
        "presented" => {
            let p = raw
                .presented
                .as_ref()
                .ok_or_else(|| SceneError::validation("presented", "presented space needs a [presented] table"))?;
            Space::Presented {
                n,
                presentation: Presentation {
                    generators: p.generators.clone(),
                    degrees: p.degrees.clone(),
                    relations: p.relations.clone(),
                    integral_monomial: p.integral_monomial.clone(),
                    integral_value: p.integral_value.clone(),
                },
            }
        }
        other => return Err(SceneError::validation("space.kind", format!("unknown kind `{other}`"))),
    };
    let mut flags = Vec::new();
    let raw_components = raw.divisor.as_ref().map(|d| d.components.clone()).unwrap_or_default();

    let mut charts = BTreeMap::new();
    let mut homogeneous = None;
    let mut divisor_components = Vec::new();
    let mut degree = raw.foliation.degree;

    match (&space, &raw.foliation.homogeneous, &raw.foliation.charts) {
        (_, Some(_), Some(_)) => {
            return Err(SceneError::validation("foliation", "give either `homogeneous` or `charts`, not both"));
        }
        (_, None, None) => return Err(SceneError::validation("foliation", "missing field data")),
        (Space::Projective { .. }, Some(hom), None) => {
            let names = raw.space.variables.clone().unwrap_or_else(|| default_names("z", 0..n + 1));
            if names.len() != n + 1 {
                return Err(SceneError::validation("space.variables", format!("expected {} names", n + 1)));
            }
            let amb = Ambient::new(&names);
            if hom.len() != n + 1 {
                return Err(SceneError::validation("foliation.homogeneous", format!("expected {} components", n + 1)));
            }
            let f: Vec<Poly> = hom
                .iter()
                .enumerate()
                .map(|(i, s)| parse_in(s, &amb, &format!("foliation.homogeneous[{i}]")))
                .collect::<Result<_, _>>()?;
            let mut field_degree = None;
            for (i, fi) in f.iter().enumerate() {
                if fi.is_zero() {
                    continue;
                }
                let path = format!("foliation.homogeneous[{i}]");
                if !fi.is_homogeneous() {
                    return Err(SceneError::validation(path, "component is not homogeneous"));
                }
                let d = fi.total_degree().unwrap();
                match field_degree {
                    None => field_degree = Some(d),
                    Some(e) if e != d => {
                        return Err(SceneError::validation(path, format!("degree {d} differs from {e}")));
                    }
                    _ => {}
                }
            }
            let field_degree =
                field_degree.ok_or_else(|| SceneError::validation("foliation.homogeneous", "zero field"))?;
            match degree {
                None => degree = Some(field_degree),
                Some(dd) if dd != field_degree => flags.push(format!(
                    "declared degree {dd} differs from the degree {field_degree} of the homogeneous field; the declared value is used"
                )),
                _ => {}
            }
            divisor_components = raw_components
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let path = format!("divisor.components[{i}]");
                    let c = parse_in(s, &amb, &path)?;
                    if !c.is_homogeneous() || c.is_constant() {
                        return Err(SceneError::validation(
                            path,
                            "component must be a nonconstant homogeneous polynomial",
                        ));
                    }
                    Ok(c)
                })
                .collect::<Result<_, _>>()?;
            Divisor::new(&amb, divisor_components.clone()).map_err(|e| SceneError::validation("divisor", e))?;
            for j in 0..=n {
                let (field, div) = chart_restrict(&amb, &f, &divisor_components, j)?;
                let divisor = Divisor::new(field.ambient(), div).map_err(|e| SceneError::validation("divisor", e))?;
                charts.insert(j, chart_from(j, field, divisor));
            }
            homogeneous = Some((amb, f));
        }
        (_, Some(_), None) => {
            return Err(SceneError::validation("foliation.homogeneous", "homogeneous fields need a projective space"));
        }
        (_, None, Some(list)) => {
            let hom_amb = Ambient::new(&raw.space.variables.clone().unwrap_or_else(|| default_names("z", 0..n + 1)));
            if let Space::Projective { .. } = space {
                divisor_components = raw_components
                    .iter()
                    .enumerate()
                    .map(|(i, s)| parse_in(s, &hom_amb, &format!("divisor.components[{i}]")))
                    .collect::<Result<_, _>>()?;
            }
            for (ci, c) in list.iter().enumerate() {
                let path = format!("foliation.charts[{ci}]");
                if charts.contains_key(&c.chart) {
                    return Err(SceneError::validation(path, format!("chart {} listed twice", c.chart)));
                }
                let amb = match space {
                    Space::Projective { .. } => {
                        if c.chart > n {
                            return Err(SceneError::validation(path, format!("chart index must be at most {n}")));
                        }
                        chart_ambient(n, c.chart)
                    }
                    _ => Ambient::new(&c.variables.clone().unwrap_or_else(|| default_names("x", 1..n + 1))),
                };
                if amb.arity() != n || c.field.len() != n {
                    return Err(SceneError::validation(path, format!("expected {n} variables and components")));
                }
                let comps: Vec<Poly> = c
                    .field
                    .iter()
                    .enumerate()
                    .map(|(i, s)| parse_in(s, &amb, &format!("{path}.field[{i}]")))
                    .collect::<Result<_, _>>()?;
                let field = VectorField::new(&amb, comps).expect("sizes checked");
                if field.is_zero() {
                    return Err(SceneError::DegenerateChart { chart: c.chart });
                }
                let div: Vec<Poly> = match (&space, &c.divisor) {
                    (Space::Projective { .. }, Some(_)) => {
                        return Err(SceneError::validation(path, "projective charts take the divisor from [divisor]"));
                    }
                    (Space::Projective { .. }, None) => {
                        let values: Vec<Poly> = (0..=n)
                            .map(|i| match i.cmp(&c.chart) {
                                std::cmp::Ordering::Less => MPoly::var(&amb, i),
                                std::cmp::Ordering::Equal => MPoly::one(&amb),
                                std::cmp::Ordering::Greater => MPoly::var(&amb, i - 1),
                            })
                            .collect();
                        divisor_components
                            .iter()
                            .map(|d| d.compose(&values, &amb))
                            .filter(|d| !d.is_constant())
                            .collect()
                    }
                    (_, Some(list)) => list
                        .iter()
                        .enumerate()
                        .map(|(i, s)| parse_in(s, &amb, &format!("{path}.divisor[{i}]")))
                        .collect::<Result<_, _>>()?,
                    (_, None) => raw_components
                        .iter()
                        .enumerate()
                        .map(|(i, s)| parse_in(s, &amb, &format!("divisor.components[{i}]")))
                        .collect::<Result<_, _>>()?,
                };
                let divisor =
                    Divisor::new(&amb, div).map_err(|e| SceneError::validation(format!("{path}.divisor"), e))?;
                charts.insert(c.chart, chart_from(c.chart, field, divisor));
            }
            if let Space::Projective { .. } = space {
                let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
                let ids: Vec<usize> = charts.keys().copied().collect();
                for (a, &j) in ids.iter().enumerate() {
                    for &k in &ids[a + 1..] {
                        spot_check_overlap(&charts[&j], &charts[&k], n, &mut rng)
                            .map_err(|m| SceneError::validation("foliation.charts", m))?;
                    }
                }
            }
        }
    }

    for (si, s) in raw.saito.iter().enumerate() {
        let path = format!("saito[{si}]");
        let chart = charts
            .get_mut(&s.chart)
            .ok_or_else(|| SceneError::validation(&path, format!("unknown chart {}", s.chart)))?;
        let amb = chart.ambient.clone();
        let m: Vec<Vec<Poly>> = s
            .matrix
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(|(c, e)| parse_in(e, &amb, &format!("{path}.matrix[{r}][{c}]")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        let basis = verify_saito(m, &chart.divisor).map_err(|e| SceneError::validation(&path, e))?;
        chart.basis = Some(basis);
        chart.basis_supplied = true;
    }

    let mut points = Vec::new();
    for (pi, p) in raw.singularities.iter().enumerate() {
        let path = format!("singularities[{pi}]");
        let chart =
            charts.get(&p.chart).ok_or_else(|| SceneError::validation(&path, format!("unknown chart {}", p.chart)))?;
        if p.point.len() != n {
            return Err(SceneError::validation(&path, format!("expected {n} coordinates")));
        }
        let coords: Vec<Rational> = p
            .point
            .iter()
            .enumerate()
            .map(|(i, s)| parse_q(s, &format!("{path}.point[{i}]")))
            .collect::<Result<_, _>>()?;
        if !chart.field.vanishes_at(&coords) {
            let name = p.label.clone().unwrap_or_else(|| format!("{:?}", p.point));
            return Err(SceneError::validation(
                &path,
                format!("point {name} is not a zero of the chart {} field", p.chart),
            ));
        }
        points.push(ScenePoint { chart: p.chart, coords, label: p.label.clone() });
    }

    let phi_text = raw.phi.as_ref().map(|p| p.expr.clone()).unwrap_or_else(|| format!("c{n}"));
    let phi = PhiSpec::parse(&phi_text, n).map_err(|e| SceneError::validation("phi.expr", e))?;

    let rc = raw.chern.clone().unwrap_or_default();
    let chern = ChernData {
        total_log_tangent: rc.total_log_tangent,
        tangent: rc.tangent,
        foliation_tangent: rc.foliation_tangent,
        log_components: rc.log_components,
        integral: rc.integral.as_deref().map(|s| parse_q(s, "chern.integral")).transpose()?,
    };
    if let Space::Presented { presentation, .. } = &space {
        crate::chern::CohomologyRing::<Rational>::presented(presentation)
            .map_err(|e| SceneError::validation("presented", e))?;
    }

    Ok(Scene {
        name: raw.name.unwrap_or_default(),
        description: raw.description,
        space,
        homogeneous,
        divisor_components,
        degree,
        charts,
        points,
        phi,
        chern,
        flags,
    })
}

fn chart_from(id: usize, field: VectorField<Rational>, divisor: Divisor<Rational>) -> Chart {
    let basis = normal_crossing_basis(&divisor).ok();
    Chart { id, ambient: field.ambient().clone(), field, divisor, basis, basis_supplied: false }
}

impl Scene {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_projective(&self) -> bool {
        matches!(self.space, Space::Projective { .. })
    }

    pub fn chart(&self, id: usize) -> Option<&Chart> {
        self.charts.get(&id)
    }

    /// Total degree of the divisor on `P^n`.
    pub fn divisor_degree(&self) -> u32 {
        self.divisor_components.iter().map(|c| c.total_degree().unwrap_or(0)).sum()
    }

    pub fn with_phi(&self, phi: PhiSpec<Rational>) -> Scene {
        Scene { phi, ..self.clone() }
    }

    /// Homogeneous coordinates of a point of a projective scene.
    pub fn homogeneous_point(&self, p: &ScenePoint) -> Option<Vec<Rational>> {
        self.is_projective().then(|| homogenize(p.chart, &p.coords))
    }

    /// The basis used in `chart` for log residues.
    pub fn basis(&self, chart: usize) -> Result<&SaitoBasis<Rational>, SceneError> {
        self.charts.get(&chart).and_then(|c| c.basis.as_ref()).ok_or_else(|| SceneError::Unsupported {
            message: format!(
                "chart {chart}: divisor is not coordinate normal crossing and no Saito matrix was supplied"
            ),
        })
    }
}

pub(crate) fn point_string(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(rational_string).collect();
    format!("({})", parts.join(", "))
}

impl From<FoliationError> for SceneError {
    fn from(e: FoliationError) -> Self {
        SceneError::validation("foliation", e)
    }
}
