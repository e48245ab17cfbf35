//! The global verifier: local residues summed over the singular points
//! against the characteristic number on the Chern side.

use num_traits::Zero;
use rayon::prelude::*;

use super::{homogenize, normalize, point_string, to_chart, Scene, SceneError, ScenePoint, Space};
use crate::algebra::int;
use crate::chern::{
    foliation_tangent_pn, poincare_bound_check, tangent_pn, total_chern_log, total_chern_log_pn, virtual_phi,
    CohomologyRing, PoincareVerdict, TotalClass,
};
use crate::residues::{bb_residue, ind_log, milnor, res_log, PhiSpec, ResidueOptions, ResidueReport};
use crate::{Poly, Rational};

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Worker threads; `None` lets rayon decide.
    pub jobs: Option<usize>,
    /// Replaces the scene's `φ`.
    pub phi: Option<PhiSpec<Rational>>,
    /// Skip recomputing each point in the other charts containing it.
    pub skip_atlas_check: bool,
}

/// `Σ μ(p)` against the expected number of singular points.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub milnor_sum: usize,
    pub expected: Rational,
    pub ok: bool,
}

impl Certificate {
    /// `expected - Σ μ`.
    pub fn deficit(&self) -> Rational {
        &self.expected - int::<Rational>(self.milnor_sum as i64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Equal,
    /// `difference` is local total minus Chern side; `count_deficit` is the
    /// shortfall of the completeness certificate.
    Mismatch {
        difference: Rational,
        count_deficit: Rational,
        atlas_consistent: bool,
    },
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal)
    }
}

#[derive(Clone, Debug)]
pub struct ChernSide {
    pub ring: Option<CohomologyRing<Rational>>,
    pub log_tangent: Option<TotalClass<Rational>>,
    pub foliation_tangent: Option<TotalClass<Rational>>,
    pub value: Rational,
}

#[derive(Clone, Debug)]
pub struct GlobalReport {
    pub scene: String,
    pub phi: String,
    pub points: Vec<ResidueReport<Rational>>,
    pub local_total: Rational,
    pub chern_side: Rational,
    pub certificate: Option<Certificate>,
    pub atlas_consistent: bool,
    pub atlas_notes: Vec<String>,
    pub verdict: Verdict,
    pub poincare: Option<PoincareVerdict<Rational>>,
    pub flags: Vec<String>,
}

impl GlobalReport {
    pub fn exit_code(&self) -> i32 {
        if self.verdict.is_equal() {
            0
        } else {
            1
        }
    }
}

/// Deduplicated points, sorted by chart and then coordinates. On `P^n` two
/// entries naming the same projective point count once.
pub(crate) fn dedupe(scene: &Scene) -> (Vec<ScenePoint>, Vec<String>) {
    let mut seen: Vec<Vec<Rational>> = Vec::new();
    let mut kept = Vec::new();
    let mut flags = Vec::new();
    for p in &scene.points {
        let key = if scene.is_projective() {
            normalize(&homogenize(p.chart, &p.coords))
        } else {
            let mut k = vec![int::<Rational>(p.chart as i64)];
            k.extend(p.coords.iter().cloned());
            k
        };
        if seen.contains(&key) {
            flags.push(format!("duplicate point {} in chart {} dropped", point_string(&p.coords), p.chart));
            continue;
        }
        seen.push(key);
        kept.push(p.clone());
    }
    kept.sort_by(|a, b| (a.chart, &a.coords).cmp(&(b.chart, &b.coords)));
    (kept, flags)
}

/// The listed zeros other than `p`, expressed in `chart`.
fn other_zeros(scene: &Scene, points: &[ScenePoint], chart: usize, p: &[Rational]) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for q in points {
        let coords = if scene.is_projective() {
            match to_chart(chart, &homogenize(q.chart, &q.coords)) {
                Some(c) => c,
                None => continue,
            }
        } else if q.chart == chart {
            q.coords.clone()
        } else {
            continue;
        };
        if coords != p && !out.contains(&coords) {
            out.push(coords);
        }
    }
    out
}

pub(crate) fn residues_at(
    scene: &Scene,
    phi: &PhiSpec<Rational>,
    chart_id: usize,
    p: &[Rational],
    others: Vec<Vec<Rational>>,
) -> Result<ResidueReport<Rational>, SceneError> {
    let wrap = |e| SceneError::Residue { point: format!("chart {chart_id} {}", point_string(p)), source: e };
    let chart =
        scene.chart(chart_id).ok_or_else(|| SceneError::validation("point", format!("unknown chart {chart_id}")))?;
    let v = &chart.field;
    if !v.vanishes_at(p) {
        return Err(SceneError::validation(
            "point",
            format!("{} is not a zero of the chart {chart_id} field", point_string(p)),
        ));
    }
    let opts = ResidueOptions { other_zeros: others, ..ResidueOptions::default() };
    let on_divisor = chart.divisor.contains_point(p);
    let mu = milnor(v, p, opts.local).map_err(wrap)?;
    let bb = bb_residue(phi, v, p, &opts).map_err(wrap)?;
    let (rl, il) = if on_divisor {
        let basis = scene.basis(chart_id)?;
        (Some(res_log(phi, v, basis, p, &opts).map_err(wrap)?), Some(ind_log(v, basis, p, opts.local).map_err(wrap)?))
    } else {
        (None, None)
    };
    let jac = crate::algebra::det(&v.jacobian(), v.ambient()).eval(p);
    Ok(ResidueReport {
        chart: chart_id,
        point: p.to_vec(),
        label: None,
        on_divisor,
        nondegenerate: !jac.is_zero(),
        milnor: mu,
        bb,
        res_log: rl,
        ind_log: il,
        gsv: None,
        cs: None,
    })
}

/// All local invariants of the scene's field at one point, with the other
/// listed zeros used for the separator when needed.
pub fn local_residue(scene: &Scene, chart: usize, point: &[Rational]) -> Result<ResidueReport<Rational>, SceneError> {
    let (points, _) = dedupe(scene);
    let others = other_zeros(scene, &points, chart, point);
    let mut r = residues_at(scene, &scene.phi, chart, point, others)?;
    r.label = scene.points.iter().find(|p| p.chart == chart && p.coords == point).and_then(|p| p.label.clone());
    Ok(r)
}

struct PointOutcome {
    report: ResidueReport<Rational>,
    notes: Vec<String>,
}

fn process_point(
    scene: &Scene,
    phi: &PhiSpec<Rational>,
    points: &[ScenePoint],
    p: &ScenePoint,
    atlas: bool,
) -> Result<PointOutcome, SceneError> {
    let others = other_zeros(scene, points, p.chart, &p.coords);
    let mut report = residues_at(scene, phi, p.chart, &p.coords, others)?;
    report.label = p.label.clone();
    let mut notes = Vec::new();
    if atlas && scene.is_projective() {
        let hom = homogenize(p.chart, &p.coords);
        for &k in scene.charts.keys() {
            if k == p.chart {
                continue;
            }
            let Some(coords) = to_chart(k, &hom) else { continue };
            let chart = &scene.charts[&k];
            if chart.divisor.contains_point(&coords) && chart.basis.is_none() {
                continue;
            }
            let others = other_zeros(scene, points, k, &coords);
            let again = residues_at(scene, phi, k, &coords, others)?;
            if again.contribution() != report.contribution() || again.milnor != report.milnor {
                notes.push(format!(
                    "point {} of chart {}: contribution {} there but {} in chart {k}",
                    point_string(&p.coords),
                    p.chart,
                    report.contribution(),
                    again.contribution()
                ));
            }
        }
    }
    Ok(PointOutcome { report, notes })
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

fn parse_part(
    ring: &CohomologyRing<Rational>,
    text: &str,
    i: usize,
    projective: bool,
    path: &str,
) -> Result<Poly, SceneError> {
    let p = ring.parse(text).map_err(|e| SceneError::validation(format!("{path}[{i}]"), e))?;
    if projective && i > 0 && p.is_constant() {
        let h = ring.generator("h").expect("projective ring");
        return Ok(h.pow(i as u32).scale(&p.constant_term()));
    }
    Ok(p)
}

fn total_class(
    ring: &CohomologyRing<Rational>,
    parts: &[String],
    projective: bool,
    path: &str,
) -> Result<TotalClass<Rational>, SceneError> {
    if parts.len() > ring.dim() + 1 {
        return Err(SceneError::validation(path, format!("at most {} parts expected", ring.dim() + 1)));
    }
    let polys = parts
        .iter()
        .enumerate()
        .map(|(i, s)| parse_part(ring, s, i, projective, path))
        .collect::<Result<Vec<_>, _>>()?;
    TotalClass::from_parts(ring, polys).map_err(|e| SceneError::validation(path, e))
}

/// Ring, `c(T_X(-log D))`, `c(T_F)` and `c(T_X)`.
pub(crate) type SceneClasses =
    (CohomologyRing<Rational>, Option<TotalClass<Rational>>, TotalClass<Rational>, Option<TotalClass<Rational>>);

/// The cohomology ring with `c(T_X(-log D))`, `c(T_X)` and `c(T_F)`, when
/// the scene lives on a space with a ring.
pub(crate) fn classes(scene: &Scene) -> Result<Option<SceneClasses>, SceneError> {
    let ch = &scene.chern;
    match &scene.space {
        Space::Projective { n } => {
            let ring = CohomologyRing::pn(*n);
            let log = match &ch.total_log_tangent {
                Some(parts) => Some(total_class(&ring, parts, true, "chern.total_log_tangent")?),
                None if scene.charts.values().all(|c| !c.basis_supplied) => {
                    let degrees: Vec<u32> =
                        scene.divisor_components.iter().map(|c| c.total_degree().unwrap_or(0)).collect();
                    Some(total_chern_log_pn(&ring, &degrees))
                }
                None => None,
            };
            let tf = match &ch.foliation_tangent {
                Some(parts) => total_class(&ring, parts, true, "chern.foliation_tangent")?,
                None => foliation_tangent_pn(&ring, scene.degree.unwrap_or(0)),
            };
            let tx = match &ch.tangent {
                Some(parts) => total_class(&ring, parts, true, "chern.tangent")?,
                None => tangent_pn(&ring),
            };
            Ok(Some((ring, log, tf, Some(tx))))
        }
        Space::Presented { presentation, .. } => {
            let ring = CohomologyRing::presented(presentation)?;
            let tx = ch.tangent.as_ref().map(|t| total_class(&ring, t, false, "chern.tangent")).transpose()?;
            let log = match (&ch.total_log_tangent, &tx, &ch.log_components) {
                (Some(parts), _, _) => Some(total_class(&ring, parts, false, "chern.total_log_tangent")?),
                (None, Some(t), comps) => {
                    let comps = comps
                        .iter()
                        .flatten()
                        .enumerate()
                        .map(|(i, s)| {
                            ring.parse(s).map_err(|e| SceneError::validation(format!("chern.log_components[{i}]"), e))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Some(total_chern_log(&ring, t, &comps))
                }
                (None, None, _) => None,
            };
            let tf = match &ch.foliation_tangent {
                Some(parts) => total_class(&ring, parts, false, "chern.foliation_tangent")?,
                None => TotalClass::one(&ring),
            };
            Ok(Some((ring, log, tf, tx)))
        }
        Space::Affine { .. } => Ok(None),
    }
}

/// `∫ φ(T_X(-log D) - T_F)`, or the supplied `integral` when present.
pub fn chern_side(scene: &Scene, phi: &PhiSpec<Rational>) -> Result<ChernSide, SceneError> {
    let cls = classes(scene)?;
    let (ring, log, tf) = match cls {
        Some((ring, log, tf, _)) => (Some(ring), log, Some(tf)),
        None => (None, None, None),
    };
    if let Some(v) = &scene.chern.integral {
        return Ok(ChernSide { ring, log_tangent: log, foliation_tangent: tf, value: v.clone() });
    }
    let (Some(r), Some(e), Some(f)) = (&ring, &log, &tf) else {
        return Err(SceneError::Unsupported {
            message: "no characteristic class for T(-log D): supply [chern] total_log_tangent or integral".into(),
        });
    };
    let value = virtual_phi(phi, e, f, r)?;
    Ok(ChernSide { ring, log_tangent: log, foliation_tangent: tf, value })
}

/// Expected `Σ μ`: `Σ_{i ≤ n} d^i` on `P^n`, `∫ c_n(T_X - T_F)` on a
/// presented space when `c(T_X)` is known.
fn expected_count(scene: &Scene) -> Result<Option<Rational>, SceneError> {
    match &scene.space {
        Space::Projective { n } => {
            let d = int::<Rational>(scene.degree.unwrap_or(0) as i64);
            Ok(Some((0..=*n as u32).fold(Rational::zero(), |acc, i| acc + crate::algebra::Field::powu(&d, i))))
        }
        Space::Presented { n, .. } => match classes(scene)? {
            Some((ring, _, tf, Some(tx))) => Ok(Some(virtual_phi(&PhiSpec::top(*n), &tx, &tf, &ring)?)),
            _ => Ok(None),
        },
        Space::Affine { .. } => Ok(None),
    }
}

fn certificate_from(expected: Option<Rational>, milnor_sum: usize) -> Option<Certificate> {
    expected.map(|e| Certificate { ok: e == int::<Rational>(milnor_sum as i64), milnor_sum, expected: e })
}

/// Compares `Σ μ(p)` over the deduplicated points with the expected count.
pub fn certify_completeness(scene: &Scene) -> Result<Option<Certificate>, SceneError> {
    let (points, _) = dedupe(scene);
    let mut sum = 0;
    for p in &points {
        let chart = &scene.charts[&p.chart];
        sum += milnor(&chart.field, &p.coords, Default::default())
            .map_err(|e| SceneError::Residue { point: point_string(&p.coords), source: e })?;
    }
    Ok(certificate_from(expected_count(scene)?, sum))
}

pub fn run_global(scene: &Scene) -> Result<GlobalReport, SceneError> {
    run_global_with(scene, &RunOptions::default())
}

pub fn run_global_with(scene: &Scene, opts: &RunOptions) -> Result<GlobalReport, SceneError> {
    let phi = opts.phi.clone().unwrap_or_else(|| scene.phi.clone());
    if phi.dim() != scene.dim() {
        return Err(SceneError::validation(
            "phi",
            format!("φ is for dimension {}, scene has {}", phi.dim(), scene.dim()),
        ));
    }
    let (points, mut flags) = dedupe(scene);
    flags.splice(0..0, scene.flags.iter().cloned());
    let atlas = !opts.skip_atlas_check;
    let outcomes: Vec<Result<PointOutcome, SceneError>> =
        with_pool(opts.jobs, || points.par_iter().map(|p| process_point(scene, &phi, &points, p, atlas)).collect());
    let mut reports = Vec::with_capacity(outcomes.len());
    let mut atlas_notes = Vec::new();
    for o in outcomes {
        let o = o?;
        reports.push(o.report);
        atlas_notes.extend(o.notes);
    }
    let local_total = reports.iter().fold(Rational::zero(), |acc, r| acc + r.contribution());
    let chern = chern_side(scene, &phi)?;
    let milnor_sum = reports.iter().map(|r| r.milnor).sum();
    let certificate = certificate_from(expected_count(scene)?, milnor_sum);
    let atlas_consistent = atlas_notes.is_empty();
    let cert_ok = certificate.as_ref().is_none_or(|c| c.ok);
    let verdict = if local_total == chern.value && cert_ok && atlas_consistent {
        Verdict::Equal
    } else {
        Verdict::Mismatch {
            difference: &local_total - &chern.value,
            count_deficit: certificate.as_ref().map_or_else(Rational::zero, Certificate::deficit),
            atlas_consistent,
        }
    };
    let poincare = match scene.space {
        Space::Projective { n } if phi.poly() == PhiSpec::<Rational>::c1_power(n).poly() => {
            Some(poincare_bound_check(n as u32, scene.divisor_degree(), scene.degree.unwrap_or(0), local_total.clone()))
        }
        _ => None,
    };
    Ok(GlobalReport {
        scene: scene.name.clone(),
        phi: phi.to_string(),
        points: reports,
        local_total,
        chern_side: chern.value,
        certificate,
        atlas_consistent,
        atlas_notes,
        verdict,
        poincare,
        flags,
    })
}

/// The degree-bound verdict for a scene on odd-dimensional `P^n`, from the
/// total of the `c_1^n` residues.
pub fn poincare_check(scene: &Scene, jobs: Option<usize>) -> Result<Option<PoincareVerdict<Rational>>, SceneError> {
    let Space::Projective { n } = scene.space else { return Ok(None) };
    let opts = RunOptions { jobs, phi: Some(PhiSpec::c1_power(n)), skip_atlas_check: true };
    Ok(run_global_with(scene, &opts)?.poincare)
}
