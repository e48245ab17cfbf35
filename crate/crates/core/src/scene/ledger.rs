//! Surface ledgers: GSV and Camacho–Sad totals along the divisor, checked
//! against the intersection numbers.

use num_traits::Zero;

use super::run::{classes, dedupe, residues_at};
use super::{homogenize, point_string, to_chart, Scene, SceneError, ScenePoint, Space};
use crate::algebra::int;
use crate::residues::PhiSpec;
use crate::surfaces::{cs_smooth, gsv_smooth, LedgerEntry, SmoothBranch, SurfaceError, SurfaceLedger};
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct LedgerPointReport {
    pub chart: usize,
    pub point: Vec<Rational>,
    pub label: Option<String>,
    pub on_divisor: bool,
    pub bb: Rational,
    pub res_log: Option<Rational>,
    pub gsv: Option<u32>,
    pub cs: Option<Rational>,
}

#[derive(Clone, Debug)]
pub struct SurfaceLedgerReport {
    pub scene: String,
    pub points: Vec<LedgerPointReport>,
    /// Totals over the points of `D`.
    pub ledger: SurfaceLedger<Rational>,
    /// `Σ BB_{c1²}` over every listed point.
    pub bb_all: Rational,
}

impl SurfaceLedgerReport {
    /// 0 when Brunella, Camacho–Sad and `BB - Res^log = 2 GSV + CS` hold.
    pub fn exit_code(&self) -> i32 {
        let l = &self.ledger;
        if l.brunella_ok && l.camacho_sad_ok && l.plus_form_ok {
            0
        } else {
            1
        }
    }
}

/// The charts (own chart first) in which `p` is visible, with its
/// coordinates there.
fn placements(scene: &Scene, p: &ScenePoint) -> Vec<(usize, Vec<Rational>)> {
    let mut out = vec![(p.chart, p.coords.clone())];
    if scene.is_projective() {
        let hom = homogenize(p.chart, &p.coords);
        for &k in scene.charts.keys() {
            if k != p.chart {
                if let Some(c) = to_chart(k, &hom) {
                    out.push((k, c));
                }
            }
        }
    }
    out
}

/// A chart where exactly one component passes through `p` and that
/// component is `a (x_k - c)`; returns the chart, coordinates and `k`.
fn adapted_branch(scene: &Scene, p: &ScenePoint) -> Result<(usize, Vec<Rational>, usize), SceneError> {
    let unsupported = |reason: &str| {
        SceneError::Surface(SurfaceError::UnsupportedBranch {
            point: format!("chart {} {}", p.chart, point_string(&p.coords)),
            reason: reason.to_string(),
        })
    };
    let mut node = false;
    for (k, coords) in placements(scene, p) {
        let chart = &scene.charts[&k];
        let through = chart.divisor.components_through(&coords);
        if through.len() > 1 {
            node = true;
            continue;
        }
        let Some(&i) = through.first() else { continue };
        let comp = &chart.divisor.components()[i];
        let vars: Vec<usize> = (0..comp.arity()).filter(|&v| comp.degree_in(v) > 0).collect();
        if comp.total_degree() == Some(1) && vars.len() == 1 {
            return Ok((k, coords, vars[0]));
        }
    }
    Err(unsupported(if node { "the point is a singular point of D" } else { "no chart straightens the branch" }))
}

/// `(D², (N_F - D)·D)` from the cohomology ring of the scene.
fn intersection_numbers(scene: &Scene) -> Result<(Rational, Rational), SceneError> {
    match &scene.space {
        Space::Projective { n: 2 } => {
            let e = int::<Rational>(scene.divisor_degree() as i64);
            let d = int::<Rational>(scene.degree.unwrap_or(0) as i64);
            Ok((&e * &e, (d + int::<Rational>(2) - &e) * e))
        }
        Space::Presented { n: 2, .. } => {
            let Some((ring, _, tf, Some(tx))) = classes(scene)? else {
                return Err(SceneError::Unsupported { message: "surface ledger needs [chern] tangent".into() });
            };
            let comps = scene.chern.log_components.as_ref().ok_or_else(|| SceneError::Unsupported {
                message: "surface ledger needs [chern] log_components".into(),
            })?;
            let mut d = crate::algebra::MPoly::zero(ring.ambient());
            for (i, s) in comps.iter().enumerate() {
                let c = ring.parse(s).map_err(|e| SceneError::validation(format!("chern.log_components[{i}]"), e))?;
                d = &d + &c;
            }
            let nf = tx.part(1) - tf.part(1);
            let d2 = ring.integrate(&ring.mul(&d, &d));
            let brunella = ring.integrate(&ring.mul(&(&nf - &d), &d));
            Ok((d2, brunella))
        }
        _ => Err(SceneError::Unsupported { message: "surface ledgers need a two-dimensional compact scene".into() }),
    }
}

pub fn surface_ledger(scene: &Scene) -> Result<SurfaceLedgerReport, SceneError> {
    if scene.dim() != 2 {
        return Err(SceneError::Surface(SurfaceError::NotSurface { found: scene.dim() }));
    }
    let (d_squared, brunella_rhs) = intersection_numbers(scene)?;
    let phi = PhiSpec::c1_power(2);
    let (points, _) = dedupe(scene);
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    let mut bb_all = Rational::zero();
    for p in &points {
        let others: Vec<Vec<Rational>> = points
            .iter()
            .filter_map(|q| {
                if scene.is_projective() {
                    to_chart(p.chart, &homogenize(q.chart, &q.coords))
                } else {
                    (q.chart == p.chart).then(|| q.coords.clone())
                }
            })
            .filter(|c| c != &p.coords)
            .collect();
        let r = residues_at(scene, &phi, p.chart, &p.coords, others)?;
        bb_all += &r.bb;
        let (gsv, cs) = if r.on_divisor {
            let (k, coords, normal) = adapted_branch(scene, p)?;
            let br = SmoothBranch::new(&scene.charts[&k].field, normal, &coords)?;
            let (g, c) = (gsv_smooth(&br), cs_smooth(&br)?);
            entries.push(LedgerEntry {
                bb: r.bb.clone(),
                res_log: r.res_log.clone().expect("on-divisor points carry a log residue"),
                gsv: g,
                cs: c.clone(),
            });
            (Some(g), Some(c))
        } else {
            (None, None)
        };
        rows.push(LedgerPointReport {
            chart: p.chart,
            point: p.coords.clone(),
            label: p.label.clone(),
            on_divisor: r.on_divisor,
            bb: r.bb,
            res_log: r.res_log,
            gsv,
            cs,
        });
    }
    Ok(SurfaceLedgerReport {
        scene: scene.name.clone(),
        points: rows,
        ledger: SurfaceLedger::assemble(&entries, d_squared, brunella_rhs),
        bb_all,
    })
}
