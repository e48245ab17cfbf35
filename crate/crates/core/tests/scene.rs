use std::path::PathBuf;

use logbb_core::algebra::parse_poly;
use logbb_core::residues::PhiSpec;
use logbb_core::scene::{
    certify_completeness, chart_restrict, load_scene, parse_scene, poincare_check, run_global, run_global_with,
    surface_ledger, RunOptions, SceneError, Verdict,
};
use logbb_core::{q, Poly};

fn scene_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenes").join(name)
}

const EULER_P2: &str = r#"
[space]
kind = "projective"
dim = 2

[foliation]
degree = 1
homogeneous = ["z0", "2*z1", "3*z2"]

[[singularities]]
chart = 0
point = ["0", "0"]

[[singularities]]
chart = 1
point = ["0", "0"]

[[singularities]]
chart = 2
point = ["0", "0"]
"#;

#[test]
fn loads_bundled_arrangement() {
    let s = load_scene(scene_path("p3_nc_arrangement.toml")).unwrap();
    assert_eq!(s.dim(), 3);
    assert_eq!(s.points.len(), 15);
    assert_eq!(s.degree, Some(2));
    assert_eq!(s.divisor_degree(), 4);
    let c0 = s.chart(0).unwrap();
    let a = c0.ambient.clone();
    let expected: Vec<Poly> =
        ["x1*(x1-1)", "x2*(x2-1)", "x3*(x3-1)"].iter().map(|t| parse_poly(t, &a).unwrap()).collect();
    assert_eq!(c0.field.components(), &expected[..]);
    assert_eq!(c0.divisor.components().len(), 3);
}

#[test]
fn chart_restriction_drops_the_chart_hyperplane() {
    let s = load_scene(scene_path("p3_nc_arrangement.toml")).unwrap();
    let (amb, f) = s.homogeneous.clone().unwrap();
    let (v, div) = chart_restrict(&amb, &f, &s.divisor_components, 1).unwrap();
    let a = v.ambient().clone();
    assert_eq!(a.names(), &["x0", "x2", "x3"]);
    assert_eq!(v.components()[0], parse_poly("x0^2 - x0", &a).unwrap());
    assert_eq!(div.len(), 3);
}

#[test]
fn rejects_non_homogeneous_components() {
    let text = EULER_P2.replace("\"2*z1\"", "\"2*z1 + 1\"");
    match parse_scene(&text) {
        Err(SceneError::Validation { path, .. }) => assert_eq!(path, "foliation.homogeneous[1]"),
        other => panic!("expected a validation error, got {other:?}"),
    }
}

#[test]
fn rejects_a_point_that_is_not_a_zero() {
    let text = EULER_P2.replacen("point = [\"0\", \"0\"]", "point = [\"1\", \"0\"]", 1);
    match parse_scene(&text) {
        Err(e @ SceneError::Validation { .. }) => {
            assert!(e.to_string().contains("singularities[0]"));
            assert_eq!(e.exit_code(), 2);
        }
        other => panic!("expected a validation error, got {other:?}"),
    }
}

#[test]
fn radial_field_degenerates_in_every_chart() {
    let text = r#"
[space]
kind = "projective"
dim = 2
[foliation]
homogeneous = ["z0", "z1", "z2"]
"#;
    assert!(matches!(parse_scene(text), Err(SceneError::DegenerateChart { chart: 0 })));
}

#[test]
fn unknown_keys_and_bad_syntax_are_parse_errors() {
    assert!(matches!(
        parse_scene("[space]\nkind = \"projective\"\ndim = 2\nbogus = 1\n"),
        Err(SceneError::Parse { .. })
    ));
    assert!(matches!(parse_scene("not toml ["), Err(SceneError::Parse { .. })));
}

#[test]
fn euler_field_certificate() {
    let s = parse_scene(EULER_P2).unwrap();
    let c = certify_completeness(&s).unwrap().unwrap();
    assert_eq!(c.milnor_sum, 3);
    assert!(c.ok);
    let r = run_global(&s).unwrap();
    assert_eq!(r.verdict, Verdict::Equal);
}

#[test]
fn missing_point_fails_the_certificate_by_one() {
    let mut s = load_scene(scene_path("p3_nc_arrangement.toml")).unwrap();
    s.points.retain(|p| p.label.as_deref() != Some("p15"));
    let c = certify_completeness(&s).unwrap().unwrap();
    assert!(!c.ok);
    assert_eq!(c.deficit(), q(1));
    let r = run_global(&s).unwrap();
    assert!(matches!(r.verdict, Verdict::Mismatch { ref count_deficit, .. } if *count_deficit == q(1)));
    assert_eq!(r.exit_code(), 1);
}

#[test]
fn duplicates_across_charts_count_once() {
    let text = format!("{EULER_P2}\n[[singularities]]\nchart = 0\npoint = [\"0\", \"0\"]\n");
    let s = parse_scene(&text).unwrap();
    let r = run_global(&s).unwrap();
    assert_eq!(r.points.len(), 3);
    assert!(r.flags.iter().any(|f| f.contains("duplicate")));
    assert_eq!(r.verdict, Verdict::Equal);
}

#[test]
fn verdict_independent_of_point_order_and_threads() {
    let s = load_scene(scene_path("p3_nc_arrangement.toml")).unwrap();
    let base = run_global_with(&s, &RunOptions { jobs: Some(1), ..Default::default() }).unwrap();
    let mut t = s.clone();
    t.points.reverse();
    let other = run_global_with(&t, &RunOptions { jobs: Some(4), ..Default::default() }).unwrap();
    assert_eq!(base.local_total, other.local_total);
    assert_eq!(base.verdict, other.verdict);
    let labels = |r: &logbb_core::scene::GlobalReport| r.points.iter().map(|p| p.label.clone()).collect::<Vec<_>>();
    assert_eq!(labels(&base), labels(&other));
}

#[test]
fn empty_divisor_is_classical_baum_bott() {
    let s = load_scene(scene_path("p2_product_d2.toml")).unwrap();
    let r = run_global(&s).unwrap();
    assert!(r.points.iter().all(|p| !p.on_divisor && p.res_log.is_none()));
    assert_eq!(r.local_total, q(16));
    assert_eq!(r.verdict, Verdict::Equal);
}

#[test]
fn wrong_chern_class_is_a_mismatch() {
    let s = load_scene(scene_path("p2_wrong_chern.toml")).unwrap();
    let r = run_global(&s).unwrap();
    assert!(matches!(r.verdict, Verdict::Mismatch { ref difference, .. } if *difference == q(-1)));
}

#[test]
fn explicit_chart_disagreement_is_rejected() {
    let text = r#"
[space]
kind = "projective"
dim = 2
[foliation]
[[foliation.charts]]
chart = 0
field = ["x1", "2*x2"]
[[foliation.charts]]
chart = 1
field = ["x0", "x2"]
"#;
    match parse_scene(text) {
        Err(SceneError::Validation { path, .. }) => assert_eq!(path, "foliation.charts"),
        other => panic!("expected a spot-check failure, got {other:?}"),
    }
    // the restrictions of z0 d0 + 2 z1 d1 + 3 z2 d2 agree
    let ok = r#"
[space]
kind = "projective"
dim = 2
[foliation]
degree = 1
[[foliation.charts]]
chart = 0
field = ["x1", "2*x2"]
[[foliation.charts]]
chart = 1
field = ["-x0", "x2"]
"#;
    assert!(parse_scene(ok).is_ok());
}

#[test]
fn non_normal_crossing_without_basis_is_unsupported() {
    let text = r#"
[space]
kind = "projective"
dim = 2
[divisor]
components = ["z1", "z2", "z1 - z2"]
[foliation]
homogeneous = ["z0^2", "z1^2", "z2^2"]
[[singularities]]
chart = 0
point = ["0", "0"]
"#;
    let s = parse_scene(text).unwrap();
    let e = run_global(&s).unwrap_err();
    assert_eq!(e.exit_code(), 3);
}

#[test]
fn poincare_verdicts() {
    let s = load_scene(scene_path("p3_nc_arrangement.toml")).unwrap();
    let v = poincare_check(&s, None).unwrap().unwrap();
    assert_eq!(v.to_string(), "bound satisfied: 4 ≤ 2+3");
    let s = load_scene(scene_path("p3_negative_total.toml")).unwrap();
    let v = poincare_check(&s, None).unwrap().unwrap();
    assert!(v.to_string().starts_with("hypothesis not met"));
    assert_eq!(v.total, q(-1));
}

#[test]
fn phi_override_changes_the_report() {
    let s = load_scene(scene_path("p3_nc_arrangement.toml")).unwrap();
    let r = run_global_with(&s, &RunOptions { phi: Some(PhiSpec::top(3)), ..Default::default() }).unwrap();
    assert_eq!(r.phi, "c3");
    assert_eq!(r.local_total, q(1));
    assert!(r.poincare.is_none());
}

#[test]
fn surface_ledger_on_the_invariant_line() {
    let s = load_scene(scene_path("p2_invariant_line.toml")).unwrap();
    let r = surface_ledger(&s).unwrap();
    assert_eq!(r.ledger.cs, q(1));
    assert_eq!(r.ledger.gsv, q(3));
    assert!(r.ledger.brunella_ok && r.ledger.camacho_sad_ok);
}

#[test]
fn ledger_rejects_points_on_nodes() {
    let text = r#"
[space]
kind = "projective"
dim = 2
[divisor]
components = ["z1", "z2"]
[foliation]
homogeneous = ["z0^2", "z1^2", "z2^2"]
[[singularities]]
chart = 0
point = ["0", "0"]
"#;
    let s = parse_scene(text).unwrap();
    let e = surface_ledger(&s).unwrap_err();
    assert_eq!(e.exit_code(), 3);
}

#[test]
fn presented_scene_supplies_its_own_certificate() {
    let s = load_scene(scene_path("hirzebruch_k3.toml")).unwrap();
    let c = certify_completeness(&s).unwrap().unwrap();
    assert_eq!(c.expected, q(4));
    assert!(c.ok);
}
