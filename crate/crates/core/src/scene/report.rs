//! JSON and Markdown renderings of a [`GlobalReport`].

use serde_json::{json, Value};

use super::run::{GlobalReport, Verdict};
use crate::Rational;

/// Exact `p/q` text; integers print without a denominator.
pub fn rational_string(x: &Rational) -> String {
    x.to_string()
}

fn opt<T: ToString>(x: &Option<T>) -> Value {
    x.as_ref().map_or(Value::Null, |v| Value::String(v.to_string()))
}

fn verdict_value(v: &Verdict) -> Value {
    match v {
        Verdict::Equal => json!({ "status": "equal" }),
        Verdict::Mismatch { difference, count_deficit, atlas_consistent } => json!({
            "status": "mismatch",
            "difference": rational_string(difference),
            "count_deficit": rational_string(count_deficit),
            "atlas_consistent": atlas_consistent,
        }),
    }
}

pub fn report_json(r: &GlobalReport) -> Value {
    let points: Vec<Value> = r
        .points
        .iter()
        .map(|p| {
            json!({
                "chart": p.chart,
                "point": p.point.iter().map(rational_string).collect::<Vec<_>>(),
                "label": p.label,
                "on_divisor": p.on_divisor,
                "milnor": p.milnor.to_string(),
                "bb": rational_string(&p.bb),
                "res_log": opt(&p.res_log),
                "ind_log": opt(&p.ind_log),
            })
        })
        .collect();
    let certificate = r.certificate.as_ref().map_or(Value::Null, |c| {
        json!({
            "milnor_sum": c.milnor_sum.to_string(),
            "expected": rational_string(&c.expected),
            "ok": c.ok,
        })
    });
    json!({
        "scene": r.scene,
        "phi": r.phi,
        "points": points,
        "local_total": rational_string(&r.local_total),
        "chern_side": rational_string(&r.chern_side),
        "verdict": verdict_value(&r.verdict),
        "certificate": certificate,
        "atlas_consistent": r.atlas_consistent,
        "atlas_notes": r.atlas_notes,
        "poincare": r.poincare.as_ref().map(|p| p.to_string()),
        "flags": r.flags,
    })
}

pub fn report_markdown(r: &GlobalReport) -> String {
    let mut out = format!("# {}\n\nφ = `{}`\n\n", r.scene, r.phi);
    out.push_str("| chart | point | label | on D | μ | BB | Res^log | Ind_log |\n");
    out.push_str("|---|---|---|---|---|---|---|---|\n");
    let dash = || "-".to_string();
    for p in &r.points {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} | {} |\n",
            p.chart,
            super::point_string(&p.point),
            p.label.clone().unwrap_or_else(dash),
            if p.on_divisor { "yes" } else { "no" },
            p.milnor,
            p.bb,
            p.res_log.as_ref().map_or_else(dash, ToString::to_string),
            p.ind_log.map_or_else(dash, |i| i.to_string()),
        ));
    }
    out.push_str(&format!("\nlocal total: {}\n\nChern side: {}\n\n", r.local_total, r.chern_side));
    match &r.certificate {
        Some(c) => out.push_str(&format!(
            "certificate: Σμ = {} vs expected {} ({})\n\n",
            c.milnor_sum,
            c.expected,
            if c.ok { "ok" } else { "FAILED" }
        )),
        None => out.push_str("certificate: not available\n\n"),
    }
    match &r.verdict {
        Verdict::Equal => out.push_str("verdict: **equal**\n"),
        Verdict::Mismatch { difference, count_deficit, atlas_consistent } => out.push_str(&format!(
            "verdict: **mismatch** (difference {difference}, count deficit {count_deficit}, atlas consistent: {atlas_consistent})\n"
        )),
    }
    if let Some(p) = &r.poincare {
        out.push_str(&format!("\ndegree bound: {p}\n"));
    }
    for note in r.atlas_notes.iter().chain(&r.flags) {
        out.push_str(&format!("\n- {note}"));
    }
    if !r.atlas_notes.is_empty() || !r.flags.is_empty() {
        out.push('\n');
    }
    out
}
