use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use logbb_core::algebra::parse_rational;
use logbb_core::residues::PhiSpec;
use logbb_core::scene::{
    chern_side, load_scene, local_residue, rational_string, report_json, report_markdown, run_global_with,
    surface_ledger, RunOptions, Scene, SceneError,
};
use logbb_core::Rational;

#[derive(Parser)]
#[command(name = "logbb", version, about = "Log Baum-Bott residues and their global sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Sum the local residues and compare with the characteristic number.
    Verify {
        scene: PathBuf,
        /// Override the scene's φ, e.g. "c1^3" or "c1*c2 - c3".
        #[arg(long)]
        phi: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Worker threads for the per-point computations.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Local invariants at a single point.
    Residue {
        scene: PathBuf,
        /// CHART:c1,c2,… with rational coordinates.
        #[arg(long)]
        point: String,
        #[arg(long)]
        phi: Option<String>,
    },
    /// The characteristic classes and the integral on the Chern side.
    Chern {
        scene: PathBuf,
        #[arg(long)]
        phi: Option<String>,
    },
    /// GSV and Camacho-Sad totals on a surface scene.
    SurfaceLedger { scene: PathBuf },
}

fn fail(e: SceneError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn input_error(msg: String) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn with_phi(scene: Scene, phi: Option<String>) -> Result<Scene, ExitCode> {
    match phi {
        None => Ok(scene),
        Some(text) => PhiSpec::parse(&text, scene.dim())
            .map(|p| scene.with_phi(p))
            .map_err(|e| input_error(format!("--phi: {e}"))),
    }
}

fn parse_point(text: &str) -> Result<(usize, Vec<Rational>), String> {
    let (chart, coords) = text.split_once(':').ok_or("expected CHART:c1,c2,…")?;
    let chart = chart.trim().parse().map_err(|_| format!("bad chart index `{chart}`"))?;
    let coords = coords
        .split(',')
        .map(|c| parse_rational(c.trim()).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((chart, coords))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn opt_string<T: ToString>(x: &Option<T>) -> serde_json::Value {
    x.as_ref().map_or(serde_json::Value::Null, |v| json!(v.to_string()))
}

fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Verify { scene, phi, format, jobs } => {
            let scene = match load_scene(&scene) {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            let scene = match with_phi(scene, phi) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let report = match run_global_with(&scene, &RunOptions { jobs, ..RunOptions::default() }) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            match format {
                Format::Json => print_json(&report_json(&report)),
                Format::Md => print!("{}", report_markdown(&report)),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Command::Residue { scene, point, phi } => {
            let scene = match load_scene(&scene).map_err(fail).and_then(|s| with_phi(s, phi)) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let (chart, coords) = match parse_point(&point) {
                Ok(p) => p,
                Err(m) => return input_error(format!("--point: {m}")),
            };
            match local_residue(&scene, chart, &coords) {
                Ok(r) => {
                    print_json(&json!({
                        "chart": r.chart,
                        "point": r.point.iter().map(rational_string).collect::<Vec<_>>(),
                        "label": r.label,
                        "phi": scene.phi.to_string(),
                        "on_divisor": r.on_divisor,
                        "nondegenerate": r.nondegenerate,
                        "milnor": r.milnor.to_string(),
                        "bb": rational_string(&r.bb),
                        "res_log": opt_string(&r.res_log),
                        "ind_log": opt_string(&r.ind_log),
                    }));
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Chern { scene, phi } => {
            let scene = match load_scene(&scene).map_err(fail).and_then(|s| with_phi(s, phi)) {
                Ok(s) => s,
                Err(code) => return code,
            };
            match chern_side(&scene, &scene.phi) {
                Ok(c) => {
                    let parts = |t: &Option<logbb_core::chern::TotalClass<Rational>>| {
                        t.as_ref().map(|t| t.parts().iter().map(|p| p.to_string()).collect::<Vec<_>>())
                    };
                    print_json(&json!({
                        "phi": scene.phi.to_string(),
                        "total_log_tangent": parts(&c.log_tangent),
                        "foliation_tangent": parts(&c.foliation_tangent),
                        "integral": rational_string(&c.value),
                    }));
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::SurfaceLedger { scene } => {
            let scene = match load_scene(&scene) {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            match surface_ledger(&scene) {
                Ok(r) => {
                    let l = &r.ledger;
                    let points: Vec<_> = r
                        .points
                        .iter()
                        .map(|p| {
                            json!({
                                "chart": p.chart,
                                "point": p.point.iter().map(rational_string).collect::<Vec<_>>(),
                                "label": p.label,
                                "on_divisor": p.on_divisor,
                                "bb": rational_string(&p.bb),
                                "res_log": opt_string(&p.res_log),
                                "gsv": opt_string(&p.gsv),
                                "cs": opt_string(&p.cs),
                            })
                        })
                        .collect();
                    print_json(&json!({
                        "scene": r.scene,
                        "points": points,
                        "bb_all_points": rational_string(&r.bb_all),
                        "bb": rational_string(&l.bb),
                        "res_log": rational_string(&l.res_log),
                        "gsv": rational_string(&l.gsv),
                        "cs": rational_string(&l.cs),
                        "d_squared": rational_string(&l.d_squared),
                        "brunella_rhs": rational_string(&l.brunella_rhs),
                        "brunella_ok": l.brunella_ok,
                        "camacho_sad_ok": l.camacho_sad_ok,
                        "bb_minus_res_log_vs_2gsv_minus_cs": {
                            "difference": rational_string(&l.difference_minus_form),
                            "holds": l.minus_form_ok,
                        },
                        "bb_minus_res_log_vs_2gsv_plus_cs": {
                            "difference": rational_string(&l.difference_plus_form),
                            "holds": l.plus_form_ok,
                        },
                    }));
                    ExitCode::from(r.exit_code() as u8)
                }
                Err(e) => fail(e),
            }
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse())
}
