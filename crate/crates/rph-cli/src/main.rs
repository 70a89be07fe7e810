//! Command-line surface: generate patches, analyze them, classify wheel
//! diagrams, run flip Monte Carlo and export SVG renderings.
//!
//! Exit codes: 0 success, 1 malformed config or usage error, 2 validation
//! failure (invalid tiling file or a pipeline that fails its checks).

mod config;

use clap::{Parser, Subcommand};
use config::RunConfig;
use rph_core::flips::monte_carlo_flips;
use rph_core::gpsp::run_sequence;
use rph_core::io::{export_json, import_json, round_sig, tiling_svg};
use rph_core::stats::{density_report, tile_frequencies};
use rph_core::symmetry::{classify_wheel, empirical_symmetry};
use rph_core::tiling::FaceKind;
use rph_core::window::{
    box_dimension, calibrate_koch, perp_cloud, window_area, window_area_density, PerpCloud,
};
use rph_core::{Tiling, WheelDiagram};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rph", version, about = "RPH decagonal tiling toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the substitution pipeline and write a tiling JSON file with a
    /// provenance log.
    Generate {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the config's master_seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config's depth.
        #[arg(long)]
        depth: Option<usize>,
        /// Output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Produce a JSON report (densities, window area, fractal fit,
    /// symmetry) for a tiling file.
    Analyze {
        /// Tiling JSON file to analyze.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify all 1024 wheel diagrams by point group.
    ClassifyWheels {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run simpleton-flip Monte Carlo on a tiling.
    FlipMc {
        /// Tiling JSON file; generated from the config if omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        depth: Option<usize>,
        /// Number of Monte Carlo steps.
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a tiling (or its perpendicular cloud) as SVG.
    ExportSvg {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Render the perpendicular point cloud instead of the patch.
        #[arg(long)]
        cloud: bool,
    },
    /// Rank boundary-substitution templates against the empirical window
    /// boundary of a generated patch.
    CalibrateKoch {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        depth: Option<usize>,
        /// Recursion depth of the candidate boundary curves.
        #[arg(long, default_value_t = 5)]
        koch_depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure with its process exit code.
enum Failure {
    /// Malformed config or usage problem: exit 1.
    Usage(String),
    /// Invalid input file or failed pipeline check: exit 2.
    Validation(String),
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn invalid<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Validation(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::from(0),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_config(
    path: &Option<PathBuf>,
    seed: Option<u64>,
    depth: Option<usize>,
) -> Result<RunConfig, Failure> {
    let mut cfg = match path {
        Some(p) => RunConfig::load(p).map_err(Failure::Usage)?,
        None => RunConfig::default(),
    };
    if let Some(s) = seed {
        cfg.master_seed = s;
    }
    if let Some(d) = depth {
        cfg.depth = d;
    }
    cfg.validate().map_err(Failure::Usage)?;
    Ok(cfg)
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_tiling(path: &Path) -> Result<Tiling, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    import_json(&text).map_err(invalid)
}

/// Round every number in the tree to 12 significant digits so reruns are
/// byte-identical.
fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.is_f64() {
                    return serde_json::Number::from_f64(round_sig(f))
                        .map(Value::Number)
                        .unwrap_or(Value::Null);
                }
            }
            Value::Number(n)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => {
            Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect())
        }
        other => other,
    }
}

fn pretty(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&round_json(v)).expect("serializable");
    s.push('\n');
    s
}

fn generate_patch(cfg: &RunConfig) -> Result<(Tiling, Value), Failure> {
    let schedule = cfg.schedule().map_err(Failure::Usage)?;
    let seed = Tiling::seed_rhombus();
    let (t, logs) =
        run_sequence(&seed, &schedule, cfg.depth, cfg.master_seed).map_err(invalid)?;
    let report = t.validate();
    if !report.ok {
        return Err(Failure::Validation(report.faults.join("; ")));
    }
    let provenance = json!({
        "schedule": cfg.schedule,
        "depth": cfg.depth,
        "master_seed": cfg.master_seed,
        "log": logs,
    });
    Ok((t, provenance))
}

fn face_counts(t: &Tiling) -> Value {
    let count = |k: FaceKind| t.faces_of_kind(k).count();
    json!({
        "r": count(FaceKind::R),
        "p": count(FaceKind::P),
        "h": count(FaceKind::H),
    })
}

fn analyze_report(t: &Tiling, cfg: &RunConfig) -> Value {
    let cloud = perp_cloud(t, 0);
    let density = density_report(t, cfg.clip).ok();
    let ratios = tile_frequencies(t, cfg.clip).ok();
    let degenerate = density.is_none();
    let scales = [0.01, 0.015, 0.02, 0.03, 0.04, 0.06, 0.08];
    let fractal = box_dimension(&cloud, &scales).ok();
    let tol = cfg.symmetry_tolerance * cloud.diameter();
    let group = empirical_symmetry(&cloud, tol);
    json!({
        "vertices": t.vertices.len(),
        "faces": t.faces.len(),
        "degenerate": degenerate,
        "density": density,
        "interior_counts": ratios.as_ref().map(|(c, _)| c),
        "ratios_to_r": ratios.as_ref().map(|(_, r)| r),
        "window": {
            "grid_step": cfg.grid_step,
            "area": window_area_density(&cloud, cfg.grid_step).ok(),
            "cell_area": window_area(&cloud, cfg.grid_step),
            "max_radius": cloud.max_radius(),
        },
        "fractal": fractal,
        "symmetry": {
            "label": group.label(),
            "order": group.order(),
            "tolerance": tol,
        },
    })
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Generate { config, seed, depth, out } => {
            let cfg = load_config(&config, seed, depth)?;
            let (t, provenance) = generate_patch(&cfg)?;
            let text = export_json(&t, Some(provenance)).map_err(invalid)?;
            write_out(&out, &text)
        }
        Cmd::Analyze { input, config, out } => {
            let cfg = load_config(&config, None, None)?;
            let t = read_tiling(&input)?;
            write_out(&out, &pretty(analyze_report(&t, &cfg)))
        }
        Cmd::ClassifyWheels { out } => {
            let mut census: std::collections::BTreeMap<String, usize> =
                std::collections::BTreeMap::new();
            let mut wheels = Vec::with_capacity(1024);
            for w in WheelDiagram::enumerate() {
                let label = classify_wheel(&w).label();
                *census.entry(label.clone()).or_default() += 1;
                wheels.push(json!({ "wheel": w.to_string(), "group": label }));
            }
            write_out(&out, &pretty(json!({ "census": census, "wheels": wheels })))
        }
        Cmd::FlipMc { input, config, seed, depth, steps, out } => {
            let cfg = load_config(&config, seed, depth)?;
            let t = match input {
                Some(p) => read_tiling(&p)?,
                None => generate_patch(&cfg)?.0,
            };
            let initial = face_counts(&t);
            let outcome = monte_carlo_flips(&t, steps, cfg.master_seed).map_err(invalid)?;
            let check = outcome.tiling.validate();
            if !check.ok {
                return Err(Failure::Validation(check.faults.join("; ")));
            }
            let report = json!({
                "requested_steps": steps,
                "completed_steps": outcome.completed_steps,
                "terminated_early": outcome.terminated_early,
                "initial_counts": initial,
                "final_counts": face_counts(&outcome.tiling),
                "trace": outcome.trace,
            });
            write_out(&out, &pretty(report))
        }
        Cmd::ExportSvg { input, out, cloud } => {
            let t = read_tiling(&input)?;
            let svg = if cloud {
                rph_core::io::cloud_svg(&perp_cloud(&t, 0))
            } else {
                tiling_svg(&t)
            };
            write_out(&out, &svg)
        }
        Cmd::CalibrateKoch { config, seed, depth, koch_depth, out } => {
            let cfg = load_config(&config, seed, depth)?;
            let (t, _) = generate_patch(&cfg)?;
            let cloud: PerpCloud = perp_cloud(&t, cfg.depth);
            let cal = calibrate_koch(&cloud, cfg.grid_step, koch_depth).map_err(invalid)?;
            let entry = |t: &rph_core::window::KochTemplate, d: f64| {
                json!({
                    "angles_deg": t.angles.iter().map(|a| a.to_degrees()).collect::<Vec<_>>(),
                    "alternate": t.alternate,
                    "hausdorff": d,
                })
            };
            let report = json!({
                "chord": cal.chord,
                "winner": entry(&cal.template, cal.distance),
                "ranking": cal.ranking.iter().map(|(t, d)| entry(t, *d)).collect::<Vec<_>>(),
            });
            write_out(&out, &pretty(report))
        }
    }
}
