//! Serialization: the versioned tiling JSON format, SVG rendering of
//! patches and perpendicular clouds, and CSV cloud export.

use crate::bravais::embed_par_f64;
use crate::error::{Error, Result};
use crate::tiling::{FaceKind, Tiling};
use crate::window::PerpCloud;
use crate::Index4;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

pub const SCHEMA_VERSION: u32 = 1;

/// One face as stored on disk: a kind tag plus indices into the vertex list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceRecord {
    pub kind: FaceKind,
    pub vertices: Vec<usize>,
}

/// On-disk form of a tiling. Vertices are 4-integer lattice coordinates in
/// ascending order; faces reference them by index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingFile {
    pub schema_version: u32,
    pub vertices: Vec<Index4>,
    pub faces: Vec<FaceRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
}

pub fn tiling_to_file(t: &Tiling, provenance: Option<serde_json::Value>) -> TilingFile {
    let vertices: Vec<Index4> = t.vertices.iter().copied().collect();
    let index: HashMap<Index4, usize> =
        vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let faces = t
        .faces
        .iter()
        .map(|f| FaceRecord {
            kind: f.kind,
            vertices: f.cycle.iter().map(|v| index[v]).collect(),
        })
        .collect();
    TilingFile { schema_version: SCHEMA_VERSION, vertices, faces, provenance }
}

/// Rebuild the tiling from its vertex set and cross-check the stored faces
/// against a fresh extraction; a mismatch means the file was edited or
/// produced by an incompatible version.
pub fn tiling_from_file(f: &TilingFile) -> Result<Tiling> {
    if f.schema_version != SCHEMA_VERSION {
        return Err(Error::BadInput(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            f.schema_version
        )));
    }
    let t = Tiling::from_points(f.vertices.iter().copied().collect())?;
    let roundtrip = tiling_to_file(&t, None);
    if roundtrip.faces != f.faces {
        return Err(Error::Validation(
            "stored faces do not match extraction from the stored vertices".into(),
        ));
    }
    Ok(t)
}

pub fn export_json(t: &Tiling, provenance: Option<serde_json::Value>) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&tiling_to_file(t, provenance))?;
    s.push('\n');
    Ok(s)
}

pub fn import_json(s: &str) -> Result<Tiling> {
    let file: TilingFile = serde_json::from_str(s)?;
    tiling_from_file(&file)
}

/// Round to 12 significant digits, the precision used in all emitted
/// reports; keeps diffs reproducible without false precision.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let digits = 11 - x.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits);
    (x * scale).round() / scale
}

fn svg_class(kind: FaceKind) -> &'static str {
    match kind {
        FaceKind::R => "r",
        FaceKind::P => "p",
        FaceKind::H => "h",
        FaceKind::Unknown => "u",
    }
}

const SVG_STYLE: &str = "polygon{stroke:#333;stroke-width:0.04}\
polygon.r{fill:#e8b4b8}polygon.p{fill:#b8d4e8}polygon.h{fill:#c8e8b8}\
polygon.u{fill:#eee}circle{fill:#346;stroke:none}";

fn svg_document(body: &str, x0: f64, y0: f64, x1: f64, y1: f64) -> String {
    let pad = 0.5;
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n\
         <style>{SVG_STYLE}</style>\n{body}</svg>\n",
        round_sig(x0 - pad),
        round_sig(y0 - pad),
        round_sig(x1 - x0 + 2.0 * pad),
        round_sig(y1 - y0 + 2.0 * pad),
    )
}

/// Render the patch with one polygon per face (classes r/p/h/u). The y axis
/// is flipped so the mathematical orientation appears upright.
pub fn tiling_svg(t: &Tiling) -> String {
    let mut body = String::new();
    let mut bounds = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for f in &t.faces {
        let mut pts = String::new();
        for &v in &f.cycle {
            let (x, y) = embed_par_f64(v);
            let y = -y;
            bounds = (bounds.0.min(x), bounds.1.min(y), bounds.2.max(x), bounds.3.max(y));
            if !pts.is_empty() {
                pts.push(' ');
            }
            pts.push_str(&format!("{},{}", round_sig(x), round_sig(y)));
        }
        body.push_str(&format!(
            "<polygon class=\"{}\" points=\"{pts}\"/>\n",
            svg_class(f.kind)
        ));
    }
    if t.faces.is_empty() {
        bounds = (0.0, 0.0, 1.0, 1.0);
    }
    svg_document(&body, bounds.0, bounds.1, bounds.2, bounds.3)
}

/// Render a perpendicular cloud as points only.
pub fn cloud_svg(c: &PerpCloud) -> String {
    let mut body = String::new();
    let mut bounds = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for &(x, y) in &c.points {
        let y = -y;
        bounds = (bounds.0.min(x), bounds.1.min(y), bounds.2.max(x), bounds.3.max(y));
        body.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"0.004\"/>\n",
            round_sig(x),
            round_sig(y)
        ));
    }
    if c.points.is_empty() {
        bounds = (0.0, 0.0, 1.0, 1.0);
    }
    svg_document(&body, bounds.0, bounds.1, bounds.2, bounds.3)
}

pub fn cloud_csv(c: &PerpCloud) -> String {
    let mut out = String::from("x,y\n");
    for &(x, y) in &c.points {
        out.push_str(&format!("{},{}\n", round_sig(x), round_sig(y)));
    }
    out
}
