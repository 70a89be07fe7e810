//! Perpendicular-space analytics: point clouds as empirical windows, grid
//! area and boundary estimates, box-counting dimension, the recursive
//! boundary-sector generator and substitution-consistency checks.

use crate::bravais::{embed_perp_f64, tau_scale_sq, Index4};
use crate::error::{Error, Result};
use crate::golden::TAU_F64;
use crate::gpsp::motif;
use crate::tiling::Tiling;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};

/// Perpendicular-space images of a tiling's vertices. The points densely
/// fill the acceptance window as the source depth grows.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PerpCloud {
    pub points: Vec<(f64, f64)>,
    pub depth: usize,
}

impl PerpCloud {
    pub fn from_points(points: &BTreeSet<Index4>, depth: usize) -> PerpCloud {
        PerpCloud { points: points.iter().map(|&v| embed_perp_f64(v)).collect(), depth }
    }

    pub fn max_radius(&self) -> f64 {
        self.points
            .iter()
            .map(|&(x, y)| (x * x + y * y).sqrt())
            .fold(0.0, f64::max)
    }

    pub fn diameter(&self) -> f64 {
        2.0 * self.max_radius()
    }
}

/// Perpendicular images of every vertex.
pub fn perp_cloud(t: &Tiling, depth: usize) -> PerpCloud {
    PerpCloud::from_points(&t.vertices, depth)
}

fn cell_of(p: (f64, f64), step: f64) -> (i64, i64) {
    ((p.0 / step).floor() as i64, (p.1 / step).floor() as i64)
}

/// Occupied grid cells of the cloud.
pub fn occupied_cells(c: &PerpCloud, grid_step: f64) -> BTreeSet<(i64, i64)> {
    c.points.iter().map(|&p| cell_of(p, grid_step)).collect()
}

/// Area of the occupied grid cells; converges to the window area from
/// below as the cloud densifies.
pub fn window_area(c: &PerpCloud, grid_step: f64) -> f64 {
    occupied_cells(c, grid_step).len() as f64 * grid_step * grid_step
}

/// Window area from the uniform distribution of projected lattice points:
/// total point count divided by the interior point density. Density is
/// measured on cells whose eight neighbours are all occupied; cells that
/// straddle the boundary bias the plain occupied-cell count upward by
/// several percent at coarse grids, while this estimate stays grid-stable.
pub fn window_area_density(c: &PerpCloud, grid_step: f64) -> Result<f64> {
    let mut occ: HashMap<(i64, i64), usize> = HashMap::new();
    for &p in &c.points {
        *occ.entry(cell_of(p, grid_step)).or_default() += 1;
    }
    let mut points_inside = 0usize;
    let mut cells_inside = 0usize;
    for (&(i, j), &k) in &occ {
        let interior = (-1..=1)
            .all(|di| (-1..=1).all(|dj| occ.contains_key(&(i + di, j + dj))));
        if interior {
            points_inside += k;
            cells_inside += 1;
        }
    }
    if cells_inside == 0 {
        return Err(Error::DegenerateFit(
            "no interior cells: cloud too sparse for this grid step".into(),
        ));
    }
    let density = points_inside as f64 / (cells_inside as f64 * grid_step * grid_step);
    Ok(c.points.len() as f64 / density)
}

/// Occupied cells with at least one unoccupied 4-neighbour.
pub fn boundary_cells(c: &PerpCloud, grid_step: f64) -> BTreeSet<(i64, i64)> {
    let occ = occupied_cells(c, grid_step);
    occ.iter()
        .copied()
        .filter(|&(i, j)| {
            !(occ.contains(&(i + 1, j))
                && occ.contains(&(i - 1, j))
                && occ.contains(&(i, j + 1))
                && occ.contains(&(i, j - 1)))
        })
        .collect()
}

/// Log-log box-counting fit over the given scales.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FractalFit {
    pub scales: Vec<f64>,
    pub counts: Vec<usize>,
    pub slope: f64,
    pub r2: f64,
}

/// Box-counting dimension of the cloud's boundary: count boundary cells at
/// each scale, fit log N against log 1/s by least squares.
pub fn box_dimension(c: &PerpCloud, scales: &[f64]) -> Result<FractalFit> {
    if scales.len() < 5 {
        return Err(Error::BadInput("box_dimension needs at least 5 scales".into()));
    }
    let counts: Vec<usize> = scales.iter().map(|&s| boundary_cells(c, s).len()).collect();
    if counts.iter().any(|&n| n == 0) {
        return Err(Error::DegenerateFit("empty boundary at some scale".into()));
    }
    let xs: Vec<f64> = scales.iter().map(|&s| (1.0 / s).ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&n| (n as f64).ln()).collect();
    let (slope, r2) = linear_fit(&xs, &ys);
    Ok(FractalFit { scales: scales.to_vec(), counts, slope, r2 })
}

/// Least-squares slope and r² of y against x.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|&x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(&x, &y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|&y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, r2)
}

/// Directed grid-accelerated Hausdorff distance from a to b.
fn hausdorff_directed(a: &[(f64, f64)], b: &[(f64, f64)], cell: f64) -> f64 {
    let mut grid: HashMap<(i64, i64), Vec<(f64, f64)>> = HashMap::new();
    for &p in b {
        grid.entry(cell_of(p, cell)).or_default().push(p);
    }
    let mut worst: f64 = 0.0;
    for &(px, py) in a {
        let (ci, cj) = cell_of((px, py), cell);
        let mut best = f64::INFINITY;
        let mut ring = 0i64;
        loop {
            for i in (ci - ring)..=(ci + ring) {
                for j in (cj - ring)..=(cj + ring) {
                    if ring > 0 && (i - ci).abs() < ring && (j - cj).abs() < ring {
                        continue;
                    }
                    if let Some(pts) = grid.get(&(i, j)) {
                        for &(qx, qy) in pts {
                            let d2 = (px - qx) * (px - qx) + (py - qy) * (py - qy);
                            best = best.min(d2.sqrt());
                        }
                    }
                }
            }
            // a hit in ring r guarantees the true nearest is within (r+1) cells
            if best < (ring as f64) * cell || ring > 1_000 {
                break;
            }
            ring += 1;
        }
        worst = worst.max(best);
    }
    worst
}

/// Symmetric Hausdorff distance between point sets.
pub fn hausdorff(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return if a.is_empty() && b.is_empty() { 0.0 } else { f64::INFINITY };
    }
    let cell = 0.1;
    hausdorff_directed(a, b, cell).max(hausdorff_directed(b, a, cell))
}

/// A 1/20 window-boundary sector built by recursive segment substitution:
/// every segment is replaced by three segments 1/τ² its length.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KochSector {
    /// Polyline vertices, start to end.
    pub polyline: Vec<(f64, f64)>,
    pub depth: usize,
}

/// Turn angles (radians, relative to the parent segment direction) of the
/// three replacement segments. The combination {+36°, 0°, −36°} closes
/// exactly: (e^{i·36°} + 1 + e^{−i·36°})/τ² = (1 + 2cos36°)/τ² = 1.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct KochTemplate {
    pub angles: [f64; 3],
    /// Mirror the template on alternate recursion levels.
    pub alternate: bool,
}

pub const KOCH_RATIO: f64 = 1.0 / (TAU_F64 * TAU_F64);

impl KochTemplate {
    pub fn standard() -> KochTemplate {
        let t = 36f64.to_radians();
        KochTemplate { angles: [t, 0.0, -t], alternate: false }
    }

    /// All endpoint-compatible templates with the mandated 1/τ² ratio and
    /// lattice-direction turns: the six orderings of {+36°, 0°, −36°}, each
    /// with and without alternate-level mirroring.
    pub fn candidates() -> Vec<KochTemplate> {
        let t = 36f64.to_radians();
        let orders: [[f64; 3]; 6] = [
            [t, 0.0, -t],
            [-t, 0.0, t],
            [t, -t, 0.0],
            [-t, t, 0.0],
            [0.0, t, -t],
            [0.0, -t, t],
        ];
        let mut out = Vec::with_capacity(12);
        for angles in orders {
            for alternate in [false, true] {
                out.push(KochTemplate { angles, alternate });
            }
        }
        out
    }

    /// The template frozen by `calibrate_koch` against an empirical all-L
    /// window boundary (least Hausdorff distance among `candidates`): go
    /// straight, turn out by 36°, then back by 36°, same handedness at
    /// every level.
    pub fn calibrated() -> KochTemplate {
        let t = 36f64.to_radians();
        KochTemplate { angles: [0.0, t, -t], alternate: false }
    }

    /// Endpoint-closure check: the three unit/τ² segments must span the
    /// parent segment exactly.
    pub fn validate(&self) -> Result<()> {
        let (mut x, mut y) = (0.0f64, 0.0f64);
        for &a in &self.angles {
            x += KOCH_RATIO * a.cos();
            y += KOCH_RATIO * a.sin();
        }
        if (x - 1.0).abs() > 1e-9 || y.abs() > 1e-9 {
            return Err(Error::BadInput(format!(
                "template does not close: endpoint ({x:.6},{y:.6})"
            )));
        }
        Ok(())
    }
}

/// Recursively substitute the template into the chord from `a` to `b`.
pub fn koch_sector(
    a: (f64, f64),
    b: (f64, f64),
    template: &KochTemplate,
    depth: usize,
) -> Result<KochSector> {
    template.validate()?;
    let mut pts = vec![a, b];
    for level in 0..depth {
        let sign = if template.alternate && level % 2 == 1 { -1.0 } else { 1.0 };
        let mut next = Vec::with_capacity(pts.len() * 3);
        for w in pts.windows(2) {
            let (ax, ay) = w[0];
            let (bx, by) = w[1];
            let (dx, dy) = (bx - ax, by - ay);
            let base = dy.atan2(dx);
            let len = (dx * dx + dy * dy).sqrt() * KOCH_RATIO;
            next.push((ax, ay));
            let (mut x, mut y) = (ax, ay);
            for &ang in &template.angles[..2] {
                let t = base + sign * ang;
                x += len * t.cos();
                y += len * t.sin();
                next.push((x, y));
            }
        }
        next.push(*pts.last().unwrap());
        pts = next;
    }
    Ok(KochSector { polyline: pts, depth })
}

/// Densely sampled points along the sector polyline, for rasterized
/// comparisons against empirical boundaries.
pub fn sample_polyline(polyline: &[(f64, f64)], spacing: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for w in polyline.windows(2) {
        let (ax, ay) = w[0];
        let (bx, by) = w[1];
        let len = ((bx - ax).powi(2) + (by - ay).powi(2)).sqrt();
        let n = (len / spacing).ceil().max(1.0) as usize;
        for i in 0..n {
            let t = i as f64 / n as f64;
            out.push((ax + t * (bx - ax), ay + t * (by - ay)));
        }
    }
    if let Some(&last) = polyline.last() {
        out.push(last);
    }
    out
}

/// Centers of boundary cells whose polar angle lies in [a0, a1] (radians,
/// wrapped); the raw material for sector-level boundary comparisons.
pub fn boundary_sector_points(
    c: &PerpCloud,
    grid_step: f64,
    a0: f64,
    a1: f64,
) -> Vec<(f64, f64)> {
    let tau_circle = std::f64::consts::TAU;
    let span = (a1 - a0).rem_euclid(tau_circle);
    boundary_cells(c, grid_step)
        .into_iter()
        .map(|(i, j)| ((i as f64 + 0.5) * grid_step, (j as f64 + 0.5) * grid_step))
        .filter(|&(x, y)| {
            let ang = (y.atan2(x) - a0).rem_euclid(tau_circle);
            ang <= span
        })
        .collect()
}

/// Result of fitting the substitution template to an empirical boundary
/// sector: the winning template, its Hausdorff distance, the chord it was
/// grown on, and the full ranking for inspection.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KochCalibration {
    pub template: KochTemplate,
    pub distance: f64,
    pub chord: ((f64, f64), (f64, f64)),
    pub ranking: Vec<(KochTemplate, f64)>,
}

/// Fit the 3-segment substitution template against one 1/20 sector of the
/// empirical window boundary. The chord runs from the cloud's outermost
/// point (a corner of the window decagon) to the outermost cloud point 18°
/// around; every candidate template is grown on that chord and ranked by
/// symmetric Hausdorff distance to the sector's boundary cells.
pub fn calibrate_koch(
    c: &PerpCloud,
    grid_step: f64,
    koch_depth: usize,
) -> Result<KochCalibration> {
    if c.points.is_empty() {
        return Err(Error::BadInput("empty cloud".into()));
    }
    let corner = c
        .points
        .iter()
        .copied()
        .max_by(|a, b| {
            (a.0 * a.0 + a.1 * a.1).partial_cmp(&(b.0 * b.0 + b.1 * b.1)).unwrap()
        })
        .unwrap();
    let a0 = corner.1.atan2(corner.0);
    let a1 = a0 + 18f64.to_radians();
    // the far chord endpoint: outermost cloud point close to angle a1
    let tol = 1.5f64.to_radians();
    let end = c
        .points
        .iter()
        .copied()
        .filter(|&(x, y)| {
            let d = (y.atan2(x) - a1 + std::f64::consts::PI)
                .rem_euclid(std::f64::consts::TAU)
                - std::f64::consts::PI;
            d.abs() <= tol
        })
        .max_by(|a, b| {
            (a.0 * a.0 + a.1 * a.1).partial_cmp(&(b.0 * b.0 + b.1 * b.1)).unwrap()
        })
        .ok_or_else(|| Error::BadInput("no cloud points at sector end".into()))?;
    let sector = boundary_sector_points(c, grid_step, a0, a1);
    let mut ranking: Vec<(KochTemplate, f64)> = Vec::new();
    for t in KochTemplate::candidates() {
        let k = koch_sector(corner, end, &t, koch_depth)?;
        let sampled = sample_polyline(&k.polyline, grid_step / 2.0);
        ranking.push((t, hausdorff(&sampled, &sector)));
    }
    ranking.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let (template, distance) = ranking[0];
    Ok(KochCalibration { template, distance, chord: (corner, end), ranking })
}

/// Outcome of the substitution-shadow consistency check between two
/// consecutive substitution steps.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConjReport {
    /// Vertices of the next tiling covered by contracted copies of the
    /// previous vertex set placed on the conjugate motif (exact check).
    pub covered: usize,
    pub total: usize,
    pub witness_uncovered: Option<[i64; 4]>,
    /// Eliminated candidates whose perpendicular image lies in the outer
    /// annulus (radius > annulus_factor × cloud max radius).
    pub eliminated_outer: usize,
    pub eliminated_total: usize,
    pub annulus_factor: f64,
    pub witness_inner: Option<[i64; 4]>,
}

impl ConjReport {
    pub fn ok(&self) -> bool {
        self.covered == self.total && self.eliminated_outer == self.eliminated_total
    }
}

/// Verify the perpendicular-space shadow of one substitution step:
/// (i) every next-depth vertex is τ²·(previous vertex) + motif point, so its
/// perpendicular image lies in a contracted copy of the previous cloud
/// placed on the conjugate motif (checked exactly on indices);
/// (ii) eliminated candidates map near the window boundary (outer annulus).
pub fn conj_consistency(
    prev: &Tiling,
    next: &Tiling,
    eliminated: &[Index4],
    annulus_factor: f64,
) -> Result<ConjReport> {
    let mut images: BTreeSet<Index4> = BTreeSet::new();
    for &v in &prev.vertices {
        images.insert(tau_scale_sq(v)?);
    }
    let shell = motif();
    let mut covered = 0usize;
    let mut witness_uncovered = None;
    for &v in &next.vertices {
        if shell.iter().any(|&s| images.contains(&(v - s))) {
            covered += 1;
        } else if witness_uncovered.is_none() {
            witness_uncovered = Some(v.0);
        }
    }

    let cloud = perp_cloud(next, 0);
    let rmax = cloud.max_radius();
    let cut = annulus_factor * rmax;
    let mut eliminated_outer = 0usize;
    let mut witness_inner = None;
    for &e in eliminated {
        let (x, y) = embed_perp_f64(e);
        if (x * x + y * y).sqrt() > cut {
            eliminated_outer += 1;
        } else if witness_inner.is_none() {
            witness_inner = Some(e.0);
        }
    }

    Ok(ConjReport {
        covered,
        total: next.vertices.len(),
        witness_uncovered,
        eliminated_outer,
        eliminated_total: eliminated.len(),
        annulus_factor,
        witness_inner,
    })
}
