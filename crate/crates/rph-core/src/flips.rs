//! Simpleton flips: detection of single-vertex hops that retile an
//! R-P-H triple in place, flip application, and seeded Monte Carlo flip
//! dynamics with an incrementally maintained move list.

use crate::bravais::{embed_par_f64, embed_perp_f64, short_step, unit_step};
use crate::error::{Error, Result};
use crate::tiling::{Face, FaceKind, Tiling};
use crate::Index4;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};

/// A vertex hop by one short step (parallel length 1/τ, perpendicular
/// transport τ) that re-tiles the surrounding R-P-H triple.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct FlipMove {
    pub vertex: Index4,
    pub hop: Index4,
}

impl FlipMove {
    pub fn target(&self) -> Index4 {
        self.vertex + self.hop
    }

    /// The reverse move, available on the flipped tiling.
    pub fn reversed(&self) -> FlipMove {
        FlipMove { vertex: self.target(), hop: Index4::ZERO - self.hop }
    }
}

fn is_rph_triple(faces: &[&Face]) -> bool {
    if faces.len() != 3 {
        return false;
    }
    let mut r = 0;
    let mut p = 0;
    let mut h = 0;
    for f in faces {
        match f.kind {
            FaceKind::R => r += 1,
            FaceKind::P => p += 1,
            FaceKind::H => h += 1,
            FaceKind::Unknown => return false,
        }
    }
    (r, p, h) == (1, 1, 1)
}

/// All flips available at one vertex, given its incident faces. The vertex
/// must be interior with exactly one R, one P and one H around it; a hop is
/// accepted when the vacated triple region re-tiles into prototiles with the
/// same rim and the moved vertex collides with nothing outside the rim.
fn flips_for_vertex(
    vertices: &BTreeSet<Index4>,
    outer: &BTreeSet<Index4>,
    incident: &[&Face],
    v: Index4,
) -> Vec<FlipMove> {
    if outer.contains(&v) || !is_rph_triple(incident) {
        return Vec::new();
    }
    let mut ring: BTreeSet<Index4> = BTreeSet::new();
    for f in incident {
        ring.extend(f.cycle.iter().copied());
    }
    ring.remove(&v);

    let mut out = Vec::new();
    'hops: for d in 0..10 {
        let hop = short_step(d);
        let vp = v + hop;
        if vertices.contains(&vp) {
            continue;
        }
        // a unit edge from the landed vertex to anything outside the rim
        // would pierce a neighboring face
        for dd in 0..10 {
            let u = vp + unit_step(dd);
            if u != v && vertices.contains(&u) && !ring.contains(&u) {
                continue 'hops;
            }
        }
        let mut pts = ring.clone();
        pts.insert(vp);
        let Ok(small) = Tiling::from_points(pts) else {
            continue;
        };
        if small.faces.len() == 3
            && is_rph_triple(&small.faces.iter().collect::<Vec<_>>())
            && small.outer == ring
        {
            out.push(FlipMove { vertex: v, hop });
        }
    }
    out
}

fn incidence_map(t: &Tiling) -> HashMap<Index4, Vec<usize>> {
    let mut map: HashMap<Index4, Vec<usize>> = HashMap::new();
    for (i, f) in t.faces.iter().enumerate() {
        for &v in &f.cycle {
            map.entry(v).or_default().push(i);
        }
    }
    map
}

/// Every available simpleton flip of the tiling, in canonical order.
pub fn find_flips(t: &Tiling) -> Vec<FlipMove> {
    let incidence = incidence_map(t);
    let mut out = Vec::new();
    for &v in &t.vertices {
        let incident: Vec<&Face> = incidence
            .get(&v)
            .map(|ids| ids.iter().map(|&i| &t.faces[i]).collect())
            .unwrap_or_default();
        out.extend(flips_for_vertex(&t.vertices, &t.outer, &incident, v));
    }
    out.sort();
    out
}

/// Apply one flip, rejecting moves that are not currently available.
pub fn apply_flip(t: &Tiling, m: &FlipMove) -> Result<Tiling> {
    let incidence = incidence_map(t);
    let incident: Vec<&Face> = incidence
        .get(&m.vertex)
        .map(|ids| ids.iter().map(|&i| &t.faces[i]).collect())
        .unwrap_or_default();
    if !flips_for_vertex(&t.vertices, &t.outer, &incident, m.vertex).contains(m) {
        return Err(Error::BadInput(format!("flip not available: {m:?}")));
    }
    let mut pts = t.vertices.clone();
    pts.remove(&m.vertex);
    pts.insert(m.target());
    Tiling::from_points(pts)
}

/// One record per executed Monte Carlo step.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FlipTraceEntry {
    pub step: usize,
    pub mv: FlipMove,
    /// Number of moves that were available when this one was drawn.
    pub available: usize,
    /// RMS perpendicular-space radius of the vertex cloud after the move.
    pub perp_rms: f64,
}

#[derive(Clone, Debug)]
pub struct McOutcome {
    pub tiling: Tiling,
    pub trace: Vec<FlipTraceEntry>,
    pub completed_steps: usize,
    /// True when the flip supply ran dry before the requested step count.
    pub terminated_early: bool,
}

const GRID_CELL: f64 = 3.0;
/// Vertices within this parallel distance of a moved vertex get their move
/// list recomputed; covers rim membership (≤ ~2.1) and occupancy-sensitive
/// targets (≤ 1 + 2/τ).
const AFFECT_RADIUS: f64 = 3.0;

struct McState {
    vertices: BTreeSet<Index4>,
    outer: BTreeSet<Index4>,
    faces: HashMap<u64, Face>,
    incidence: HashMap<Index4, Vec<u64>>,
    grid: HashMap<(i64, i64), Vec<Index4>>,
    next_id: u64,
    sum_perp_sq: f64,
}

fn cell_of(v: Index4) -> (i64, i64) {
    let (x, y) = embed_par_f64(v);
    ((x / GRID_CELL).floor() as i64, (y / GRID_CELL).floor() as i64)
}

impl McState {
    fn new(t: &Tiling) -> McState {
        let mut faces = HashMap::new();
        let mut incidence: HashMap<Index4, Vec<u64>> = HashMap::new();
        for (i, f) in t.faces.iter().enumerate() {
            let id = i as u64;
            for &v in &f.cycle {
                incidence.entry(v).or_default().push(id);
            }
            faces.insert(id, f.clone());
        }
        let mut grid: HashMap<(i64, i64), Vec<Index4>> = HashMap::new();
        let mut sum_perp_sq = 0.0;
        for &v in &t.vertices {
            grid.entry(cell_of(v)).or_default().push(v);
            let (px, py) = embed_perp_f64(v);
            sum_perp_sq += px * px + py * py;
        }
        McState {
            vertices: t.vertices.clone(),
            outer: t.outer.clone(),
            faces,
            incidence,
            grid,
            next_id: t.faces.len() as u64,
            sum_perp_sq,
        }
    }

    fn flips_at(&self, v: Index4) -> Vec<FlipMove> {
        let incident: Vec<&Face> = self
            .incidence
            .get(&v)
            .map(|ids| ids.iter().map(|id| &self.faces[id]).collect())
            .unwrap_or_default();
        flips_for_vertex(&self.vertices, &self.outer, &incident, v)
    }

    /// Vertices within AFFECT_RADIUS of p, via the coarse grid.
    fn nearby(&self, p: Index4, acc: &mut BTreeSet<Index4>) {
        let (px, py) = embed_par_f64(p);
        let (c0, c1) = cell_of(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(cell) = self.grid.get(&(c0 + dx, c1 + dy)) {
                    for &u in cell {
                        let (ux, uy) = embed_par_f64(u);
                        if ((ux - px).powi(2) + (uy - py).powi(2)).sqrt() <= AFFECT_RADIUS {
                            acc.insert(u);
                        }
                    }
                }
            }
        }
    }

    /// Local surgery for a move already known to be valid. Returns the set
    /// of vertices whose available moves may have changed.
    fn apply(&mut self, m: &FlipMove) -> Result<BTreeSet<Index4>> {
        let v = m.vertex;
        let vp = m.target();
        let old_ids = self.incidence.get(&v).cloned().unwrap_or_default();
        let mut ring: BTreeSet<Index4> = BTreeSet::new();
        for id in &old_ids {
            ring.extend(self.faces[id].cycle.iter().copied());
        }
        ring.remove(&v);

        // affected set, gathered before occupancy changes
        let mut affected = BTreeSet::new();
        self.nearby(v, &mut affected);
        self.nearby(vp, &mut affected);
        affected.extend(ring.iter().copied());
        affected.remove(&v);
        affected.insert(vp);

        for id in &old_ids {
            let f = self.faces.remove(id).expect("face id tracked");
            for u in f.cycle {
                if let Some(ids) = self.incidence.get_mut(&u) {
                    ids.retain(|x| x != id);
                }
            }
        }
        self.incidence.remove(&v);
        self.vertices.remove(&v);
        self.vertices.insert(vp);
        if let Some(cell) = self.grid.get_mut(&cell_of(v)) {
            cell.retain(|&u| u != v);
        }
        self.grid.entry(cell_of(vp)).or_default().push(vp);
        let (ox, oy) = embed_perp_f64(v);
        let (nx, ny) = embed_perp_f64(vp);
        self.sum_perp_sq += nx * nx + ny * ny - ox * ox - oy * oy;

        let mut pts = ring;
        pts.insert(vp);
        let small = Tiling::from_points(pts)?;
        if small.faces.len() != 3 {
            return Err(Error::Structural(format!(
                "flip region re-tiled into {} faces at {v:?}",
                small.faces.len()
            )));
        }
        for f in small.faces {
            let id = self.next_id;
            self.next_id += 1;
            let boundary = f.cycle.iter().any(|u| self.outer.contains(u));
            for &u in &f.cycle {
                self.incidence.entry(u).or_default().push(id);
            }
            self.faces.insert(id, Face { boundary, ..f });
        }
        Ok(affected)
    }

    fn perp_rms(&self) -> f64 {
        (self.sum_perp_sq / self.vertices.len() as f64).sqrt()
    }

    fn to_tiling(&self) -> Result<Tiling> {
        Tiling::from_points(self.vertices.clone())
    }
}

/// How often the Monte Carlo loop rebuilds and fully validates the tiling.
pub const SPOT_CHECK_INTERVAL: usize = 100;

/// Seeded Monte Carlo flip dynamics: each step draws one available flip
/// uniformly at random and applies it. Deterministic per seed; validates the
/// full tiling every `SPOT_CHECK_INTERVAL` steps and stops early (reported,
/// not an error) if no flip is available.
pub fn monte_carlo_flips(t: &Tiling, steps: usize, seed: u64) -> Result<McOutcome> {
    let mut state = McState::new(t);
    let mut moves: BTreeSet<FlipMove> = find_flips(t).into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trace = Vec::with_capacity(steps);
    let mut done = 0;
    for step in 0..steps {
        if moves.is_empty() {
            break;
        }
        let pick = rng.gen_range(0..moves.len());
        let m = *moves.iter().nth(pick).expect("index in range");
        let available = moves.len();
        let affected = state.apply(&m)?;
        for &u in &affected {
            for d in 0..10 {
                moves.remove(&FlipMove { vertex: u, hop: short_step(d) });
            }
        }
        for d in 0..10 {
            moves.remove(&FlipMove { vertex: m.vertex, hop: short_step(d) });
        }
        for &u in &affected {
            for f in state.flips_at(u) {
                moves.insert(f);
            }
        }
        done = step + 1;
        trace.push(FlipTraceEntry { step: done, mv: m, available, perp_rms: state.perp_rms() });
        if done % SPOT_CHECK_INTERVAL == 0 {
            let snapshot = state.to_tiling()?;
            let report = snapshot.validate();
            if !report.ok {
                return Err(Error::Structural(format!(
                    "tiling invalid after {done} flips: {:?}",
                    report.faults
                )));
            }
            let fresh: BTreeSet<FlipMove> = find_flips(&snapshot).into_iter().collect();
            if fresh != moves {
                return Err(Error::Structural(format!(
                    "incremental move list diverged after {done} flips: \
                     {} tracked vs {} recomputed",
                    moves.len(),
                    fresh.len()
                )));
            }
        }
    }
    let terminated_early = done < steps;
    Ok(McOutcome { tiling: state.to_tiling()?, trace, completed_steps: done, terminated_early })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden::{GoldenInt, GoldenScalar};
    use crate::gpsp::{run_sequence, Schedule, WheelDiagram};

    fn patch(depth: usize) -> Tiling {
        let seed = Tiling::seed_rhombus();
        let sched = Schedule::uniform(WheelDiagram::ALL_L);
        run_sequence(&seed, &sched, depth, 0).unwrap().0
    }

    fn counts(t: &Tiling) -> (usize, usize, usize) {
        (
            t.faces_of_kind(FaceKind::R).count(),
            t.faces_of_kind(FaceKind::P).count(),
            t.faces_of_kind(FaceKind::H).count(),
        )
    }

    #[test]
    fn single_rhombus_has_no_flips() {
        assert!(find_flips(&Tiling::seed_rhombus()).is_empty());
    }

    #[test]
    fn hop_lengths_are_exact() {
        let t = patch(3);
        let flips = find_flips(&t);
        assert!(!flips.is_empty());
        // 4·|par|² = 8 − 4τ (i.e. 1/τ²) and 4·|perp|² = 4 + 4τ (i.e. τ²)
        let par_sq = GoldenScalar::rational(GoldenInt::new(8, -4));
        let perp_sq = GoldenScalar::rational(GoldenInt::new(4, 4));
        for m in &flips {
            let par = crate::bravais::embed_par(m.hop).norm2_x4();
            let perp = crate::bravais::embed_perp(m.hop).norm2_x4();
            assert_eq!(par, par_sq, "{m:?}");
            assert_eq!(perp, perp_sq, "{m:?}");
        }
    }

    #[test]
    fn apply_flip_is_an_involution_and_preserves_counts() {
        let t = patch(3);
        let flips = find_flips(&t);
        let before = counts(&t);
        for m in flips.iter().take(5) {
            let t2 = apply_flip(&t, m).unwrap();
            assert!(t2.validate().ok);
            assert_eq!(counts(&t2), before, "{m:?}");
            let t3 = apply_flip(&t2, &m.reversed()).unwrap();
            assert_eq!(t3.vertices, t.vertices, "{m:?}");
        }
    }

    #[test]
    fn unavailable_flip_is_rejected() {
        let t = patch(2);
        let bogus = FlipMove { vertex: Index4::ZERO, hop: short_step(0) };
        assert!(apply_flip(&t, &bogus).is_err());
    }

    #[test]
    fn flip_endpoints_sit_beside_a_shared_unit_neighbor() {
        // the two hop endpoints are the two unit-distance candidates next to
        // an acute apex: both are unit steps from some common vertex
        let t = patch(3);
        for m in find_flips(&t) {
            let vp = m.target();
            let has_common = t.vertices.iter().any(|&a| {
                crate::bravais::unit_step_direction(m.vertex - a).is_some()
                    && crate::bravais::unit_step_direction(vp - a).is_some()
            });
            assert!(has_common, "{m:?}");
        }
    }

    #[test]
    fn mirror_equivariance_of_flip_lists() {
        let t = patch(2);
        let m = t.mirrored().unwrap();
        let mut mirrored_flips: Vec<FlipMove> = find_flips(&t)
            .into_iter()
            .map(|f| FlipMove {
                vertex: crate::bravais::mirror_x(f.vertex),
                hop: crate::bravais::mirror_x(f.hop),
            })
            .collect();
        mirrored_flips.sort();
        assert_eq!(mirrored_flips, find_flips(&m));
    }

    #[test]
    fn monte_carlo_is_deterministic_and_preserves_counts() {
        let t = patch(3);
        let before = counts(&t);
        let a = monte_carlo_flips(&t, 300, 99).unwrap();
        let b = monte_carlo_flips(&t, 300, 99).unwrap();
        assert_eq!(a.completed_steps, 300);
        assert_eq!(a.tiling.vertices, b.tiling.vertices);
        assert_eq!(counts(&a.tiling), before);
        let c = monte_carlo_flips(&t, 300, 100).unwrap();
        assert_ne!(a.tiling.vertices, c.tiling.vertices, "seed must matter");
    }

    #[test]
    fn incremental_move_list_survives_spot_checks() {
        // the run itself cross-checks the tracked move list against a full
        // recompute at every spot-check interval and errors on divergence
        let t = patch(2);
        let out = monte_carlo_flips(&t, 350, 7).unwrap();
        assert_eq!(out.completed_steps, 350);
        assert!(!out.terminated_early);
    }

    #[test]
    fn perp_rms_trends_upward() {
        let t = patch(3);
        let out = monte_carlo_flips(&t, 500, 42).unwrap();
        let early: f64 =
            out.trace[..50].iter().map(|e| e.perp_rms).sum::<f64>() / 50.0;
        let late: f64 =
            out.trace[out.trace.len() - 50..].iter().map(|e| e.perp_rms).sum::<f64>() / 50.0;
        assert!(late >= early, "early {early}, late {late}");
    }
}
