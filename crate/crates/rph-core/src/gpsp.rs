//! The point substitution machinery: τ² expansion, motif replication and
//! arrow-keyed elimination of excess candidates, driven by wheel diagrams
//! or per-rhombus random rules.

use crate::bravais::{embed_par, rotate36_k, tau_scale_sq, unit_step, Index4};
use crate::error::{Error, Result};
use crate::golden::GoldenCoord;
use crate::tiling::{rhombus_apexes, Face, FaceKind, Tiling};
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Chirality {
    L,
    R,
}

impl Chirality {
    pub fn flipped(self) -> Chirality {
        match self {
            Chirality::L => Chirality::R,
            Chirality::R => Chirality::L,
        }
    }
}

/// Ten chirality flags keyed by acute-apex orientation: slot k covers the
/// apex whose two edges point along k·36° and (k+1)·36°. The full
/// configuration space has 2¹⁰ = 1024 members.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WheelDiagram {
    pub flags: [Chirality; 10],
}

impl WheelDiagram {
    pub const ALL_L: WheelDiagram = WheelDiagram { flags: [Chirality::L; 10] };
    pub const ALL_R: WheelDiagram = WheelDiagram { flags: [Chirality::R; 10] };

    pub fn alternating() -> WheelDiagram {
        let mut flags = [Chirality::L; 10];
        for (k, f) in flags.iter_mut().enumerate() {
            if k % 2 == 1 {
                *f = Chirality::R;
            }
        }
        WheelDiagram { flags }
    }

    /// All 1024 wheels, in ascending bit order (bit k set = R at slot k).
    pub fn enumerate() -> impl Iterator<Item = WheelDiagram> {
        (0u16..1024).map(|bits| {
            let mut flags = [Chirality::L; 10];
            for (k, f) in flags.iter_mut().enumerate() {
                if bits & (1 << k) != 0 {
                    *f = Chirality::R;
                }
            }
            WheelDiagram { flags }
        })
    }
}

impl fmt::Display for WheelDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.flags {
            write!(f, "{}", if c == Chirality::L { 'L' } else { 'R' })?;
        }
        Ok(())
    }
}

impl FromStr for WheelDiagram {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.len() != 10 {
            return Err(Error::BadInput(format!("wheel string must have 10 characters: {s:?}")));
        }
        let mut flags = [Chirality::L; 10];
        for (k, c) in s.chars().enumerate() {
            flags[k] = match c {
                'L' => Chirality::L,
                'R' => Chirality::R,
                _ => return Err(Error::BadInput(format!("wheel characters must be L or R: {s:?}"))),
            };
        }
        Ok(WheelDiagram { flags })
    }
}

/// The four per-rhombus elimination rules. `L`/`R` are invariant under the
/// two-fold rotation of the rhombus; `M`/`MPrime` are mirror-related.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum ElimRule {
    L,
    R,
    M,
    MPrime,
}

/// How elimination choices are made for one substitution step.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum RuleSource {
    Wheel(WheelDiagram),
    /// Per-rhombus random choice among {l, r, m, m′} with the given weights.
    Random { weights: [f64; 4] },
}

/// One entry of a substitution schedule.
pub type ScheduleEntry = RuleSource;

/// An ordered, nonempty list of substitution rules, cycled when more steps
/// than entries are requested.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Schedule {
    entries: Vec<ScheduleEntry>,
}

impl Schedule {
    pub fn new(entries: Vec<ScheduleEntry>) -> Result<Schedule> {
        if entries.is_empty() {
            return Err(Error::BadInput("schedule must be nonempty".into()));
        }
        Ok(Schedule { entries })
    }

    pub fn uniform(wheel: WheelDiagram) -> Schedule {
        Schedule { entries: vec![RuleSource::Wheel(wheel)] }
    }

    pub fn entries(&self) -> &[ScheduleEntry] {
        &self.entries
    }

    pub fn entry_for_step(&self, step: usize) -> &ScheduleEntry {
        &self.entries[step % self.entries.len()]
    }
}

/// Slack band kept outside the growth region when trimming; wide enough
/// (> τ) that boundary-straddling tiles keep their full vertex sets.
pub const TRIM_MARGIN: f64 = 2.5;

/// The convex region a patch legitimately covers, expanded by τ² per step.
/// Motif replication spills candidates into a halo outside this region;
/// no rhombus ever designates eliminations there, so the halo re-inflates
/// its own defects and must be cut away after every step.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthRegion {
    /// Convex polygon corners in counterclockwise order.
    corners: Vec<Index4>,
}

fn cmp_coord(a: GoldenCoord, b: GoldenCoord) -> std::cmp::Ordering {
    (a.x - b.x).signum().then((a.y - b.y).signum())
}

impl GrowthRegion {
    /// Exact convex hull of the given points (monotone chain). Needs at
    /// least three non-collinear points.
    pub fn hull(points: &BTreeSet<Index4>) -> Result<GrowthRegion> {
        let mut pts: Vec<Index4> = points.iter().copied().collect();
        pts.sort_by(|&a, &b| cmp_coord(embed_par(a), embed_par(b)));
        pts.dedup();
        if pts.len() < 3 {
            return Err(Error::BadInput("growth region needs at least 3 points".into()));
        }
        let turn = |o: Index4, a: Index4, b: Index4| {
            (embed_par(a) - embed_par(o)).cross_sign(embed_par(b) - embed_par(o))
        };
        let mut lower: Vec<Index4> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2
                && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) != Ordering::Greater
            {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Index4> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2
                && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) != Ordering::Greater
            {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        if lower.len() < 3 {
            return Err(Error::BadInput("growth region is degenerate (collinear points)".into()));
        }
        Ok(GrowthRegion { corners: lower })
    }

    pub fn corners(&self) -> &[Index4] {
        &self.corners
    }

    /// Exact point-in-convex-polygon test; boundary counts as inside.
    pub fn contains(&self, p: Index4) -> bool {
        let n = self.corners.len();
        let pc = embed_par(p);
        for i in 0..n {
            let a = embed_par(self.corners[i]);
            let b = embed_par(self.corners[(i + 1) % n]);
            if (b - a).cross_sign(pc - a) == Ordering::Less {
                return false;
            }
        }
        true
    }

    /// Containment with a float slack band around the polygon. The margin
    /// retains the real tiles that straddle the region boundary (their
    /// apexes designate eliminations just inside); it stays constant while
    /// the region grows τ² per step, so margin garbage never reaches the
    /// interior.
    pub fn contains_within(&self, p: Index4, margin: f64) -> bool {
        if self.contains(p) {
            return true;
        }
        let (px, py) = crate::bravais::embed_par_f64(p);
        let n = self.corners.len();
        for i in 0..n {
            let (ax, ay) = crate::bravais::embed_par_f64(self.corners[i]);
            let (bx, by) = crate::bravais::embed_par_f64(self.corners[(i + 1) % n]);
            let (ex, ey) = (bx - ax, by - ay);
            let len2 = ex * ex + ey * ey;
            let t = (((px - ax) * ex + (py - ay) * ey) / len2).clamp(0.0, 1.0);
            let (dx, dy) = (px - ax - t * ex, py - ay - t * ey);
            if dx * dx + dy * dy <= margin * margin {
                return true;
            }
        }
        false
    }

    /// The region after one substitution step: every corner scaled by τ².
    pub fn scale_up(&self) -> Result<GrowthRegion> {
        let corners = self
            .corners
            .iter()
            .map(|&c| tau_scale_sq(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(GrowthRegion { corners })
    }
}

/// The 11-point basic motif: a centred decagon, indices [0000] plus the
/// ten-fold orbit of [1100].
pub fn motif() -> Vec<Index4> {
    let mut pts = vec![Index4::ZERO];
    for k in 0..10 {
        pts.push(rotate36_k(Index4::new(1, 1, 0, 0), k));
    }
    pts
}

/// Steps G1+G2: τ²-expand every vertex and replicate the motif on it.
pub fn inflate(vertices: &BTreeSet<Index4>) -> Result<BTreeSet<Index4>> {
    let shell = motif();
    let mut out = BTreeSet::new();
    for &v in vertices {
        let c = tau_scale_sq(v)?;
        for &s in &shell {
            out.insert(c + s);
        }
    }
    Ok(out)
}

/// The elimination-free point inflation iterated n times (the para-Penrose
/// superset of every RPH vertex set from the same seed).
pub fn point_inflation_only(seed: &BTreeSet<Index4>, n: usize) -> Result<BTreeSet<Index4>> {
    let mut pts = seed.clone();
    for _ in 0..n {
        pts = inflate(&pts)?;
    }
    Ok(pts)
}

/// Summary of one elimination pass.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ElimInfo {
    /// Number of (rhombus apex → candidate) designations issued; always
    /// 2 · number of R faces.
    pub designated: usize,
    /// Points actually removed (≤ designated when rhombi agree on a point).
    pub removed: Vec<Index4>,
    /// Per-rhombus rules drawn from a Random source, for provenance.
    pub random_rules: Vec<ElimRule>,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Deterministic per-rhombus stream key: independent of iteration order.
fn rhombus_stream(master_seed: u64, iteration: u64, ordinal: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master_seed) ^ iteration) ^ ordinal)
}

fn draw_rule(weights: &[f64; 4], key: u64) -> ElimRule {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(key);
    let total: f64 = weights.iter().sum();
    let mut x = rng.gen::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if x < w {
            return [ElimRule::L, ElimRule::R, ElimRule::M, ElimRule::MPrime][i];
        }
        x -= w;
    }
    ElimRule::MPrime
}

/// Step G3: at each acute apex of each expanded rhombus, remove exactly one
/// of the two candidates at unit distance from the apex, chosen by the
/// chirality flag of the apex orientation (or the per-rhombus random rule).
///
/// Chirality convention: flag L eliminates the clockwise candidate (the one
/// along the lower edge direction k·36°); flag R the counterclockwise one.
pub fn eliminate(
    candidates: &mut BTreeSet<Index4>,
    rhombi: &[&Face],
    rule_source: &RuleSource,
    master_seed: u64,
    iteration: u64,
) -> Result<ElimInfo> {
    let mut removed = BTreeSet::new();
    let mut designated = 0usize;
    let mut random_rules = Vec::new();

    for (ordinal, face) in rhombi.iter().enumerate() {
        let apexes = rhombus_apexes(face)?;
        // per-apex flags for this rhombus
        let flags: [(Index4, u8, Chirality); 2] = match rule_source {
            RuleSource::Wheel(w) => [
                (apexes[0].0, apexes[0].1, w.flags[apexes[0].1 as usize]),
                (apexes[1].0, apexes[1].1, w.flags[apexes[1].1 as usize]),
            ],
            RuleSource::Random { weights } => {
                let rule = draw_rule(weights, rhombus_stream(master_seed, iteration, ordinal as u64));
                random_rules.push(rule);
                // canonical apex: the one with slot k < 5
                let (lo, hi) = if apexes[0].1 < 5 {
                    (apexes[0], apexes[1])
                } else {
                    (apexes[1], apexes[0])
                };
                let (flo, fhi) = match rule {
                    ElimRule::L => (Chirality::L, Chirality::L),
                    ElimRule::R => (Chirality::R, Chirality::R),
                    ElimRule::M => (Chirality::L, Chirality::R),
                    ElimRule::MPrime => (Chirality::R, Chirality::L),
                };
                [(lo.0, lo.1, flo), (hi.0, hi.1, fhi)]
            }
        };

        for (apex, k, flag) in flags {
            let expanded = tau_scale_sq(apex)?;
            let d = match flag {
                Chirality::L => k as usize,
                Chirality::R => (k as usize + 1) % 10,
            };
            let victim = expanded + unit_step(d);
            if !candidates.contains(&victim) && !removed.contains(&victim) {
                return Err(Error::Structural(format!(
                    "designated candidate {victim:?} missing at apex {apex:?} (slot {k})"
                )));
            }
            designated += 1;
            if candidates.remove(&victim) {
                removed.insert(victim);
            }
        }
    }

    Ok(ElimInfo {
        designated,
        removed: removed.into_iter().collect(),
        random_rules,
    })
}

/// Provenance of one full substitution step.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepLog {
    pub iteration: usize,
    pub rule: String,
    pub rhombi: usize,
    pub designated: usize,
    pub removed: usize,
    pub vertices: usize,
    pub faces: usize,
}

/// One full GPSP step: inflate, eliminate, trim to the growth region,
/// rebuild edges and faces. Returns the next tiling plus the eliminated
/// points (the carved part of the perpendicular-space figure).
pub fn gpsp_step(
    t: &Tiling,
    rule_source: &RuleSource,
    master_seed: u64,
    iteration: u64,
    region: Option<&GrowthRegion>,
) -> Result<(Tiling, ElimInfo)> {
    let mut candidates = inflate(&t.vertices)?;
    let rhombi: Vec<&Face> = t.faces_of_kind(FaceKind::R).collect();
    let info = eliminate(&mut candidates, &rhombi, rule_source, master_seed, iteration)?;
    if let Some(r) = region {
        candidates.retain(|&p| r.contains_within(p, TRIM_MARGIN));
    }
    let next = Tiling::from_points(candidates)?;
    Ok((next, info))
}

/// Apply `steps` substitution steps, cycling the schedule. Identical
/// (schedule, master_seed) reproduce bit-identical output.
pub fn run_sequence(
    seed: &Tiling,
    schedule: &Schedule,
    steps: usize,
    master_seed: u64,
) -> Result<(Tiling, Vec<StepLog>)> {
    let mut t = seed.clone();
    let mut region = GrowthRegion::hull(&seed.vertices).ok();
    let mut logs = Vec::with_capacity(steps);
    for i in 0..steps {
        let entry = schedule.entry_for_step(i);
        let rhombi = t.faces_of_kind(FaceKind::R).count();
        region = match region {
            Some(r) => Some(r.scale_up()?),
            None => None,
        };
        let (next, info) = gpsp_step(&t, entry, master_seed, i as u64, region.as_ref())?;
        logs.push(StepLog {
            iteration: i,
            rule: match entry {
                RuleSource::Wheel(w) => w.to_string(),
                RuleSource::Random { weights } => format!(
                    "RANDOM({},{},{},{}) stream=({master_seed},{i})",
                    weights[0], weights[1], weights[2], weights[3]
                ),
            },
            rhombi,
            designated: info.designated,
            removed: info.removed.len(),
            vertices: next.vertices.len(),
            faces: next.faces.len(),
        });
        t = next;
    }
    Ok((t, logs))
}
