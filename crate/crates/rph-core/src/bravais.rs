//! The rank-4 decagonal Bravais module Λ₁₀: integer indexing of module
//! points, exact parallel and perpendicular embeddings, the τ-scaling
//! automorphism and the D₁₀ point-symmetry action.

use crate::error::{Error, Result};
use crate::golden::{GoldenCoord, GoldenInt, GoldenScalar};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Neg, Sub};

/// Integer 4-vector indexing the module point n₀e₀ + n₁e₁ + n₂e₂ + n₃e₃,
/// where e_j = (cos 72°j, sin 72°j). The fifth axis e₄ = −(e₀+e₁+e₂+e₃)
/// is always rewritten into these four canonical indices, so Index4 is a
/// unique coordinate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Index4(pub [i64; 4]);

impl Index4 {
    pub const ZERO: Index4 = Index4([0, 0, 0, 0]);

    pub const fn new(n0: i64, n1: i64, n2: i64, n3: i64) -> Self {
        Index4([n0, n1, n2, n3])
    }

    /// Canonicalize a 5-coefficient combination Σ c_j e_j.
    fn from_five(c: [i64; 5]) -> Self {
        Index4([c[0] - c[4], c[1] - c[4], c[2] - c[4], c[3] - c[4]])
    }

    fn from_five_checked(c: [i64; 5]) -> Result<Self> {
        let mut n = [0i64; 4];
        for j in 0..4 {
            n[j] = c[j]
                .checked_sub(c[4])
                .ok_or(Error::Overflow { context: "index canonicalization" })?;
        }
        Ok(Index4(n))
    }
}

impl Add for Index4 {
    type Output = Index4;
    fn add(self, rhs: Self) -> Self {
        Index4([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
            self.0[3] + rhs.0[3],
        ])
    }
}

impl Sub for Index4 {
    type Output = Index4;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Index4 {
    type Output = Index4;
    fn neg(self) -> Self {
        Index4([-self.0[0], -self.0[1], -self.0[2], -self.0[3]])
    }
}

/// Doubled basis vectors 2e_j in the exact coordinate algebra.
fn basis_doubled(j: usize) -> GoldenCoord {
    let g = GoldenInt::new;
    let gs = GoldenScalar::new;
    match j {
        // 2e₀ = (2, 0)
        0 => GoldenCoord::from_doubled(gs(g(2, 0), g(0, 0)), GoldenScalar::ZERO),
        // 2e₁ = (τ−1, S)
        1 => GoldenCoord::from_doubled(gs(g(-1, 1), g(0, 0)), gs(g(0, 0), g(1, 0))),
        // 2e₂ = (−τ, (τ−1)S)
        2 => GoldenCoord::from_doubled(gs(g(0, -1), g(0, 0)), gs(g(0, 0), g(-1, 1))),
        // 2e₃ = (−τ, −(τ−1)S)
        3 => GoldenCoord::from_doubled(gs(g(0, -1), g(0, 0)), gs(g(0, 0), g(1, -1))),
        // 2e₄ = (τ−1, −S)
        4 => GoldenCoord::from_doubled(gs(g(-1, 1), g(0, 0)), gs(g(0, 0), g(-1, 0))),
        _ => unreachable!(),
    }
}

fn embed_with(p: Index4, perm: [usize; 4]) -> GoldenCoord {
    let mut acc = GoldenCoord::ZERO;
    for (k, &j) in perm.iter().enumerate() {
        let n = p.0[k];
        if n != 0 {
            acc = acc + basis_doubled(j).scale(GoldenInt::new(n, 0));
        }
    }
    acc
}

/// Physical-space position Σ n_j e_j, exact.
pub fn embed_par(p: Index4) -> GoldenCoord {
    embed_with(p, [0, 1, 2, 3])
}

/// Perpendicular-space position (the bijection π̂): Σ n_j e_{2j mod 5}.
pub fn embed_perp(p: Index4) -> GoldenCoord {
    embed_with(p, [0, 2, 4, 1])
}

pub fn embed_par_f64(p: Index4) -> (f64, f64) {
    embed_par(p).to_f64()
}

pub fn embed_perp_f64(p: Index4) -> (f64, f64) {
    embed_perp(p).to_f64()
}

/// The integer linear map realizing τΛ₁₀ = Λ₁₀: τe_j = e_{j−1} + e_j + e_{j+1}.
pub fn tau_scale(p: Index4) -> Result<Index4> {
    let mut c = [0i64; 5];
    for j in 0..4 {
        let n = p.0[j];
        for &k in &[(j + 4) % 5, j, (j + 1) % 5] {
            c[k] = c[k]
                .checked_add(n)
                .ok_or(Error::Overflow { context: "tau_scale" })?;
        }
    }
    Index4::from_five_checked(c)
}

/// τ²-scaling, the inflation step G1.
pub fn tau_scale_sq(p: Index4) -> Result<Index4> {
    tau_scale(tau_scale(p)?)
}

/// Exact rotation by 36°: R36 e_j = −e_{j+3 mod 5}.
pub fn rotate36(p: Index4) -> Index4 {
    let mut c = [0i64; 5];
    for j in 0..4 {
        c[(j + 3) % 5] -= p.0[j];
    }
    Index4::from_five(c)
}

/// Exact reflection about the x-axis: e_j → e_{5−j mod 5}.
pub fn mirror_x(p: Index4) -> Index4 {
    let mut c = [0i64; 5];
    for j in 0..4 {
        c[(5 - j) % 5] += p.0[j];
    }
    Index4::from_five(c)
}

/// Rotation by k·36°.
pub fn rotate36_k(p: Index4, k: u32) -> Index4 {
    let mut q = p;
    for _ in 0..(k % 10) {
        q = rotate36(q);
    }
    q
}

/// The ten unit steps ±e_j, indexed by direction d so that
/// `unit_step(d)` points along the angle d·36°.
pub fn unit_step(d: usize) -> Index4 {
    debug_assert!(d < 10);
    let e = |j: usize| -> Index4 {
        match j {
            0 => Index4::new(1, 0, 0, 0),
            1 => Index4::new(0, 1, 0, 0),
            2 => Index4::new(0, 0, 1, 0),
            3 => Index4::new(0, 0, 0, 1),
            4 => Index4::new(-1, -1, -1, -1),
            _ => unreachable!(),
        }
    };
    if d % 2 == 0 {
        e(d / 2)
    } else {
        -e((d + 5) / 2 % 5)
    }
}

/// The ten short steps ±(e_j + e_{j+2 mod 5}), parallel length 1/τ and
/// perpendicular length τ, indexed so `short_step(d)` points along d·36°.
pub fn short_step(d: usize) -> Index4 {
    debug_assert!(d < 10);
    let pair = |j: usize| unit_step(2 * (j % 5)) + unit_step(2 * ((j + 2) % 5));
    if d % 2 == 0 {
        // +(e_j + e_{j+2}) points along (j+1)·72°
        pair((d / 2 + 4) % 5)
    } else {
        // −(e_j + e_{j+2}) points along (j+1)·72° − 180°
        -pair(((d + 3) / 2) % 5)
    }
}

/// Direction index d (0..10) such that `unit_step(d) == v`, if v is a unit step.
pub fn unit_step_direction(v: Index4) -> Option<usize> {
    (0..10).find(|&d| unit_step(d) == v)
}

/// Convex hull of a float point set (monotone chain), counterclockwise.
pub fn convex_hull_f64(pts: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut p: Vec<(f64, f64)> = pts.to_vec();
    p.sort_by(|a, b| a.partial_cmp(b).unwrap());
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &q in &p {
        while lower.len() >= 2
            && cross(lower[lower.len() - 2], lower[lower.len() - 1], q) <= 0.0
        {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2
            && cross(upper[upper.len() - 2], upper[upper.len() - 1], q) <= 0.0
        {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Whether a point lies inside (or on) a counterclockwise convex polygon.
pub fn point_in_convex_f64(poly: &[(f64, f64)], (px, py): (f64, f64)) -> bool {
    poly.len() >= 3
        && (0..poly.len()).all(|i| {
            let (ax, ay) = poly[i];
            let (bx, by) = poly[(i + 1) % poly.len()];
            (bx - ax) * (py - ay) - (by - ay) * (px - ax) >= -1e-9
        })
}

/// Area centroid of a simple polygon; falls back to the vertex mean for
/// degenerate inputs.
pub fn polygon_centroid_f64(poly: &[(f64, f64)]) -> (f64, f64) {
    let n = poly.len();
    let mut area2 = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for i in 0..n {
        let (ax, ay) = poly[i];
        let (bx, by) = poly[(i + 1) % n];
        let w = ax * by - bx * ay;
        area2 += w;
        cx += (ax + bx) * w;
        cy += (ay + by) * w;
    }
    if area2.abs() < 1e-12 {
        let m = n.max(1) as f64;
        return (
            poly.iter().map(|p| p.0).sum::<f64>() / m,
            poly.iter().map(|p| p.1).sum::<f64>() / m,
        );
    }
    (cx / (3.0 * area2), cy / (3.0 * area2))
}
