//! Point-group classification: stabilizers of wheel diagrams under the
//! dihedral action, intersection groups for schedules, and empirical
//! symmetry detection of perpendicular clouds.

use crate::gpsp::{Chirality, WheelDiagram};
use crate::window::{hausdorff, PerpCloud};
use serde::{Deserialize, Serialize};

/// An element of the dihedral group of order 20 acting on wheel slots:
/// `Rot(t)` maps slot k to k+t preserving chirality; `Mirror(a)` (axis at
/// a·18°) maps slot k to a−k−1 and flips chirality.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum D10 {
    Rot(u8),
    Mirror(u8),
}

impl D10 {
    pub fn all() -> impl Iterator<Item = D10> {
        (0..10).map(D10::Rot).chain((0..10).map(D10::Mirror))
    }

    /// Apply to a wheel diagram.
    pub fn act(self, w: &WheelDiagram) -> WheelDiagram {
        let mut flags = [Chirality::L; 10];
        match self {
            D10::Rot(t) => {
                for k in 0..10 {
                    flags[(k + t as usize) % 10] = w.flags[k];
                }
            }
            D10::Mirror(a) => {
                for k in 0..10 {
                    flags[(a as usize + 19 - k) % 10] = w.flags[k].flipped();
                }
            }
        }
        WheelDiagram { flags }
    }

    /// Apply to a planar point (rotation by t·36°, mirror about a·18°).
    pub fn act_point(self, (x, y): (f64, f64)) -> (f64, f64) {
        match self {
            D10::Rot(t) => {
                let th = (t as f64) * 36f64.to_radians();
                (x * th.cos() - y * th.sin(), x * th.sin() + y * th.cos())
            }
            D10::Mirror(a) => {
                // reflection about the line at angle a·18°
                let th = 2.0 * (a as f64) * 18f64.to_radians();
                (x * th.cos() + y * th.sin(), x * th.sin() - y * th.cos())
            }
        }
    }
}

/// A subgroup of the order-20 dihedral group, stored as a 20-bit element
/// mask (bit t = rotation t, bit 10+a = mirror a).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PointGroup {
    pub mask: u32,
}

impl PointGroup {
    pub fn from_elements(elems: impl Iterator<Item = D10>) -> PointGroup {
        let mut mask = 0u32;
        for e in elems {
            mask |= match e {
                D10::Rot(t) => 1 << t,
                D10::Mirror(a) => 1 << (10 + a),
            };
        }
        PointGroup { mask }
    }

    pub fn elements(&self) -> impl Iterator<Item = D10> + '_ {
        D10::all().filter(|e| {
            let bit = match e {
                D10::Rot(t) => 1u32 << t,
                D10::Mirror(a) => 1u32 << (10 + a),
            };
            self.mask & bit != 0
        })
    }

    pub fn order(&self) -> u32 {
        self.mask.count_ones()
    }

    /// Order of the rotation subgroup.
    pub fn rotation_order(&self) -> u32 {
        (self.mask & 0x3ff).count_ones()
    }

    pub fn has_mirror(&self) -> bool {
        self.mask >> 10 != 0
    }

    pub fn intersect(&self, other: &PointGroup) -> PointGroup {
        PointGroup { mask: self.mask & other.mask }
    }

    /// Conventional label C_n / D_n. The degenerate full-symmetry case is
    /// reported verbatim as D10 rather than clamped to a family label.
    pub fn label(&self) -> String {
        let n = self.rotation_order();
        if self.has_mirror() {
            format!("D{n}")
        } else {
            format!("C{n}")
        }
    }
}

/// Stabilizer of a decorated wheel inside the dihedral group.
pub fn classify_wheel(w: &WheelDiagram) -> PointGroup {
    PointGroup::from_elements(D10::all().filter(|e| e.act(w) == *w))
}

/// Common subgroup of a schedule of wheels: intersection of stabilizers.
pub fn sequence_group(wheels: &[WheelDiagram]) -> PointGroup {
    let mut g = PointGroup { mask: (1 << 20) - 1 };
    for w in wheels {
        g = g.intersect(&classify_wheel(w));
    }
    g
}

/// Largest subgroup of the dihedral group whose action maps the cloud to
/// itself within the given Hausdorff tolerance.
pub fn empirical_symmetry(c: &PerpCloud, tolerance: f64) -> PointGroup {
    let elems: Vec<D10> = D10::all()
        .filter(|e| {
            let moved: Vec<(f64, f64)> = c.points.iter().map(|&p| e.act_point(p)).collect();
            hausdorff(&moved, &c.points) <= tolerance
        })
        .collect();
    // close under composition implicitly: symmetric-difference tolerance can
    // leave non-closed sets; keep the largest subgroup of the found set
    largest_subgroup(&elems)
}

/// Largest subgroup of the dihedral group all of whose elements pass the
/// predicate set. With rotations forming a cyclic group and mirrors tied to
/// the rotation subgroup, it suffices to take the rotations found (their
/// generated subgroup) and mirrors compatible with it.
fn largest_subgroup(found: &[D10]) -> PointGroup {
    let rot_mask: u16 = found
        .iter()
        .filter_map(|e| if let D10::Rot(t) = e { Some(*t) } else { None })
        .fold(0u16, |m, t| m | 1 << t);
    // subgroup of Z/10 generated by the found rotations that are all present:
    // try divisors d of 10 descending; the subgroup {0, d, 2d, …} must be
    // entirely found
    let mut step = 10u8;
    for d in [1u8, 2, 5, 10] {
        let ok = (0..10).step_by(d as usize).all(|t| rot_mask & (1 << t) != 0);
        if ok {
            step = d;
            break;
        }
    }
    let rotations: Vec<u8> = (0..10).step_by(step as usize).collect();
    // mirrors: need one mirror a0; the rest are a0 + rotations (mod 20 axes
    // collapse to mod 10 here). Pick mirrors consistent with the rotation
    // subgroup: a full dihedral subgroup needs exactly |rotations| mirrors
    // spaced by `step`.
    let mirror_mask: u16 = found
        .iter()
        .filter_map(|e| if let D10::Mirror(a) = e { Some(*a) } else { None })
        .fold(0u16, |m, a| m | 1 << a);
    let mut best_mirrors: Vec<u8> = Vec::new();
    for a0 in 0..step {
        let axes: Vec<u8> = (a0..10).step_by(step as usize).collect();
        if axes.iter().all(|&a| mirror_mask & (1 << a) != 0) {
            best_mirrors = axes;
            break;
        }
    }
    PointGroup::from_elements(
        rotations
            .into_iter()
            .map(D10::Rot)
            .chain(best_mirrors.into_iter().map(D10::Mirror)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;
    use std::str::FromStr;

    #[test]
    fn all_l_wheel_is_c10() {
        let g = classify_wheel(&WheelDiagram::ALL_L);
        assert_eq!(g.label(), "C10");
        assert_eq!(g.order(), 10);
    }

    #[test]
    fn alternating_wheel_is_d5() {
        let g = classify_wheel(&WheelDiagram::alternating());
        assert_eq!(g.label(), "D5");
        assert_eq!(g.order(), 10);
    }

    #[test]
    fn two_fold_wheel_is_c2() {
        // flag(k+5) = flag(k), otherwise asymmetric
        let w = WheelDiagram::from_str("LLRLRLLRLR").unwrap();
        assert_eq!(classify_wheel(&w).label(), "C2");
    }

    #[test]
    fn generic_wheel_is_c1() {
        let w = WheelDiagram::from_str("LLLLLLLLLR").unwrap();
        assert_eq!(classify_wheel(&w).label(), "C1");
    }

    #[test]
    fn sequence_of_all_l_and_alternating_is_c5() {
        let g = sequence_group(&[WheelDiagram::ALL_L, WheelDiagram::alternating()]);
        assert_eq!(g.label(), "C5");
    }

    #[test]
    fn sequence_is_idempotent() {
        for w in [WheelDiagram::ALL_L, WheelDiagram::alternating()] {
            assert_eq!(sequence_group(&[w, w]).mask, classify_wheel(&w).mask);
        }
    }

    #[test]
    fn census_of_all_wheels() {
        let mut census: BTreeMap<String, usize> = BTreeMap::new();
        for w in WheelDiagram::enumerate() {
            *census.entry(classify_wheel(&w).label()).or_insert(0) += 1;
        }
        // regression fixture derived combinatorially: totals partition 1024,
        // no single wheel has five-fold symmetry without mirrors
        let expect: BTreeMap<String, usize> = [
            ("C1".to_string(), 840),
            ("C2".to_string(), 30),
            ("C10".to_string(), 2),
            ("D1".to_string(), 150),
            ("D5".to_string(), 2),
        ]
        .into_iter()
        .collect();
        assert_eq!(census, expect);
        assert_eq!(census.values().sum::<usize>(), 1024);
        assert!(!census.contains_key("C5"));
    }

    #[test]
    fn intersection_order_divides_inputs() {
        let ws: Vec<WheelDiagram> = WheelDiagram::enumerate().step_by(97).collect();
        for pair in ws.windows(2) {
            let a = classify_wheel(&pair[0]);
            let b = classify_wheel(&pair[1]);
            let i = a.intersect(&b);
            assert_eq!(a.order() % i.order(), 0);
            assert_eq!(b.order() % i.order(), 0);
        }
    }

    #[test]
    fn single_point_cloud_reports_full_symmetry() {
        let c = PerpCloud { points: vec![(0.0, 0.0)], depth: 0 };
        let g = empirical_symmetry(&c, 1e-9);
        assert_eq!(g.label(), "D10");
        assert_eq!(g.order(), 20);
    }

    #[test]
    fn mirror_elements_compose_consistently() {
        // mirror ∘ mirror is a rotation: acting twice returns to a rotation
        // image of the original for every wheel probe
        let w = WheelDiagram::from_str("LRRLLLRLRR").unwrap();
        for a in 0..10 {
            let m = D10::Mirror(a);
            assert_eq!(m.act(&m.act(&w)), w);
        }
    }
}
