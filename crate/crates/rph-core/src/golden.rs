//! Exact arithmetic in the golden integer ring Z[τ] and in the planar
//! coordinate algebra Z[τ] + Z[τ]·S with S = 2·sin 72°.
//!
//! Every structural predicate in the crate reduces to integer sign
//! computations on these types; no geometric decision is ever made on
//! floating point alone.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// τ = (1 + √5)/2, the golden mean.
pub const TAU_F64: f64 = 1.618033988749894848204586834365638118;

/// S = 2·sin 72°; satisfies S² = τ + 2.
pub const BIG_S_F64: f64 = 1.902113032590307144232878666758764287;

fn overflow(context: &'static str) -> Error {
    Error::Overflow { context }
}

/// An element a + b·τ of the golden integer ring, in canonical form
/// (products reduced via τ² = τ + 1).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GoldenInt {
    pub a: i64,
    pub b: i64,
}

impl GoldenInt {
    pub const ZERO: GoldenInt = GoldenInt { a: 0, b: 0 };
    pub const ONE: GoldenInt = GoldenInt { a: 1, b: 0 };
    /// τ itself.
    pub const TAU: GoldenInt = GoldenInt { a: 0, b: 1 };
    /// The inflation ratio σ = τ² = 1 + τ.
    pub const SIGMA: GoldenInt = GoldenInt { a: 1, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        GoldenInt { a, b }
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        Ok(GoldenInt {
            a: self.a.checked_add(rhs.a).ok_or_else(|| overflow("golden add"))?,
            b: self.b.checked_add(rhs.b).ok_or_else(|| overflow("golden add"))?,
        })
    }

    /// Exact product, reduced to canonical form via τ² = τ + 1.
    pub fn checked_mul(self, rhs: Self) -> Result<Self> {
        let e = overflow("golden mul");
        let bb = self.b.checked_mul(rhs.b).ok_or(e)?;
        let e = overflow("golden mul");
        let a = self
            .a
            .checked_mul(rhs.a)
            .and_then(|aa| aa.checked_add(bb))
            .ok_or(e)?;
        let e = overflow("golden mul");
        let b = self
            .a
            .checked_mul(rhs.b)
            .and_then(|ab| self.b.checked_mul(rhs.a).and_then(|ba| ab.checked_add(ba)))
            .and_then(|cross| cross.checked_add(bb))
            .ok_or(e)?;
        Ok(GoldenInt { a, b })
    }

    /// Galois conjugate: τ ↦ 1 − τ. A ring automorphism; in particular
    /// conj(σ) = 1/τ² is the contraction ratio of the conjugate map.
    pub fn conj(self) -> Self {
        GoldenInt {
            a: self.a + self.b,
            b: -self.b,
        }
    }

    /// Exact sign of a + b·τ using integer arithmetic only.
    pub fn signum(self) -> Ordering {
        let a = self.a as i128;
        let b = self.b as i128;
        if b == 0 {
            return a.cmp(&0);
        }
        if a == 0 {
            return b.cmp(&0);
        }
        // a + bτ = ((2a + b) + b√5)/2; compare (2a+b)² with 5b².
        let t = 2 * a + b;
        if t.signum() == b.signum() {
            return b.cmp(&0);
        }
        // signs differ: value has the sign of whichever magnitude wins
        match (t * t).cmp(&(5 * b * b)) {
            Ordering::Greater => t.cmp(&0),
            Ordering::Less => b.cmp(&0),
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn to_f64(self) -> f64 {
        self.a as f64 + self.b as f64 * TAU_F64
    }
}

impl Add for GoldenInt {
    type Output = GoldenInt;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).expect("golden add overflow")
    }
}

impl Sub for GoldenInt {
    type Output = GoldenInt;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for GoldenInt {
    type Output = GoldenInt;
    fn neg(self) -> Self {
        GoldenInt { a: -self.a, b: -self.b }
    }
}

impl Mul for GoldenInt {
    type Output = GoldenInt;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).expect("golden mul overflow")
    }
}

impl fmt::Debug for GoldenInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}τ", self.a, self.b)
    }
}

/// An element u + v·S of the real quadratic extension Z[τ][S], S = 2·sin 72°.
///
/// Closed under multiplication because S² = τ + 2. Doubled planar coordinates
/// of every decagonal module point live here.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GoldenScalar {
    pub u: GoldenInt,
    pub v: GoldenInt,
}

impl GoldenScalar {
    pub const ZERO: GoldenScalar = GoldenScalar {
        u: GoldenInt::ZERO,
        v: GoldenInt::ZERO,
    };

    pub const fn new(u: GoldenInt, v: GoldenInt) -> Self {
        GoldenScalar { u, v }
    }

    pub const fn rational(u: GoldenInt) -> Self {
        GoldenScalar { u, v: GoldenInt::ZERO }
    }

    pub fn to_f64(self) -> f64 {
        self.u.to_f64() + self.v.to_f64() * BIG_S_F64
    }

    pub fn is_zero(self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    /// Exact sign. S > 0, so when u and v disagree in sign the outcome is
    /// decided by comparing u² against v²·S² = v²·(τ + 2).
    pub fn signum(self) -> Ordering {
        let su = self.u.signum();
        let sv = self.v.signum();
        match (su, sv) {
            (s, Ordering::Equal) => s,
            (Ordering::Equal, s) => s,
            (a, b) if a == b => a,
            _ => {
                let u2 = self.u * self.u;
                let v2s2 = self.v * self.v * GoldenInt::new(2, 1);
                match (u2 - v2s2).signum() {
                    Ordering::Greater => su,
                    Ordering::Less => sv,
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }
}

impl Add for GoldenScalar {
    type Output = GoldenScalar;
    fn add(self, rhs: Self) -> Self {
        GoldenScalar { u: self.u + rhs.u, v: self.v + rhs.v }
    }
}

impl Sub for GoldenScalar {
    type Output = GoldenScalar;
    fn sub(self, rhs: Self) -> Self {
        GoldenScalar { u: self.u - rhs.u, v: self.v - rhs.v }
    }
}

impl Neg for GoldenScalar {
    type Output = GoldenScalar;
    fn neg(self) -> Self {
        GoldenScalar { u: -self.u, v: -self.v }
    }
}

impl Mul for GoldenScalar {
    type Output = GoldenScalar;
    fn mul(self, rhs: Self) -> Self {
        // (u + vS)(u' + v'S) = uu' + vv'(τ+2) + (uv' + vu')S
        let s2 = GoldenInt::new(2, 1);
        GoldenScalar {
            u: self.u * rhs.u + self.v * rhs.v * s2,
            v: self.u * rhs.v + self.v * rhs.u,
        }
    }
}

impl Mul<GoldenInt> for GoldenScalar {
    type Output = GoldenScalar;
    fn mul(self, rhs: GoldenInt) -> Self {
        GoldenScalar { u: self.u * rhs, v: self.v * rhs }
    }
}

impl fmt::Debug for GoldenScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})+({:?})S", self.u, self.v)
    }
}

/// An exact planar point whose stored components are *twice* the coordinate
/// value: the point is (x/2, y/2). Doubling keeps every decagonal module
/// coordinate inside the integer algebra (e.g. cos 72° = (τ−1)/2).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GoldenCoord {
    pub x: GoldenScalar,
    pub y: GoldenScalar,
}

impl GoldenCoord {
    pub const ZERO: GoldenCoord = GoldenCoord {
        x: GoldenScalar::ZERO,
        y: GoldenScalar::ZERO,
    };

    pub const fn from_doubled(x: GoldenScalar, y: GoldenScalar) -> Self {
        GoldenCoord { x, y }
    }

    pub fn to_f64(self) -> (f64, f64) {
        (self.x.to_f64() * 0.5, self.y.to_f64() * 0.5)
    }

    /// 4·|p|² as an exact scalar (the doubling squared).
    pub fn norm2_x4(self) -> GoldenScalar {
        self.x * self.x + self.y * self.y
    }

    /// Sign of the 2D cross product self × rhs (scale-invariant).
    pub fn cross_sign(self, rhs: GoldenCoord) -> Ordering {
        (self.x * rhs.y - self.y * rhs.x).signum()
    }

    /// Sign of the dot product self · rhs (scale-invariant).
    pub fn dot_sign(self, rhs: GoldenCoord) -> Ordering {
        (self.x * rhs.x + self.y * rhs.y).signum()
    }

    pub fn scale(self, k: GoldenInt) -> Self {
        GoldenCoord { x: self.x * k, y: self.y * k }
    }
}

impl Add for GoldenCoord {
    type Output = GoldenCoord;
    fn add(self, rhs: Self) -> Self {
        GoldenCoord { x: self.x + rhs.x, y: self.y + rhs.y }
    }
}

impl Sub for GoldenCoord {
    type Output = GoldenCoord;
    fn sub(self, rhs: Self) -> Self {
        GoldenCoord { x: self.x - rhs.x, y: self.y - rhs.y }
    }
}

impl Neg for GoldenCoord {
    type Output = GoldenCoord;
    fn neg(self) -> Self {
        GoldenCoord { x: -self.x, y: -self.y }
    }
}

impl fmt::Debug for GoldenCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y) = self.to_f64();
        write!(f, "({x:.6}, {y:.6})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn g(a: i64, b: i64) -> GoldenInt {
        GoldenInt::new(a, b)
    }

    #[test]
    fn tau_squared_is_tau_plus_one() {
        assert_eq!(GoldenInt::TAU * GoldenInt::TAU, g(1, 1));
    }

    #[test]
    fn polynomial_reduction() {
        // (2+3τ)(1−τ) = −1 − 2τ; float oracle agrees
        let p = g(2, 3) * g(1, -1);
        assert_eq!(p, g(-1, -2));
        let oracle = (2.0 + 3.0 * TAU_F64) * (1.0 - TAU_F64);
        assert!((p.to_f64() - oracle).abs() < 1e-12);
    }

    #[test]
    fn multiplicative_identity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let x = g(rng.gen_range(-1000..1000), rng.gen_range(-1000..1000));
            assert_eq!(x * GoldenInt::ONE, x);
        }
    }

    #[test]
    fn conjugation() {
        // conj(τ) = 1 − τ = −1/τ
        assert_eq!(GoldenInt::TAU.conj(), g(1, -1));
        assert!((GoldenInt::TAU.conj().to_f64() + 1.0 / TAU_F64).abs() < 1e-12);
        // conj(σ) = 2 − τ = 1/τ²
        assert_eq!(GoldenInt::SIGMA.conj(), g(2, -1));
        assert!((GoldenInt::SIGMA.conj().to_f64() - 1.0 / (TAU_F64 * TAU_F64)).abs() < 1e-12);
        // rationals are fixed
        assert_eq!(g(5, 0).conj(), g(5, 0));
    }

    #[test]
    fn conj_is_ring_homomorphism() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10_000 {
            let x = g(rng.gen_range(-10_000..10_000), rng.gen_range(-10_000..10_000));
            let y = g(rng.gen_range(-10_000..10_000), rng.gen_range(-10_000..10_000));
            assert_eq!((x * y).conj(), x.conj() * y.conj());
            assert_eq!((x + y).conj(), x.conj() + y.conj());
        }
    }

    #[test]
    fn mul_matches_float_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let x = g(rng.gen_range(-1_000_000..1_000_000), rng.gen_range(-1_000_000..1_000_000));
            let y = g(rng.gen_range(-1_000_000..1_000_000), rng.gen_range(-1_000_000..1_000_000));
            let exact = (x * y).to_f64();
            let float = x.to_f64() * y.to_f64();
            let scale = float.abs().max(1.0);
            assert!((exact - float).abs() / scale < 1e-9, "{x:?} * {y:?}");
        }
    }

    #[test]
    fn ring_laws_hold() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let x = g(rng.gen_range(-1000..1000), rng.gen_range(-1000..1000));
            let y = g(rng.gen_range(-1000..1000), rng.gen_range(-1000..1000));
            let z = g(rng.gen_range(-1000..1000), rng.gen_range(-1000..1000));
            assert_eq!((x * y) * z, x * (y * z));
            assert_eq!(x * (y + z), x * y + x * z);
            assert_eq!(x + y, y + x);
            assert_eq!(x * y, y * x);
        }
    }

    #[test]
    fn exact_sign() {
        assert_eq!(g(-1, 1).signum(), Ordering::Greater); // τ > 1
        assert_eq!(g(8, -5).signum(), Ordering::Less); // 5τ ≈ 8.09 > 8
        assert_eq!(g(0, 0).signum(), Ordering::Equal);
        // agreement with float sign away from zero
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let x = g(rng.gen_range(-1_000_000..1_000_000), rng.gen_range(-1_000_000..1_000_000));
            let f = x.to_f64();
            if f.abs() > 1e-6 {
                assert_eq!(x.signum(), f.partial_cmp(&0.0).unwrap(), "{x:?}");
            }
        }
    }

    #[test]
    fn mul_overflow_is_reported() {
        let big = g(i64::MAX - 1, i64::MAX - 1);
        assert!(big.checked_mul(big).is_err());
        assert!(big.checked_add(big).is_err());
    }

    #[test]
    fn scalar_ring_and_sign() {
        // S² = τ + 2
        let s = GoldenScalar::new(GoldenInt::ZERO, GoldenInt::ONE);
        assert_eq!(s * s, GoldenScalar::rational(g(2, 1)));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        for _ in 0..5000 {
            let x = GoldenScalar::new(
                g(rng.gen_range(-500..500), rng.gen_range(-500..500)),
                g(rng.gen_range(-500..500), rng.gen_range(-500..500)),
            );
            let y = GoldenScalar::new(
                g(rng.gen_range(-500..500), rng.gen_range(-500..500)),
                g(rng.gen_range(-500..500), rng.gen_range(-500..500)),
            );
            let exact = (x * y).to_f64();
            let float = x.to_f64() * y.to_f64();
            assert!((exact - float).abs() / float.abs().max(1.0) < 1e-9);
            let f = x.to_f64();
            if f.abs() > 1e-6 {
                assert_eq!(x.signum(), f.partial_cmp(&0.0).unwrap(), "{x:?}");
            }
        }
    }
}
