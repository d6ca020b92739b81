//! Planar vectors, quartic Bézier curves and signed curvature.
//!
//! Angles are measured anticlockwise and the unit normal of a tangent is the
//! tangent rotated by +π/2, so a positive signed curvature means the curve
//! bends to the left.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A planar vector. Also used for points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

pub type Point2 = Vec2;

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Outer product `|a| |b| sin θ`, θ the anticlockwise angle from `self` to `other`.
    #[inline]
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    /// Rotate anticlockwise by `angle` radians.
    #[inline]
    pub fn rotate(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Rotate by +π/2.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    #[inline]
    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    pub fn lerp(self, other: Vec2, t: f64) -> Vec2 {
        self + (other - self) * t
    }

    /// Complex product, treating vectors as `x + iy`.
    #[inline]
    pub fn complex_mul(self, other: Vec2) -> Vec2 {
        Vec2::new(
            self.x * other.x - self.y * other.y,
            self.x * other.y + self.y * other.x,
        )
    }

    /// Complex quotient `self / other`.
    #[inline]
    pub fn complex_div(self, other: Vec2) -> Vec2 {
        let d = other.norm_squared();
        Vec2::new(
            (self.x * other.x + self.y * other.y) / d,
            (self.y * other.x - self.x * other.y) / d,
        )
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Vec2 { x, y }
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, rhs: Vec2) -> Vec2 {
        rhs * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x / rhs, self.y / rhs)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// A vector of unit length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(into = "[f64; 2]")]
pub struct UnitVec2(Vec2);

impl UnitVec2 {
    pub const X: UnitVec2 = UnitVec2(Vec2 { x: 1.0, y: 0.0 });

    /// Normalizes `v`; fails on the zero vector or non-finite input.
    pub fn new(v: Vec2) -> Result<Self> {
        let n = v.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::Domain(format!(
                "cannot normalize vector ({}, {})",
                v.x, v.y
            )));
        }
        Ok(UnitVec2(v / n))
    }

    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        UnitVec2(Vec2::new(c, s))
    }

    #[inline]
    pub fn vec(self) -> Vec2 {
        self.0
    }

    #[inline]
    pub fn x(self) -> f64 {
        self.0.x
    }

    #[inline]
    pub fn y(self) -> f64 {
        self.0.y
    }

    /// Left-hand unit normal (rotation by +π/2).
    #[inline]
    pub fn normal(self) -> UnitVec2 {
        UnitVec2(self.0.perp())
    }

    #[inline]
    pub fn rotate(self, angle: f64) -> UnitVec2 {
        UnitVec2(self.0.rotate(angle))
    }

    pub fn angle(self) -> f64 {
        self.0.y.atan2(self.0.x)
    }

    /// Anticlockwise angle from `self` to `other`, in (-π, π].
    pub fn angle_to(self, other: UnitVec2) -> f64 {
        self.0.cross(other.0).atan2(self.0.dot(other.0))
    }
}

impl Neg for UnitVec2 {
    type Output = UnitVec2;
    fn neg(self) -> UnitVec2 {
        UnitVec2(-self.0)
    }
}

impl From<UnitVec2> for [f64; 2] {
    fn from(u: UnitVec2) -> Self {
        u.0.into()
    }
}

impl<'de> Deserialize<'de> for UnitVec2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec2::deserialize(d)?;
        // Stored unit vectors are kept bit-for-bit; anything else is normalized.
        if (v.norm() - 1.0).abs() <= 1e-12 {
            return Ok(UnitVec2(v));
        }
        UnitVec2::new(v).map_err(serde::de::Error::custom)
    }
}

/// A similarity transform `p ↦ L p + t` where `L` is a scaled rotation or
/// scaled reflection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Similarity {
    m: [[f64; 2]; 2],
    t: Vec2,
}

impl Similarity {
    pub const IDENTITY: Similarity = Similarity {
        m: [[1.0, 0.0], [0.0, 1.0]],
        t: Vec2::ZERO,
    };

    pub fn translation(t: Vec2) -> Self {
        Similarity { t, ..Self::IDENTITY }
    }

    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Similarity {
            m: [[c, -s], [s, c]],
            t: Vec2::ZERO,
        }
    }

    pub fn scaling(s: f64) -> Self {
        Similarity {
            m: [[s, 0.0], [0.0, s]],
            t: Vec2::ZERO,
        }
    }

    /// Reflection across the line through the origin with direction angle `angle`.
    pub fn reflection(angle: f64) -> Self {
        let (s, c) = (2.0 * angle).sin_cos();
        Similarity {
            m: [[c, s], [s, -c]],
            t: Vec2::ZERO,
        }
    }

    /// Point reflection through `center` (rotation by π about it).
    pub fn point_reflection(center: Point2) -> Self {
        Similarity {
            m: [[-1.0, 0.0], [0.0, -1.0]],
            t: center * 2.0,
        }
    }

    /// Uniform scaling by `s` about `center`.
    pub fn scaling_about(center: Point2, s: f64) -> Self {
        Self::translation(-center)
            .then(&Self::scaling(s))
            .then(&Self::translation(center))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Similarity) -> Similarity {
        let a = &next.m;
        let b = &self.m;
        let m = [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ];
        Similarity {
            m,
            t: next.apply_vector(self.t) + next.t,
        }
    }

    pub fn apply_vector(&self, v: Vec2) -> Vec2 {
        Vec2::new(
            self.m[0][0] * v.x + self.m[0][1] * v.y,
            self.m[1][0] * v.x + self.m[1][1] * v.y,
        )
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        self.apply_vector(p) + self.t
    }

    pub fn scale_factor(&self) -> f64 {
        self.determinant().abs().sqrt()
    }

    pub fn determinant(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn reverses_orientation(&self) -> bool {
        self.determinant() < 0.0
    }
}

/// Degree-4 Bernstein basis polynomial `C(4,i) (1-t)^(4-i) t^i`.
pub fn bernstein(i: usize, t: f64) -> Result<f64> {
    const BINOM: [f64; 5] = [1.0, 4.0, 6.0, 4.0, 1.0];
    if i > 4 {
        return Err(Error::IndexOutOfRange { index: i, max: 4 });
    }
    let s = 1.0 - t;
    Ok(BINOM[i] * s.powi(4 - i as i32) * t.powi(i as i32))
}

fn de_casteljau<const N: usize>(pts: &[Vec2; N], t: f64) -> Vec2 {
    let mut work = *pts;
    for level in (1..N).rev() {
        for i in 0..level {
            work[i] = work[i].lerp(work[i + 1], t);
        }
    }
    work[0]
}

/// Position and the first three parametric derivatives at one parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub pos: Point2,
    pub d1: Vec2,
    pub d2: Vec2,
    pub d3: Vec2,
}

/// Control nets of the first three hodographs of a quartic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hodographs {
    pub first: [Vec2; 4],
    pub second: [Vec2; 3],
    pub third: [Vec2; 2],
}

/// A planar quartic Bézier curve on `t ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QuarticBezier {
    pub points: [Point2; 5],
}

impl QuarticBezier {
    pub fn new(points: [Point2; 5]) -> Self {
        QuarticBezier { points }
    }

    pub fn start(&self) -> Point2 {
        self.points[0]
    }

    pub fn end(&self) -> Point2 {
        self.points[4]
    }

    pub fn eval(&self, t: f64) -> Point2 {
        de_casteljau(&self.points, t)
    }

    pub fn hodographs(&self) -> Hodographs {
        let p = &self.points;
        let first: [Vec2; 4] = std::array::from_fn(|i| (p[i + 1] - p[i]) * 4.0);
        let second: [Vec2; 3] = std::array::from_fn(|i| (first[i + 1] - first[i]) * 3.0);
        let third: [Vec2; 2] = std::array::from_fn(|i| (second[i + 1] - second[i]) * 2.0);
        Hodographs {
            first,
            second,
            third,
        }
    }

    pub fn jet(&self, t: f64) -> Jet {
        let h = self.hodographs();
        Jet {
            pos: self.eval(t),
            d1: de_casteljau(&h.first, t),
            d2: de_casteljau(&h.second, t),
            d3: de_casteljau(&h.third, t),
        }
    }

    /// Largest distance between any two control points.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..5 {
            for j in i + 1..5 {
                d = d.max(self.points[i].distance(self.points[j]));
            }
        }
        d
    }

    fn checked_jet(&self, t: f64) -> Result<Jet> {
        let jet = self.jet(t);
        let speed = jet.d1.norm();
        if !(speed >= 1e-12 * self.diameter()) || speed == 0.0 {
            return Err(Error::Singular { t });
        }
        Ok(jet)
    }

    /// Signed curvature `R' × R'' / |R'|³`.
    pub fn curvature(&self, t: f64) -> Result<f64> {
        let j = self.checked_jet(t)?;
        Ok(j.d1.cross(j.d2) / j.d1.norm().powi(3))
    }

    /// `dκ/dt = v / |R'|⁵` with
    /// `v = (R'·R') (R' × R''') − 3 (R' × R'') (R'·R'')`.
    pub fn curvature_derivative(&self, t: f64) -> Result<f64> {
        let j = self.checked_jet(t)?;
        let speed2 = j.d1.norm_squared();
        let v = speed2 * j.d1.cross(j.d3) - 3.0 * j.d1.cross(j.d2) * j.d1.dot(j.d2);
        Ok(v / speed2.powi(2) / speed2.sqrt())
    }

    /// Unit tangent at `t`.
    pub fn tangent(&self, t: f64) -> Result<UnitVec2> {
        let j = self.checked_jet(t)?;
        UnitVec2::new(j.d1)
    }

    pub fn transformed(&self, xf: &Similarity) -> QuarticBezier {
        QuarticBezier {
            points: self.points.map(|p| xf.apply(p)),
        }
    }

    /// Largest control-point distance to `other`.
    pub fn max_point_distance(&self, other: &QuarticBezier) -> f64 {
        self.points
            .iter()
            .zip(other.points.iter())
            .map(|(a, b)| a.distance(*b))
            .fold(0.0, f64::max)
    }
}
