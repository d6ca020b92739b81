//! G² transition curves built from quartic spirals: point to circle, and
//! S- and C-shaped pairs between two disjoint circles.
//!
//! Every construction reduces to a scalar feasibility function `q(θ)` whose
//! root in `(0, π/2)` is the common turning angle. The frame is then
//! recovered in closed form and the spirals are built and certified.
//!
//! Writing `â, b̂` for the per-unit-radius end offsets of a spiral, the centre
//! of its end circle sits at `r (f2 t0 + f1 n0)` from the start point, with
//! `f1 = cos θ + H sin θ tan θ` and `f2 = â + (H − 1) sin θ`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Condition, Error, Result};
use crate::geometry::{Point2, QuarticBezier, UnitVec2, Vec2};
use crate::roots;
use crate::spiral::{
    self, build_spiral, certify_spiral, check_alpha0, check_theta, derive_params, unit_offsets,
    Branch, SpiralParams, SpiralReport, DEFAULT_SAMPLES,
};

/// Lower end of the turning-angle scan.
pub const THETA_MIN: f64 = 1e-6;
/// Upper end of the turning-angle scan.
pub const THETA_MAX: f64 = FRAC_PI_2 - 1e-6;
/// Number of geometric cells in the bracketing scan.
pub const SCAN_CELLS: usize = 64;

/// A circle with signed radius; the sign is the bending direction at contact.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point2, radius: f64) -> Self {
        Circle { center, radius }
    }

    fn magnitude(&self) -> Result<f64> {
        let r = self.radius.abs();
        if r > 0.0 && r.is_finite() && self.center.is_finite() {
            Ok(r)
        } else {
            Err(Error::Domain(format!(
                "circle at ({}, {}) has invalid radius {}",
                self.center.x, self.center.y, self.radius
            )))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeKind {
    PointCircle,
    SShape,
    CShape,
}

/// Junction point and tangents of a solved transition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransitionFrame {
    /// Start of both spirals.
    pub b0: Point2,
    pub t0: UnitVec2,
    pub t1: UnitVec2,
    /// Start tangent of the second spiral, `-t0`.
    pub f0: Option<UnitVec2>,
    /// End tangent of the second spiral.
    pub f1: Option<UnitVec2>,
    pub theta: f64,
    pub alpha0: f64,
}

/// Contact residuals at one circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactResidual {
    /// `| |R(1) − C| − |r| |`.
    pub position: f64,
    /// `|tangent · unit(R(1) − C)|`, zero for tangential contact.
    pub tangent: f64,
    /// `|κ(1) − 1/r| · |r|`.
    pub curvature: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `max(|C1 − C0|, |r0|, |r1|)`, or `max(ℓ, r)` for a point.
    pub scale: f64,
    pub junction_gap: f64,
    /// Dot product of the two start tangents; `-1` for a proper junction.
    pub junction_tangent_dot: Option<f64>,
    /// Largest `|κ(0)|` over the spirals.
    pub junction_curvature: f64,
    pub contacts: Vec<ContactResidual>,
}

/// Limits checked on every solution before it is returned.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualTolerances {
    /// Relative to scene scale.
    pub position: f64,
    pub tangent: f64,
    /// Relative to the contact curvature.
    pub curvature: f64,
}

impl Default for ResidualTolerances {
    fn default() -> Self {
        ResidualTolerances {
            position: 1e-9,
            tangent: 1e-9,
            curvature: 1e-6,
        }
    }
}

impl Residuals {
    pub fn first_failure(&self, tol: &ResidualTolerances) -> Option<String> {
        if !(self.junction_gap <= tol.position * self.scale) {
            return Some(format!("junction gap {:e}", self.junction_gap));
        }
        if let Some(dot) = self.junction_tangent_dot {
            if !((dot + 1.0).abs() <= tol.tangent) {
                return Some(format!("junction tangent dot {dot}"));
            }
        }
        for (i, c) in self.contacts.iter().enumerate() {
            if !(c.position <= tol.position * self.scale) {
                return Some(format!("contact {i} position residual {:e}", c.position));
            }
            if !(c.tangent <= tol.tangent) {
                return Some(format!("contact {i} tangent residual {:e}", c.tangent));
            }
            if !(c.curvature <= tol.curvature) {
                return Some(format!("contact {i} curvature residual {:e}", c.curvature));
            }
        }
        None
    }
}

/// A solved transition: one spiral for point–circle, two otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionResult {
    pub kind: ShapeKind,
    pub frame: TransitionFrame,
    pub spiral0: QuarticBezier,
    pub spiral1: Option<QuarticBezier>,
    /// Signed end radii matching the spirals.
    pub end_radii: Vec<f64>,
    pub circles: Vec<Circle>,
    pub residuals: Residuals,
    pub reports: Vec<SpiralReport>,
}

impl TransitionResult {
    pub fn spirals(&self) -> impl Iterator<Item = &QuarticBezier> {
        std::iter::once(&self.spiral0).chain(self.spiral1.as_ref())
    }
}

fn check_q_domain(theta: f64, alpha0: f64) -> Result<()> {
    check_theta(theta)?;
    check_alpha0(alpha0)
}

/// Point-to-circle feasibility `ℓ² − (a² + b² + r² + 2a (b cos θ − r sin θ))`.
pub fn q_point_circle(theta: f64, alpha0: f64, ell: f64, r: f64) -> Result<f64> {
    check_q_domain(theta, alpha0)?;
    if !(ell >= 0.0 && r > 0.0) {
        return Err(Error::Domain(format!("need ell >= 0 and r > 0, got {ell}, {r}")));
    }
    let d = derive_params(alpha0)?;
    Ok(q_point_circle_raw(theta, &d, ell, r))
}

fn q_point_circle_raw(theta: f64, d: &spiral::DerivedParams, ell: f64, r: f64) -> f64 {
    let (a, b) = unit_offsets(theta, d);
    let (a, b) = (a * r, b * r);
    let (sin, cos) = theta.sin_cos();
    ell * ell - (a * a + b * b + r * r + 2.0 * a * (b * cos - r * sin))
}

fn f1_f2_raw(theta: f64, d: &spiral::DerivedParams) -> (f64, f64) {
    let (sin, cos) = theta.sin_cos();
    let tan = sin / cos;
    let f1 = cos + d.h * sin * tan;
    let f2 = (3.0 * d.alpha0 * (d.rho0 - 1.0) * (d.h - 1.0) * sin
        - 4.0 * d.rho1 * d.rho1 * d.h * d.h * tan / cos)
        / (3.0 * d.alpha0 * (d.rho0 - 1.0));
    (f1, f2)
}

/// Normal and tangential components (per unit radius) of the centre offset.
pub fn f1_f2(theta: f64, alpha0: f64) -> Result<(f64, f64)> {
    check_q_domain(theta, alpha0)?;
    let d = derive_params(alpha0)?;
    Ok(f1_f2_raw(theta, &d))
}

/// S-shape feasibility `(r0 + r1)² (f1² + f2²) − n²`.
pub fn q_s_shape(theta: f64, alpha0: f64, r0: f64, r1: f64, n: f64) -> Result<f64> {
    check_q_domain(theta, alpha0)?;
    if !(r0 > 0.0 && r1 > 0.0 && n > 0.0) {
        return Err(Error::Domain(format!(
            "S-shape needs r0, r1, n > 0, got {r0}, {r1}, {n}"
        )));
    }
    let (f1, f2) = f1_f2(theta, alpha0)?;
    Ok((r0 + r1).powi(2) * (f1 * f1 + f2 * f2) - n * n)
}

/// C-shape feasibility `f2² (r0 − r1)² + f1² (r0 + r1)² − n²` with `r1 < 0`.
pub fn q_c_shape(theta: f64, alpha0: f64, r0: f64, r1: f64, n: f64) -> Result<f64> {
    check_q_domain(theta, alpha0)?;
    if !(r0 > 0.0 && r1 < 0.0 && n > 0.0) {
        return Err(Error::Domain(format!(
            "C-shape needs r0 > 0, r1 < 0, n > 0, got {r0}, {r1}, {n}"
        )));
    }
    let (f1, f2) = f1_f2(theta, alpha0)?;
    Ok(f2 * f2 * (r0 - r1).powi(2) + f1 * f1 * (r0 + r1).powi(2) - n * n)
}

/// Locates the first sign change of `q` on the turning-angle scan and refines it.
pub fn solve_theta<F>(mut q: F) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (lo, hi) = roots::first_bracket_geometric(&mut q, THETA_MIN, THETA_MAX, SCAN_CELLS)?;
    roots::find_root(q, lo, hi, roots::DEFAULT_TOL)
}

fn unit(v: Vec2) -> Result<UnitVec2> {
    UnitVec2::new(v).map_err(|_| Error::Inconsistent("degenerate frame direction".into()))
}

fn contact_residual(curve: &QuarticBezier, circle: &Circle, end_radius: f64) -> Result<ContactResidual> {
    let p = curve.end();
    let radial = p - circle.center;
    let tangent = curve.tangent(1.0)?;
    let kappa = curve.curvature(1.0)?;
    Ok(ContactResidual {
        position: (radial.norm() - end_radius.abs()).abs(),
        tangent: tangent.vec().dot(radial / radial.norm()).abs(),
        curvature: (kappa - 1.0 / end_radius).abs() * end_radius.abs(),
    })
}

struct Assembly {
    kind: ShapeKind,
    frame: TransitionFrame,
    spirals: Vec<(SpiralParams, Circle)>,
    scale: f64,
}

fn assemble(a: Assembly) -> Result<TransitionResult> {
    let mut curves = Vec::new();
    let mut reports = Vec::new();
    let mut contacts = Vec::new();
    let mut end_radii = Vec::new();
    let mut circles = Vec::new();
    for (params, circle) in &a.spirals {
        let curve = build_spiral(params)?;
        let report = certify_spiral(&curve, params, DEFAULT_SAMPLES);
        if let Some(why) = report.first_failure(&Default::default()) {
            return Err(Error::Inconsistent(format!("spiral failed certification: {why}")));
        }
        let end_radius = params.branch.sign() * params.r;
        contacts.push(contact_residual(&curve, circle, end_radius)?);
        curves.push(curve);
        reports.push(report);
        end_radii.push(end_radius);
        circles.push(Circle::new(circle.center, end_radius));
    }
    let junction_curvature = curves
        .iter()
        .map(|c| c.curvature(0.0).map(f64::abs))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let (junction_gap, junction_tangent_dot) = if curves.len() == 2 {
        (
            curves[0].start().distance(curves[1].start()),
            Some(curves[0].tangent(0.0)?.vec().dot(curves[1].tangent(0.0)?.vec())),
        )
    } else {
        (0.0, None)
    };
    let residuals = Residuals {
        scale: a.scale,
        junction_gap,
        junction_tangent_dot,
        junction_curvature,
        contacts,
    };
    if let Some(why) = residuals.first_failure(&ResidualTolerances::default()) {
        return Err(Error::Inconsistent(format!("G2 residual check failed: {why}")));
    }
    let mut it = curves.into_iter();
    let spiral0 = it.next().expect("at least one spiral");
    Ok(TransitionResult {
        kind: a.kind,
        frame: a.frame,
        spiral0,
        spiral1: it.next(),
        end_radii,
        circles,
        residuals,
        reports,
    })
}

/// Joins `b0` (zero curvature) to `circle` with one spiral.
pub fn solve_point_circle(b0: Point2, circle: Circle, alpha0: f64, branch: Branch) -> Result<TransitionResult> {
    let d = derive_params(alpha0)?;
    let r = circle.magnitude()?;
    if !b0.is_finite() {
        return Err(Error::Domain("non-finite start point".into()));
    }
    let g0 = circle.center - b0;
    let ell = g0.norm();
    let scale = ell.max(r);
    if !(ell > r) || ell < 1e-9 * scale {
        return Err(Error::Infeasible {
            condition: Condition::PointCircle,
            detail: format!("distance {ell} to centre does not exceed radius {r}"),
        });
    }
    let theta = solve_theta(|th| q_point_circle_raw(th, &d, ell, r))?;
    let (a, b) = unit_offsets(theta, &d);
    let (a, b) = (a * r, b * r);
    let (sin, cos) = theta.sin_cos();
    let sigma = branch.sign();
    // g0 = along t0 · t0 + across · n0, in complex form g0 = t0 · (along + i across).
    let along = a + b * cos - r * sin;
    let across = sigma * (b * sin + r * cos);
    let t0 = unit(g0.complex_div(Vec2::new(along, across)))?;
    let params = SpiralParams::new(b0, t0, theta, r, alpha0).with_branch(branch);
    assemble(Assembly {
        kind: ShapeKind::PointCircle,
        frame: TransitionFrame {
            b0,
            t0,
            t1: params.t1(),
            f0: None,
            f1: None,
            theta,
            alpha0,
        },
        spirals: vec![(params, circle)],
        scale,
    })
}

/// S-shaped pair between two circles bending in opposite senses.
///
/// The junction is `B0 = (r0 C1 + r1 C0) / (r0 + r1)`; the second spiral is
/// built from `(B0, −t0, θ, r1)` on the same branch.
pub fn solve_s_shape(c0: Circle, c1: Circle, alpha0: f64, branch: Branch) -> Result<TransitionResult> {
    let d = derive_params(alpha0)?;
    let (r0, r1) = (c0.magnitude()?, c1.magnitude()?);
    let diff = c1.center - c0.center;
    let n = diff.norm();
    if !(r0 + r1 < n) {
        return Err(Error::Infeasible {
            condition: Condition::SShape,
            detail: format!("r0 + r1 = {} is not below centre distance {n}", r0 + r1),
        });
    }
    let b0 = s_shape_junction(c0.center, r0, c1.center, r1);
    let theta = solve_theta(|th| {
        let (f1, f2) = f1_f2_raw(th, &d);
        (r0 + r1).powi(2) * (f1 * f1 + f2 * f2) - n * n
    })?;
    let (f1, f2) = f1_f2_raw(theta, &d);
    let sigma = branch.sign();
    // C1 − C0 = −(r0 + r1) · t0 · (f2 + i σ f1)
    let w = diff * (-1.0 / (r0 + r1));
    let t0 = unit(w.complex_div(Vec2::new(f2, sigma * f1)))?;
    let p0 = SpiralParams::new(b0, t0, theta, r0, alpha0).with_branch(branch);
    let p1 = SpiralParams::new(b0, -t0, theta, r1, alpha0).with_branch(branch);
    let t1 = p0.t1();
    assemble(Assembly {
        kind: ShapeKind::SShape,
        frame: TransitionFrame {
            b0,
            t0,
            t1,
            f0: Some(-t0),
            f1: Some(p1.t1()),
            theta,
            alpha0,
        },
        spirals: vec![(p0, c0), (p1, c1)],
        scale: n.max(r0).max(r1),
    })
}

/// Junction of the S-shape, dividing `C0 C1` in the ratio `r0 : r1`.
pub fn s_shape_junction(c0: Point2, r0: f64, c1: Point2, r1: f64) -> Point2 {
    (c1 * r0 + c0 * r1) / (r0 + r1)
}

/// C-shaped pair between two disjoint circles; the second spiral is the
/// mirror-handed spiral from `(B0, −t0, θ, |r1|)`.
///
/// With `r1` taken negative, the centres sit at
/// `C0 = B0 + r0 t0 (f2 + i σ f1)` and `C1 = B0 + |r1| t0 (−f2 + i σ f1)`,
/// which fixes `t0` from `C1 − C0` and then `B0`.
pub fn solve_c_shape(c0: Circle, c1: Circle, alpha0: f64, branch: Branch) -> Result<TransitionResult> {
    let d = derive_params(alpha0)?;
    let (r0, r1m) = (c0.magnitude()?, c1.magnitude()?);
    let r1 = -r1m;
    let diff = c1.center - c0.center;
    let n = diff.norm();
    if !((r1 - r0).abs() < n) {
        return Err(Error::Infeasible {
            condition: Condition::CShape,
            detail: format!("|r1 - r0| = {} is not below centre distance {n}", (r1 - r0).abs()),
        });
    }
    let theta = solve_theta(|th| {
        let (f1, f2) = f1_f2_raw(th, &d);
        f2 * f2 * (r0 - r1).powi(2) + f1 * f1 * (r0 + r1).powi(2) - n * n
    })?;
    let (f1, f2) = f1_f2_raw(theta, &d);
    let sigma = branch.sign();
    let denom = Vec2::new(-(r0 + r1m) * f2, sigma * (r1m - r0) * f1);
    let t0 = unit(diff.complex_div(denom))?;
    let b0 = c0.center - t0.vec().complex_mul(Vec2::new(r0 * f2, sigma * r0 * f1));
    let p0 = SpiralParams::new(b0, t0, theta, r0, alpha0).with_branch(branch);
    let p1 = SpiralParams::new(b0, -t0, theta, r1m, alpha0).with_branch(branch.flipped());
    assemble(Assembly {
        kind: ShapeKind::CShape,
        frame: TransitionFrame {
            b0,
            t0,
            t1: p0.t1(),
            f0: Some(-t0),
            f1: Some(p1.t1()),
            theta,
            alpha0,
        },
        spirals: vec![(p0, c0), (p1, c1)],
        scale: n.max(r0).max(r1m),
    })
}

/// A transition problem independent of the shape parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Problem {
    PointCircle { point: Point2, circle: Circle, branch: Branch },
    SShape { circles: [Circle; 2], branch: Branch },
    CShape { circles: [Circle; 2], branch: Branch },
}

impl Problem {
    pub fn kind(&self) -> ShapeKind {
        match self {
            Problem::PointCircle { .. } => ShapeKind::PointCircle,
            Problem::SShape { .. } => ShapeKind::SShape,
            Problem::CShape { .. } => ShapeKind::CShape,
        }
    }

    pub fn solve(&self, alpha0: f64) -> Result<TransitionResult> {
        match *self {
            Problem::PointCircle { point, circle, branch } => {
                solve_point_circle(point, circle, alpha0, branch)
            }
            Problem::SShape { circles: [c0, c1], branch } => solve_s_shape(c0, c1, alpha0, branch),
            Problem::CShape { circles: [c0, c1], branch } => solve_c_shape(c0, c1, alpha0, branch),
        }
    }
}

/// One member of a family sweep.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub alpha0: f64,
    pub outcome: Result<TransitionResult>,
}

/// Solves `problem` for every shape parameter in `alpha0_grid`; failures are
/// collected per grid point.
pub fn sweep_family(problem: &Problem, alpha0_grid: &[f64]) -> Vec<FamilyMember> {
    alpha0_grid
        .iter()
        .map(|&alpha0| FamilyMember {
            alpha0,
            outcome: problem.solve(alpha0),
        })
        .collect()
}
