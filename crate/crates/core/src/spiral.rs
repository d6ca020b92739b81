//! Quartic Bézier spirals and their numerical certification.
//!
//! A spiral starts at `b0` with tangent `t0` and zero curvature and ends,
//! after turning through `theta`, with curvature `1/r`, zero curvature
//! derivative, and tangent `t1 = rotate(t0, ±theta)`. The control polygon is
//!
//! ```text
//! b1 = b0 + ρ0 a t0
//! b2 = b1 + (1 − α0)(1 − ρ0) a t0
//! b3 = b2 + α0 (1 − ρ0) a t0 + (1 − ρ1) b t1
//! b4 = b3 + ρ1 b t1
//! ```
//!
//! so that `b4 = b0 + a t0 + b t1` with `(a, b)` from [`endpoint_offsets`].
//! The free shape parameter `α0` must lie in `(0, 8/25]`; `ρ1 = 9/14` and `ρ0`
//! follow from it.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2, QuarticBezier, UnitVec2};

/// Upper bound of the shape parameter, 8/25.
pub const ALPHA0_MAX: f64 = 8.0 / 25.0;
/// Fixed leg ratio at the curved end.
pub const RHO1: f64 = 9.0 / 14.0;

/// Which way a spiral turns: `Left` turns anticlockwise with positive
/// curvature, `Right` is its mirror image.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    #[default]
    Left,
    Right,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Left => 1.0,
            Branch::Right => -1.0,
        }
    }

    pub fn flipped(self) -> Branch {
        match self {
            Branch::Left => Branch::Right,
            Branch::Right => Branch::Left,
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "left" => Ok(Branch::Left),
            "right" => Ok(Branch::Right),
            other => Err(format!("unknown branch '{other}', expected left or right")),
        }
    }
}

/// Design inputs of a single spiral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpiralParams {
    pub b0: Point2,
    pub t0: UnitVec2,
    /// Turning angle in `(0, π/2)`.
    pub theta: f64,
    /// End radius of curvature, `> 0`.
    pub r: f64,
    pub alpha0: f64,
    pub branch: Branch,
}

impl SpiralParams {
    pub fn new(b0: Point2, t0: UnitVec2, theta: f64, r: f64, alpha0: f64) -> Self {
        SpiralParams {
            b0,
            t0,
            theta,
            r,
            alpha0,
            branch: Branch::Left,
        }
    }

    pub fn with_branch(mut self, branch: Branch) -> Self {
        self.branch = branch;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha0(self.alpha0)?;
        check_theta(self.theta)?;
        check_radius(self.r)?;
        if !self.b0.is_finite() {
            return Err(Error::parameter("non-finite start point"));
        }
        Ok(())
    }

    /// End tangent `rotate(t0, ±theta)`.
    pub fn t1(&self) -> UnitVec2 {
        self.t0.rotate(self.branch.sign() * self.theta)
    }

    /// Signed end curvature.
    pub fn end_curvature(&self) -> f64 {
        self.branch.sign() / self.r
    }
}

pub(crate) fn check_alpha0(alpha0: f64) -> Result<()> {
    if alpha0 > 0.0 && alpha0 <= ALPHA0_MAX {
        Ok(())
    } else {
        Err(Error::parameter(format!(
            "alpha0 = {alpha0} outside (0, 8/25]"
        )))
    }
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::parameter(format!("theta = {theta} outside (0, pi/2)")))
    }
}

pub(crate) fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::parameter(format!("radius r = {r} must be positive")))
    }
}

/// Quantities that depend on `α0` alone.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivedParams {
    pub alpha0: f64,
    pub rho0: f64,
    pub rho1: f64,
    /// Tangent-leg factor `H`; the end offset along `t1` is `r H tan θ`.
    pub h: f64,
}

/// `ρ0 = 25 (1 − α0) / (48 − 25 α0)` and `H = 7 (1 − α0) / (27 α0)`; these
/// are the ρ1 = 9/14 specialisations of the general ratios.
pub fn derive_params(alpha0: f64) -> Result<DerivedParams> {
    check_alpha0(alpha0)?;
    Ok(derived_unchecked(alpha0))
}

fn derived_unchecked(alpha0: f64) -> DerivedParams {
    DerivedParams {
        alpha0,
        rho0: 25.0 * (1.0 - alpha0) / (48.0 - 25.0 * alpha0),
        rho1: RHO1,
        h: 7.0 * (1.0 - alpha0) / (27.0 * alpha0),
    }
}

/// Offsets per unit radius: `b4 − b0 = r (â t0 + b̂ t1)`.
pub(crate) fn unit_offsets(theta: f64, d: &DerivedParams) -> (f64, f64) {
    let (sin, cos) = theta.sin_cos();
    let tan = sin / cos;
    let a = -4.0 * d.rho1 * d.rho1 * d.h * d.h * tan / cos / (3.0 * d.alpha0 * (d.rho0 - 1.0));
    let b = d.h * tan;
    (a, b)
}

/// Coefficients `(a, b)` with `b4 = b0 + a t0 + b t1`.
pub fn endpoint_offsets(theta: f64, r: f64, alpha0: f64) -> Result<(f64, f64)> {
    check_theta(theta)?;
    check_radius(r)?;
    let d = derive_params(alpha0)?;
    let (a, b) = unit_offsets(theta, &d);
    Ok((r * a, r * b))
}

/// Builds the spiral control polygon and checks the endpoint properties.
pub fn build_spiral(params: &SpiralParams) -> Result<QuarticBezier> {
    params.validate()?;
    let curve = construct(params);
    verify_construction(&curve, params)?;
    Ok(curve)
}

fn construct(p: &SpiralParams) -> QuarticBezier {
    let d = derived_unchecked(p.alpha0);
    let (a, b) = unit_offsets(p.theta, &d);
    let (a, b) = (p.r * a, p.r * b);
    let t0 = p.t0.vec();
    let t1 = p.t1().vec();
    let b0 = p.b0;
    let b1 = b0 + t0 * (d.rho0 * a);
    let b2 = b1 + t0 * ((1.0 - p.alpha0) * (1.0 - d.rho0) * a);
    let b3 = b2 + t0 * (p.alpha0 * (1.0 - d.rho0) * a) + t1 * ((1.0 - d.rho1) * b);
    let b4 = b3 + t1 * (d.rho1 * b);
    QuarticBezier::new([b0, b1, b2, b3, b4])
}

const CONSTRUCTION_TOL: f64 = 1e-7;

fn verify_construction(curve: &QuarticBezier, p: &SpiralParams) -> Result<()> {
    let inconsistent = |what: &str, value: f64| {
        Err(Error::Inconsistent(format!(
            "{what} residual {value:e} exceeds {CONSTRUCTION_TOL:e} (alpha0 = {}, theta = {}, r = {})",
            p.alpha0, p.theta, p.r
        )))
    };
    let t_start = curve.tangent(0.0)?;
    let t_end = curve.tangent(1.0)?;
    let tangent_err = t_start.angle_to(p.t0).abs().max(t_end.angle_to(p.t1()).abs());
    if !(tangent_err <= CONSTRUCTION_TOL) {
        return inconsistent("end tangent", tangent_err);
    }
    let k0 = curve.curvature(0.0)? * p.r;
    if !(k0.abs() <= CONSTRUCTION_TOL) {
        return inconsistent("start curvature", k0);
    }
    let k1 = curve.curvature(1.0)? * p.r - p.branch.sign();
    if !(k1.abs() <= CONSTRUCTION_TOL) {
        return inconsistent("end curvature", k1);
    }
    // κ'(1) is measured against the largest |κ'| at the ends.
    let dk1 = curve.curvature_derivative(1.0)?;
    let dk0 = curve.curvature_derivative(0.0)?;
    let rel = dk1.abs() / dk0.abs().max(1.0 / p.r);
    if !(rel <= CONSTRUCTION_TOL) {
        return inconsistent("end curvature derivative", rel);
    }
    Ok(())
}

/// Default number of uniform certification samples.
pub const DEFAULT_SAMPLES: usize = 1001;
/// Step of the one-sided difference used for `κ''(0)`.
pub const DDKAPPA_STEP: f64 = 1e-5;

/// Outcome of [`certify_spiral`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpiralReport {
    pub kappa0: f64,
    pub kappa1: f64,
    /// Expected end curvature `±1/r`.
    pub kappa1_expected: f64,
    pub dkappa1: f64,
    pub ddkappa0: f64,
    /// `κ'` keeps one sign on the sampled open interval.
    pub monotone: bool,
    /// `κ` keeps one sign on the sampled half-open interval `(0, 1]`.
    pub curvature_one_sign: bool,
    pub min_abs_dkappa_interior: f64,
    pub samples: usize,
    /// Positivity conditions on the shape parameter that fail.
    pub violated_inequalities: Vec<String>,
    /// Whether every coefficient of the curvature-derivative numerator in
    /// Bernstein form is positive for this `(α0, θ)`.
    pub numerator_coefficients_positive: bool,
    /// A curvature evaluation hit a vanishing derivative.
    pub singular: bool,
}

/// Endpoint tolerances applied by [`SpiralReport::passes`]. All are relative
/// to the end curvature `1/r` so that they are invariant under scaling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifyTolerances {
    pub kappa0: f64,
    pub kappa1: f64,
    pub dkappa1: f64,
    pub ddkappa0: f64,
}

impl Default for CertifyTolerances {
    fn default() -> Self {
        CertifyTolerances {
            kappa0: 1e-9,
            kappa1: 1e-6,
            dkappa1: 1e-6,
            ddkappa0: 1e-5,
        }
    }
}

impl SpiralReport {
    /// Returns the first failing check, if any.
    pub fn first_failure(&self, tol: &CertifyTolerances) -> Option<String> {
        let inv_r = self.kappa1_expected.abs();
        // κ' and κ'' limits are absolute for r ≥ 1 and scale with 1/r below.
        let deriv_scale = inv_r.max(1.0);
        if self.singular {
            return Some("vanishing first derivative".into());
        }
        if !self.monotone {
            return Some("curvature derivative changes sign".into());
        }
        if !self.curvature_one_sign {
            return Some("curvature changes sign".into());
        }
        if !(self.kappa0.abs() <= tol.kappa0 * inv_r) {
            return Some(format!("kappa(0) = {:e}", self.kappa0));
        }
        let k1 = (self.kappa1 - self.kappa1_expected).abs();
        if !(k1 <= tol.kappa1 * inv_r) {
            return Some(format!(
                "kappa(1) = {:e}, expected {:e}",
                self.kappa1, self.kappa1_expected
            ));
        }
        if !(self.dkappa1.abs() <= tol.dkappa1 * deriv_scale) {
            return Some(format!("kappa'(1) = {:e}", self.dkappa1));
        }
        if !(self.ddkappa0.abs() <= tol.ddkappa0 * deriv_scale) {
            return Some(format!("kappa''(0) = {:e}", self.ddkappa0));
        }
        if let Some(name) = self.violated_inequalities.first() {
            return Some(format!("shape-parameter inequality {name} violated"));
        }
        None
    }

    pub fn passes(&self) -> bool {
        self.first_failure(&CertifyTolerances::default()).is_none()
    }
}

/// Sample parameters in the open interval `(0, 1)`: a uniform grid of
/// `samples` points (endpoints dropped), Chebyshev–Lobatto nodes, and a
/// geometric cluster towards both ends.
fn certification_grid(samples: usize) -> Vec<f64> {
    let mut ts = Vec::with_capacity(samples + 96);
    let n = samples.max(3);
    for k in 1..n - 1 {
        ts.push(k as f64 / (n - 1) as f64);
    }
    const CHEB: usize = 64;
    for k in 1..CHEB {
        ts.push(0.5 * (1.0 - (std::f64::consts::PI * k as f64 / CHEB as f64).cos()));
    }
    for j in 4..=7 {
        let e = 10f64.powi(-j);
        ts.push(e);
        ts.push(1.0 - e);
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

/// Samples `κ` and `κ'` along `curve` and evaluates the endpoint properties
/// and shape-parameter inequalities of a spiral built from `params`.
pub fn certify_spiral(curve: &QuarticBezier, params: &SpiralParams, samples: usize) -> SpiralReport {
    let grid = certification_grid(samples);
    let mut singular = false;
    let mut dks = Vec::with_capacity(grid.len());
    let mut ks = Vec::with_capacity(grid.len());
    for &t in &grid {
        match (curve.curvature(t), curve.curvature_derivative(t)) {
            (Ok(k), Ok(dk)) => {
                ks.push(k);
                dks.push(dk);
            }
            _ => singular = true,
        }
    }
    let eval = |f: &dyn Fn(f64) -> Result<f64>, t: f64, singular: &mut bool| match f(t) {
        Ok(v) => v,
        Err(_) => {
            *singular = true;
            f64::NAN
        }
    };
    let kappa0 = eval(&|t| curve.curvature(t), 0.0, &mut singular);
    let kappa1 = eval(&|t| curve.curvature(t), 1.0, &mut singular);
    if !singular {
        ks.push(kappa1);
    }
    let dkappa1 = eval(&|t| curve.curvature_derivative(t), 1.0, &mut singular);
    let dk = |t: f64, s: &mut bool| eval(&|t| curve.curvature_derivative(t), t, s);
    // Second-order one-sided difference.
    let h = DDKAPPA_STEP;
    let ddkappa0 =
        (-3.0 * dk(0.0, &mut singular) + 4.0 * dk(h, &mut singular) - dk(2.0 * h, &mut singular))
            / (2.0 * h);

    let dk_max = dks.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-9 * dk_max;
    let pos = dks.iter().any(|&v| v > floor);
    let neg = dks.iter().any(|&v| v < -floor);
    let monotone = !singular && dk_max > 0.0 && !(pos && neg);

    let k_max = ks.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let k_floor = 1e-12 * k_max;
    let k_pos = ks.iter().any(|&v| v > k_floor);
    let k_neg = ks.iter().any(|&v| v < -k_floor);
    let curvature_one_sign = !singular && !(k_pos && k_neg) && ks.iter().all(|v| v.abs() > 0.0);

    let min_abs = dks.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    let violated = positivity::violated_inequalities(params.alpha0);
    let numerator_coefficients_positive = params.alpha0 > 0.0
        && params.alpha0 < 1.0
        && positivity::numerator_coefficients(params.alpha0, params.theta)[..9]
            .iter()
            .all(|&p| p > 0.0);

    SpiralReport {
        kappa0,
        kappa1,
        kappa1_expected: params.end_curvature(),
        dkappa1,
        ddkappa0,
        monotone,
        curvature_one_sign,
        min_abs_dkappa_interior: min_abs,
        samples: grid.len(),
        violated_inequalities: violated,
        numerator_coefficients_positive,
        singular,
    }
}

/// Smallest positive `α0` at which one of the shape-parameter positivity
/// conditions fails. Every spiral with `α0` below this bound satisfies all of
/// them; the bound exceeds 8/25.
pub fn alpha_min_bound() -> f64 {
    positivity::INEQUALITIES
        .iter()
        .filter_map(|ineq| ineq.first_failure(1.0))
        .fold(f64::INFINITY, f64::min)
}

/// Polynomial system of the curvature-derivative numerator.
///
/// The numerator of `κ'(t)` is `Σ P_i (1−t)^(9−i) t^i` with `P_9 = 0`.
/// `P_0, P_1` are positive multiples of `(1 − α0)^5`; `P_2..P_8` are positive
/// multiples of the factors `H_i(α0, tan²θ)`, each of the form
/// `ψ_i(α0) + χ_i(α0) tan²θ`. Positivity of all `ψ_i` and `χ_i` certifies
/// positivity of every `P_i`, hence a single-signed `κ'` on `(0, 1)`.
pub mod positivity {
    use crate::roots;

    /// Evaluates a polynomial given by ascending coefficients.
    pub fn horner(coeffs: &[f64], x: f64) -> f64 {
        coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// One positivity requirement `sign · ψ(α0) > 0`.
    #[derive(Clone, Copy, Debug)]
    pub struct Inequality {
        pub name: &'static str,
        /// Ascending coefficients of ψ.
        pub coeffs: &'static [f64],
        /// `1.0` when ψ must be positive, `-1.0` when negative.
        pub sign: f64,
    }

    impl Inequality {
        pub fn value(&self, alpha0: f64) -> f64 {
            self.sign * horner(self.coeffs, alpha0)
        }

        pub fn holds(&self, alpha0: f64) -> bool {
            self.value(alpha0) > 0.0
        }

        /// First `α0 ∈ (0, upper]` at which the requirement stops holding.
        pub fn first_failure(&self, upper: f64) -> Option<f64> {
            let f = |a: f64| self.value(a);
            let (lo, hi) = roots::first_bracket_uniform(f, 0.0, upper, 4000).ok()?;
            roots::find_root(f, lo, hi, 1e-14).ok()
        }
    }

    pub const INEQUALITIES: [Inequality; 13] = [
        Inequality { name: "H2.const", coeffs: &[3836.0, -8822.0, 2111.0], sign: 1.0 },
        Inequality { name: "H2.tan2", coeffs: &[-1918.0, 2493.0], sign: -1.0 },
        Inequality { name: "H3.const", coeffs: &[7674.0, -18823.0, -351.0], sign: 1.0 },
        Inequality { name: "H3.tan2", coeffs: &[-7674.0, 11149.0], sign: -1.0 },
        Inequality {
            name: "H4.const",
            coeffs: &[38916.0, -154084.0, 161956.0, -74824.0, -43839.0],
            sign: 1.0,
        },
        Inequality { name: "H4.tan2", coeffs: &[9729.0, -19063.0, 6459.0], sign: 1.0 },
        Inequality {
            name: "H5.const",
            coeffs: &[6348.0, -11776.0, -3760.0, -31304.0, -40583.0],
            sign: 1.0,
        },
        Inequality { name: "H5.tan2", coeffs: &[69.0, 10.0, -150.0], sign: 1.0 },
        Inequality { name: "H6.const", coeffs: &[276.0, -373.0, -900.0, -1338.0], sign: 1.0 },
        Inequality { name: "H6.tan2", coeffs: &[1380.0, -1373.0], sign: 1.0 },
        Inequality { name: "H7.const", coeffs: &[230.0, -614.0, -514.0, 783.0], sign: 1.0 },
        Inequality { name: "H7.tan2", coeffs: &[13.0, -15.0], sign: 1.0 },
        Inequality { name: "H8.const", coeffs: &[46.0, -176.0, 107.0], sign: 1.0 },
    ];

    pub fn violated_inequalities(alpha0: f64) -> Vec<String> {
        INEQUALITIES
            .iter()
            .filter(|i| !i.holds(alpha0))
            .map(|i| i.name.to_string())
            .collect()
    }

    /// `H_i(α0, υ)` for `i ∈ 2..=8`, `υ = tan²θ`.
    pub fn h_factor(i: usize, a: f64, upsilon: f64) -> f64 {
        let m = a - 1.0;
        let p = |c: &[f64]| horner(c, a);
        match i {
            2 => p(&[3836.0, -8822.0, 2111.0]) + 2.0 * m * p(&[-1918.0, 2493.0]) * upsilon,
            3 => p(&[7674.0, -18823.0, -351.0]) + m * p(&[-7674.0, 11149.0]) * upsilon,
            4 => {
                p(&[38916.0, -154084.0, 161956.0, -74824.0, -43839.0])
                    + 4.0 * m * m * p(&[9729.0, -19063.0, 6459.0]) * upsilon
            }
            5 => {
                p(&[6348.0, -11776.0, -3760.0, -31304.0, -40583.0])
                    + 92.0 * m * m * p(&[69.0, 10.0, -150.0]) * upsilon
            }
            6 => 5.0 * p(&[276.0, -373.0, -900.0, -1338.0]) + m * m * p(&[1380.0, -1373.0]) * upsilon,
            7 => 5.0 * p(&[230.0, -614.0, -514.0, 783.0]) + 46.0 * m * m * p(&[13.0, -15.0]) * upsilon,
            8 => 5.0 * p(&[46.0, -176.0, 107.0]) + 46.0 * m * m * upsilon,
            _ => panic!("H factor index {i} outside 2..=8"),
        }
    }

    /// Numerator coefficients `P_0..P_9`.
    pub fn numerator_coefficients(a: f64, theta: f64) -> [f64; 10] {
        let m = a - 1.0;
        let tan = theta.tan();
        let upsilon = tan * tan;
        let sec2 = 1.0 + upsilon;
        let h = |i| h_factor(i, a, upsilon);
        [
            -312_500.0 * sec2 * m.powi(5),
            -2_437_500.0 * sec2 * m.powi(5),
            -3000.0 * m.powi(3) * h(2),
            -4140.0 * m.powi(3) * h(3),
            -1035.0 * m * h(4),
            -3105.0 * m * h(5),
            -28566.0 * a * m * h(6),
            42849.0 * a * a * h(7),
            12854.0 * a.powi(3) * h(8),
            0.0,
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec2;

    fn params(theta: f64, r: f64, alpha0: f64) -> SpiralParams {
        SpiralParams::new(Vec2::new(1.0, -2.0), UnitVec2::from_angle(0.4), theta, r, alpha0)
    }

    #[test]
    fn derived_values_at_upper_bound() {
        let d = derive_params(0.32).unwrap();
        assert!((d.rho0 - 0.425).abs() < 1e-15);
        assert!((d.h - 7.0 * 0.68 / (27.0 * 0.32)).abs() < 1e-15);
        assert!((d.h - 0.550_925_925_925_926).abs() < 1e-12);
        assert_eq!(d.rho1, 9.0 / 14.0);
    }

    #[test]
    fn alpha0_domain() {
        assert!(matches!(derive_params(0.33), Err(Error::Parameter { .. })));
        assert!(derive_params(0.0).is_err());
        assert!(derive_params(-0.1).is_err());
        assert!(derive_params(f64::NAN).is_err());
        assert!(derive_params(ALPHA0_MAX).is_ok());
    }

    #[test]
    fn general_ratio_forms_agree() {
        // Unsimplified ratios with ρ1 left symbolic.
        for k in 1..=64 {
            let a = ALPHA0_MAX * k as f64 / 64.0;
            let r1 = RHO1;
            let rho0 = 15.0 * (1.0 - a - r1 + a * r1) / (27.0 - 15.0 * a - 26.0 * r1 + 15.0 * a * r1);
            let h = (2.0 * r1 + 3.0 * a * (-3.0 + 4.0 * r1)) / (12.0 * a * r1 * r1);
            let d = derive_params(a).unwrap();
            assert!((d.rho0 - rho0).abs() <= 1e-14 * rho0.abs().max(1.0));
            assert!((d.h - h).abs() <= 1e-14 * h.abs().max(1.0));
        }
    }

    #[test]
    fn offsets_reference_values() {
        let (a, b) = endpoint_offsets(1.11088, 5.0, 0.32).unwrap();
        assert!((a - 20.669).abs() < 2e-3, "a = {a}");
        assert!((b - 5.5610).abs() < 1e-3, "b = {b}");
        let (a, b) = endpoint_offsets(0.867967, 2.0, 0.32).unwrap();
        assert!((a - 3.3197).abs() < 1e-3, "a = {a}");
        assert!((b - 1.3006).abs() < 1e-3, "b = {b}");
        let (a, b) = endpoint_offsets(1e-12, 3.0, 0.1).unwrap();
        assert!(a.abs() < 1e-9 && b.abs() < 1e-9);
    }

    #[test]
    fn offsets_domain() {
        assert!(endpoint_offsets(0.0, 1.0, 0.2).is_err());
        assert!(endpoint_offsets(FRAC_PI_2, 1.0, 0.2).is_err());
        assert!(endpoint_offsets(0.5, -1.0, 0.2).is_err());
        assert!(endpoint_offsets(0.5, 1.0, 0.5).is_err());
    }

    #[test]
    fn control_polygon_structure() {
        let p = params(0.9, 3.0, 0.2);
        let c = build_spiral(&p).unwrap();
        let [b0, b1, b2, b3, b4] = c.points;
        let t0 = p.t0.vec();
        assert!((b1 - b0).cross(t0).abs() < 1e-12);
        assert!((b2 - b1).cross(t0).abs() < 1e-12);
        assert!((b4 - b3).cross(p.t1().vec()).abs() < 1e-12);
        let (a, b) = endpoint_offsets(p.theta, p.r, p.alpha0).unwrap();
        let expect = t0 * a + p.t1().vec() * b;
        assert!((b4 - b0).distance(expect) <= 1e-12 * (b4 - b0).norm());
    }

    #[test]
    fn spiral_endpoint_properties() {
        let p = params(1.0, 5.0, 0.32);
        let c = build_spiral(&p).unwrap();
        assert!(c.curvature(0.0).unwrap().abs() < 1e-12);
        assert!((c.curvature(1.0).unwrap() - 0.2).abs() < 1e-9);
        assert!(c.curvature_derivative(1.0).unwrap().abs() < 1e-9);
        assert!(c.tangent(0.0).unwrap().angle_to(p.t0).abs() < 1e-12);
        assert!(c.tangent(1.0).unwrap().angle_to(p.t1()).abs() < 1e-12);
    }

    #[test]
    fn mirrored_branch_has_negative_curvature() {
        let p = params(0.7, 2.0, 0.25).with_branch(Branch::Right);
        let c = build_spiral(&p).unwrap();
        assert!((c.curvature(1.0).unwrap() + 0.5).abs() < 1e-9);
        let rep = certify_spiral(&c, &p, DEFAULT_SAMPLES);
        assert!(rep.passes(), "{:?}", rep.first_failure(&CertifyTolerances::default()));
    }

    #[test]
    fn tiny_turning_angle_collapses() {
        let c = build_spiral(&params(1e-9, 1.0, 0.2));
        // Degenerate but must not produce a large curve.
        match c {
            Ok(c) => assert!(c.end().distance(c.start()) < 1e-6),
            Err(e) => assert!(matches!(e, Error::Singular { .. } | Error::Inconsistent(_))),
        }
        let p = params(1e-9, 1.0, 0.2);
        let raw = construct(&p);
        assert!(raw.end().distance(raw.start()) < 1e-7);
    }

    #[test]
    fn theta_domain() {
        assert!(build_spiral(&params(0.0, 1.0, 0.2)).is_err());
        assert!(build_spiral(&params(1.6, 1.0, 0.2)).is_err());
        assert!(build_spiral(&params(0.5, 0.0, 0.2)).is_err());
    }

    #[test]
    fn certify_accepts_spiral() {
        let p = params(1.2, 5.0, 0.32);
        let c = build_spiral(&p).unwrap();
        let rep = certify_spiral(&c, &p, DEFAULT_SAMPLES);
        assert!(rep.monotone);
        assert!(rep.curvature_one_sign);
        assert!(rep.kappa0.abs() <= 1e-9 * 0.2);
        assert!((rep.kappa1 - 0.2).abs() <= 1e-6 * 0.2);
        assert!(rep.violated_inequalities.is_empty());
        assert!(rep.numerator_coefficients_positive);
        assert!(rep.passes());
        assert!(rep.samples > DEFAULT_SAMPLES);
    }

    #[test]
    fn certify_rejects_curve_with_curvature_extremum() {
        let c = QuarticBezier::new([
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(2.0, -1.0),
            Vec2::new(3.0, 1.0),
            Vec2::new(4.0, 0.0),
        ]);
        let p = params(0.5, 1.0, 0.2);
        let rep = certify_spiral(&c, &p, 201);
        assert!(!rep.monotone);
        assert!(!rep.passes());
    }

    #[test]
    fn h8_constant_part_at_bound() {
        let v = 5.0 * positivity::horner(&[46.0, -176.0, 107.0], 0.32);
        assert!((v - 3.184).abs() < 1e-12);
        assert!((positivity::h_factor(8, 0.32, 0.0) - 3.184).abs() < 1e-12);
    }

    #[test]
    fn inequalities_hold_well_inside_domain() {
        for ineq in positivity::INEQUALITIES.iter() {
            assert!(ineq.holds(0.1), "{}", ineq.name);
            assert!(ineq.holds(0.32), "{}", ineq.name);
        }
        assert_eq!(positivity::violated_inequalities(0.327), vec!["H8.const".to_string()]);
        assert_eq!(positivity::violated_inequalities(0.33).len(), 2);
    }

    #[test]
    fn alpha_min_exceeds_upper_bound() {
        let a = alpha_min_bound();
        assert!(a > ALPHA0_MAX);
        assert!((0.32..=0.34).contains(&a));
        // Smaller root of 107 a² − 176 a + 46.
        let closed = (176.0 - (176.0f64 * 176.0 - 4.0 * 107.0 * 46.0).sqrt()) / (2.0 * 107.0);
        assert!((a - closed).abs() < 1e-12);
    }

    #[test]
    fn numerator_has_vanishing_last_coefficient() {
        let p = positivity::numerator_coefficients(0.2, 0.8);
        assert_eq!(p[9], 0.0);
        assert!(p[..9].iter().all(|&v| v > 0.0));
    }
}
