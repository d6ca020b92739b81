//! Bracketed scalar root finding.

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 200;

/// Finds a root of `f` in `[lo, hi]`, which must bracket a sign change.
///
/// Regula falsi with the Illinois modification, falling back to bisection
/// whenever the interpolated step fails to halve the bracket. Terminates
/// once the bracket is narrower than `tol` or `f` evaluates to exactly zero.
pub fn find_root<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::Bracketing { lo: a, hi: b });
    }
    // Which end was retained on the previous step: -1 for a, 1 for b.
    let mut side = 0i8;
    let mut width_two_steps_ago = f64::INFINITY;
    let mut width_prev = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let width = b - a;
        if width <= tol {
            return Ok(if fa.abs() < fb.abs() { a } else { b });
        }
        let mut x = (a * fb - b * fa) / (fb - fa);
        // Bisect when interpolation leaves the bracket or two steps failed to halve it.
        if !(x > a && x < b) || width > 0.5 * width_two_steps_ago {
            x = 0.5 * (a + b);
        }
        width_two_steps_ago = width_prev;
        width_prev = width;
        if x <= a || x >= b {
            // Bracket exhausted at floating-point resolution.
            return Ok(x.clamp(a, b));
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if !fx.is_finite() {
            return Err(Error::Convergence {
                iterations: MAX_ITERATIONS,
            });
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        } else {
            b = x;
            fb = fx;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        }
    }
    Err(Error::Convergence {
        iterations: MAX_ITERATIONS,
    })
}

/// Returns the first sub-interval of a geometric subdivision of `[lo, hi]`
/// (`lo > 0`) over which `f` changes sign.
pub fn first_bracket_geometric<F>(mut f: F, lo: f64, hi: f64, cells: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    debug_assert!(lo > 0.0 && hi > lo && cells > 0);
    let ratio = (hi / lo).ln();
    let node = |k: usize| {
        if k == cells {
            hi
        } else {
            lo * (ratio * k as f64 / cells as f64).exp()
        }
    };
    let mut x0 = lo;
    let mut f0 = f(x0);
    for k in 1..=cells {
        let x1 = node(k);
        let f1 = f(x1);
        if f0 == 0.0 || (f0.is_finite() && f1.is_finite() && f0.signum() != f1.signum()) {
            return Ok((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    Err(Error::Bracketing { lo, hi })
}

/// Uniform-grid variant of [`first_bracket_geometric`].
pub fn first_bracket_uniform<F>(mut f: F, lo: f64, hi: f64, cells: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let step = (hi - lo) / cells as f64;
    let mut x0 = lo;
    let mut f0 = f(x0);
    for k in 1..=cells {
        let x1 = if k == cells { hi } else { lo + step * k as f64 };
        let f1 = f(x1);
        if f0 == 0.0 || (f0.is_finite() && f1.is_finite() && f0.signum() != f1.signum()) {
            return Ok((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    Err(Error::Bracketing { lo, hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_root() {
        let x = find_root(|t| t - 1.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((x - 1.0).abs() < 1e-12);
    }

    #[test]
    fn transcendental_root() {
        let x = find_root(|t: f64| t.cos() - t, 0.0, 1.0, 1e-13).unwrap();
        assert!((x - 0.739_085_133_215_160_6).abs() < 1e-12);
    }

    #[test]
    fn steep_root_converges() {
        let x = find_root(|t: f64| (t - 0.3).powi(9) + 1e-30 * t, 0.0, 1.0, 1e-12).unwrap();
        assert!((x - 0.3).abs() < 1e-3);
        let x = find_root(|t: f64| (20.0 * (t - 0.7)).exp() - 1.0, 0.0, 1.0, 1e-12).unwrap();
        assert!((x - 0.7).abs() < 1e-12);
    }

    #[test]
    fn no_sign_change_is_an_error() {
        assert!(matches!(
            find_root(|t| t * t + 1.0, -1.0, 1.0, 1e-12),
            Err(Error::Bracketing { .. })
        ));
    }

    #[test]
    fn geometric_scan_finds_first_change() {
        let (a, b) = first_bracket_geometric(|t| (t - 0.01) * (t - 1.0), 1e-6, 1.5, 64).unwrap();
        assert!(a <= 0.01 && 0.01 <= b);
        assert!(first_bracket_geometric(|t| t + 1.0, 1e-6, 1.5, 64).is_err());
    }

    #[test]
    fn uniform_scan() {
        let (a, b) = first_bracket_uniform(|t| 0.33 - t, 0.0, 1.0, 100).unwrap();
        assert!(a <= 0.33 && 0.33 <= b && b - a < 0.011);
    }
}
