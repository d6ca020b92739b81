//! C ABI for spiralkit.
//!
//! Solved transitions live behind an opaque `SkTransition` handle that the
//! caller releases with `sk_transition_free`. Every fallible call returns an
//! `SkStatus`; on failure `sk_last_error_message` describes the problem for
//! the calling thread. Strings returned by the library are freed with
//! `sk_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spiralkit::scene;
use spiralkit::{build_spiral, Branch, Circle, Error, Point2, QuarticBezier, SpiralParams, UnitVec2, Vec2};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    /// The configuration admits no transition; the message names the condition.
    Infeasible = 3,
    Numerical = 4,
    InvalidScene = 5,
    IndexOutOfRange = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkBranch {
    Left = 0,
    Right = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SkVec2 {
    pub x: f64,
    pub y: f64,
}

/// `radius` is a magnitude; bending senses follow from the shape.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SkCircle {
    pub center: SkVec2,
    pub radius: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkSpiralParams {
    pub b0: SkVec2,
    /// Start tangent; normalized by the library.
    pub t0: SkVec2,
    pub theta: f64,
    pub r: f64,
    pub alpha0: f64,
    pub branch: SkBranch,
}

/// Junction data of a solved transition. `f0`/`f1` are zero with
/// `has_second == false` for point-to-circle transitions.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SkFrame {
    pub b0: SkVec2,
    pub t0: SkVec2,
    pub t1: SkVec2,
    pub f0: SkVec2,
    pub f1: SkVec2,
    pub has_second: bool,
    pub theta: f64,
    pub alpha0: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SkSpiral {
    pub points: [SkVec2; 5],
    /// Signed; the end curvature is its reciprocal.
    pub end_radius: f64,
    pub circle_center: SkVec2,
}

/// Opaque solved transition.
pub struct SkTransition {
    inner: spiralkit::TransitionResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: SkStatus, msg: impl Into<String>) -> SkStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> SkStatus) -> SkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(SkStatus::Panic, "internal panic"),
    }
}

fn status_of(e: &Error) -> SkStatus {
    match e {
        Error::Infeasible { .. } => SkStatus::Infeasible,
        Error::Parameter { .. } | Error::Domain(_) => SkStatus::InvalidArgument,
        Error::IndexOutOfRange { .. } => SkStatus::IndexOutOfRange,
        _ => SkStatus::Numerical,
    }
}

impl From<SkVec2> for Vec2 {
    fn from(v: SkVec2) -> Self {
        Vec2::new(v.x, v.y)
    }
}

impl From<Vec2> for SkVec2 {
    fn from(v: Vec2) -> Self {
        SkVec2 { x: v.x, y: v.y }
    }
}

impl From<UnitVec2> for SkVec2 {
    fn from(v: UnitVec2) -> Self {
        v.vec().into()
    }
}

impl From<SkBranch> for Branch {
    fn from(b: SkBranch) -> Self {
        match b {
            SkBranch::Left => Branch::Left,
            SkBranch::Right => Branch::Right,
        }
    }
}

fn to_circle(c: SkCircle) -> Circle {
    Circle::new(c.center.into(), c.radius)
}

fn finish(result: spiralkit::Result<spiralkit::TransitionResult>, out: *mut *mut SkTransition) -> SkStatus {
    if out.is_null() {
        return fail(SkStatus::NullArgument, "out is null");
    }
    // SAFETY: checked non-null; the caller provides a writable pointer slot.
    unsafe { *out = ptr::null_mut() };
    match result {
        Ok(inner) => {
            let handle = Box::into_raw(Box::new(SkTransition { inner }));
            unsafe { *out = handle };
            SkStatus::Ok
        }
        Err(e) => fail(status_of(&e), e.to_string()),
    }
}

/// Joins `point` to `circle` with one spiral.
///
/// # Safety
/// `out` must be null or point to writable storage for a handle pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_solve_point_circle(
    point: SkVec2,
    circle: SkCircle,
    alpha0: f64,
    branch: SkBranch,
    out: *mut *mut SkTransition,
) -> SkStatus {
    guard(|| {
        finish(
            spiralkit::solve_point_circle(point.into(), to_circle(circle), alpha0, branch.into()),
            out,
        )
    })
}

/// S-shape transition between two circles bending in opposite senses.
///
/// # Safety
/// `out` must be null or point to writable storage for a handle pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_solve_s_shape(
    c0: SkCircle,
    c1: SkCircle,
    alpha0: f64,
    branch: SkBranch,
    out: *mut *mut SkTransition,
) -> SkStatus {
    guard(|| {
        finish(
            spiralkit::solve_s_shape(to_circle(c0), to_circle(c1), alpha0, branch.into()),
            out,
        )
    })
}

/// C-shape transition between two circles bending in the same sense.
///
/// # Safety
/// `out` must be null or point to writable storage for a handle pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_solve_c_shape(
    c0: SkCircle,
    c1: SkCircle,
    alpha0: f64,
    branch: SkBranch,
    out: *mut *mut SkTransition,
) -> SkStatus {
    guard(|| {
        finish(
            spiralkit::solve_c_shape(to_circle(c0), to_circle(c1), alpha0, branch.into()),
            out,
        )
    })
}

/// # Safety
/// `t` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn sk_transition_frame(t: *const SkTransition, out: *mut SkFrame) -> SkStatus {
    guard(|| {
        let (Some(t), false) = (t.as_ref(), out.is_null()) else {
            return fail(SkStatus::NullArgument, "null handle or output");
        };
        let f = &t.inner.frame;
        *out = SkFrame {
            b0: f.b0.into(),
            t0: f.t0.into(),
            t1: f.t1.into(),
            f0: f.f0.map(Into::into).unwrap_or_default(),
            f1: f.f1.map(Into::into).unwrap_or_default(),
            has_second: t.inner.spiral1.is_some(),
            theta: f.theta,
            alpha0: f.alpha0,
        };
        SkStatus::Ok
    })
}

/// Number of spirals in the transition: 1 or 2. Returns 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sk_transition_spiral_count(t: *const SkTransition) -> usize {
    t.as_ref().map_or(0, |t| t.inner.spirals().count())
}

/// # Safety
/// `t` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn sk_transition_spiral(t: *const SkTransition, index: usize, out: *mut SkSpiral) -> SkStatus {
    guard(|| {
        let (Some(t), false) = (t.as_ref(), out.is_null()) else {
            return fail(SkStatus::NullArgument, "null handle or output");
        };
        let n = t.inner.spirals().count();
        let Some(curve) = t.inner.spirals().nth(index) else {
            return fail(
                SkStatus::IndexOutOfRange,
                format!("spiral index {index} out of range 0..{n}"),
            );
        };
        let c = t.inner.circles[index];
        *out = SkSpiral {
            points: curve.points.map(Into::into),
            end_radius: c.radius,
            circle_center: c.center.into(),
        };
        SkStatus::Ok
    })
}

/// # Safety
/// `t` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn sk_transition_free(t: *mut SkTransition) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Builds a single spiral's control points into `out[0..5]`.
///
/// # Safety
/// `out` must be null or point to 5 writable `SkVec2`.
#[no_mangle]
pub unsafe extern "C" fn sk_build_spiral(params: SkSpiralParams, out: *mut SkVec2) -> SkStatus {
    guard(|| {
        if out.is_null() {
            return fail(SkStatus::NullArgument, "out is null");
        }
        let t0 = match UnitVec2::new(params.t0.into()) {
            Ok(t) => t,
            Err(e) => return fail(SkStatus::InvalidArgument, e.to_string()),
        };
        let p = SpiralParams::new(params.b0.into(), t0, params.theta, params.r, params.alpha0)
            .with_branch(params.branch.into());
        match build_spiral(&p) {
            Ok(c) => {
                for (i, q) in c.points.iter().enumerate() {
                    *out.add(i) = (*q).into();
                }
                SkStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// Signed curvature of the quartic with control points `points[0..5]` at `t`.
///
/// # Safety
/// `points` must be null or point to 5 readable `SkVec2`; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn sk_curvature(points: *const SkVec2, t: f64, out: *mut f64) -> SkStatus {
    guard(|| {
        if points.is_null() || out.is_null() {
            return fail(SkStatus::NullArgument, "null points or output");
        }
        let pts: [Point2; 5] = std::array::from_fn(|i| (*points.add(i)).into());
        match QuarticBezier::new(pts).curvature(t) {
            Ok(k) => {
                *out = k;
                SkStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// Solves a scene document and returns the canonical result document as a
/// NUL-terminated UTF-8 string. Infeasible entries still return `Ok`.
///
/// # Safety
/// `scene_json` must be null or a NUL-terminated string; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn sk_solve_json(scene_json: *const c_char, out: *mut *mut c_char) -> SkStatus {
    guard(|| {
        if scene_json.is_null() || out.is_null() {
            return fail(SkStatus::NullArgument, "null scene or output");
        }
        *out = ptr::null_mut();
        let bytes = CStr::from_ptr(scene_json).to_bytes();
        let scene = match scene::parse_scene(bytes) {
            Ok(s) => s,
            Err(e) => return fail(SkStatus::InvalidScene, e.to_string()),
        };
        let doc = scene::write_result(&scene::solve_scene(&scene));
        match CString::new(doc) {
            Ok(s) => {
                *out = s.into_raw();
                SkStatus::Ok
            }
            Err(_) => fail(SkStatus::Numerical, "result contains NUL"),
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub extern "C" fn sk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
