//! Quartic Bézier spirals and G² transition curves.
//!
//! [`spiral`] builds and certifies single spirals, [`transition`] joins a
//! point to a circle or two circles with them, [`scene`] and [`svg`] handle
//! the JSON and SVG formats, and [`cli`]/[`service`] expose everything as a
//! command-line tool and a local HTTP endpoint.

// `!(x <= tol)` is used on purpose so that NaN fails tolerance checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod geometry;
pub mod roots;
pub mod scene;
pub mod service;
pub mod spiral;
pub mod svg;
pub mod transition;

pub use error::{Condition, Error, Result};
pub use geometry::{Point2, QuarticBezier, Similarity, UnitVec2, Vec2};
pub use spiral::{
    alpha_min_bound, build_spiral, certify_spiral, derive_params, endpoint_offsets, Branch,
    DerivedParams, SpiralParams, SpiralReport, ALPHA0_MAX,
};
pub use transition::{
    solve_c_shape, solve_point_circle, solve_s_shape, sweep_family, Circle, Problem, ShapeKind,
    TransitionFrame, TransitionResult,
};
