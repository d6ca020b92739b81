//! SVG 1.1 rendering of result documents.
//!
//! Curves are drawn as sampled polylines with an optional curvature comb and
//! control polygon. World coordinates are y-up; the viewport is y-down with a
//! uniform scale and a 5% margin on every side.

use std::fmt::Write as _;

use thiserror::Error;

use crate::geometry::{Point2, QuarticBezier, Vec2};
use crate::scene::ResultDocument;

pub const DEFAULT_SAMPLES: usize = 256;
/// Width of the rendered image in SVG user units.
pub const VIEWPORT_WIDTH: f64 = 800.0;
pub const MARGIN_FRACTION: f64 = 0.05;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SvgOptions {
    /// Polyline segments per curve.
    pub samples: usize,
    /// Whisker length per unit curvature. `None` picks a length so that the
    /// longest whisker is 15% of the drawing's extent.
    pub comb_scale: Option<f64>,
    pub show_control_polygon: bool,
    pub show_comb: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            samples: DEFAULT_SAMPLES,
            comb_scale: None,
            show_control_polygon: false,
            show_comb: true,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RenderError {
    #[error("nothing to render: the document has no feasible entries")]
    Empty,
    #[error("invalid render option: {0}")]
    Option(String),
}

/// One comb whisker: from `base` on the curve to `tip` along the normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tooth {
    pub t: f64,
    pub base: Point2,
    pub tip: Point2,
    pub curvature: f64,
}

impl Tooth {
    pub fn length(&self) -> f64 {
        self.base.distance(self.tip)
    }
}

/// `samples + 1` points at uniform parameter steps.
pub fn sample_curve(curve: &QuarticBezier, samples: usize) -> Vec<Point2> {
    let n = samples.max(1);
    (0..=n).map(|k| curve.eval(k as f64 / n as f64)).collect()
}

/// Comb whiskers at uniform parameter steps. Whiskers point away from the
/// centre of curvature and have length `scale · |κ|`. Singular samples are
/// skipped.
pub fn comb_teeth(curve: &QuarticBezier, samples: usize, scale: f64) -> Vec<Tooth> {
    let n = samples.max(1);
    (0..=n)
        .filter_map(|k| {
            let t = k as f64 / n as f64;
            let kappa = curve.curvature(t).ok()?;
            let normal = curve.tangent(t).ok()?.normal().vec();
            let base = curve.eval(t);
            Some(Tooth {
                t,
                base,
                tip: base - normal * (kappa * scale),
                curvature: kappa,
            })
        })
        .collect()
}

/// Maps world coordinates into the SVG viewport.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    pub min: Point2,
    pub max: Point2,
    pub scale: f64,
    pub margin: f64,
    pub width: f64,
    pub height: f64,
}

impl Viewport {
    /// Fits the bounding box of `points` into a `VIEWPORT_WIDTH`-wide image.
    pub fn fit(points: impl IntoIterator<Item = Point2>) -> Option<Viewport> {
        let mut min = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            if !p.is_finite() {
                continue;
            }
            min = Vec2::new(min.x.min(p.x), min.y.min(p.y));
            max = Vec2::new(max.x.max(p.x), max.y.max(p.y));
        }
        if !min.is_finite() {
            return None;
        }
        let extent = (max.x - min.x).max(max.y - min.y).max(1e-9);
        let margin = MARGIN_FRACTION * VIEWPORT_WIDTH;
        let scale = (VIEWPORT_WIDTH - 2.0 * margin) / extent;
        Some(Viewport {
            min,
            max,
            scale,
            margin,
            width: VIEWPORT_WIDTH,
            height: (max.y - min.y) * scale + 2.0 * margin,
        })
    }

    pub fn to_screen(&self, p: Point2) -> Point2 {
        Point2::new(
            self.margin + (p.x - self.min.x) * self.scale,
            self.margin + (self.max.y - p.y) * self.scale,
        )
    }

    pub fn to_world(&self, s: Point2) -> Point2 {
        Point2::new(
            self.min.x + (s.x - self.margin) / self.scale,
            self.max.y - (s.y - self.margin) / self.scale,
        )
    }
}

struct Group<'a> {
    alpha0: f64,
    curves: Vec<&'a QuarticBezier>,
    teeth: Vec<Vec<Tooth>>,
    polylines: Vec<Vec<Point2>>,
}

fn auto_comb_scale(curves: &[&QuarticBezier], samples: usize) -> f64 {
    let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = -lo;
    let mut kmax: f64 = 0.0;
    for c in curves {
        for p in c.points {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        for tooth in comb_teeth(c, samples, 0.0) {
            kmax = kmax.max(tooth.curvature.abs());
        }
    }
    let extent = (hi.x - lo.x).max(hi.y - lo.y);
    if kmax > 0.0 && extent > 0.0 {
        0.15 * extent / kmax
    } else {
        0.0
    }
}

fn prepare<'a>(doc: &'a ResultDocument, opts: &SvgOptions) -> Result<(Vec<Group<'a>>, Viewport), RenderError> {
    if opts.samples == 0 {
        return Err(RenderError::Option("samples must be positive".into()));
    }
    if let Some(s) = opts.comb_scale {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(RenderError::Option(format!("comb scale {s} must be finite and non-negative")));
        }
    }
    let feasible: Vec<_> = doc.entries.iter().filter(|e| e.feasible && !e.spirals.is_empty()).collect();
    if feasible.is_empty() {
        return Err(RenderError::Empty);
    }
    let all_curves: Vec<&QuarticBezier> = feasible
        .iter()
        .flat_map(|e| e.spirals.iter().map(|s| &s.control_points))
        .collect();
    let comb_scale = opts
        .comb_scale
        .unwrap_or_else(|| auto_comb_scale(&all_curves, opts.samples));

    let groups: Vec<Group> = feasible
        .iter()
        .map(|e| {
            let curves: Vec<_> = e.spirals.iter().map(|s| &s.control_points).collect();
            Group {
                alpha0: e.alpha0,
                teeth: if opts.show_comb {
                    curves.iter().map(|c| comb_teeth(c, opts.samples, comb_scale)).collect()
                } else {
                    Vec::new()
                },
                polylines: curves.iter().map(|c| sample_curve(c, opts.samples)).collect(),
                curves,
            }
        })
        .collect();

    let circles = &doc.scene.circles;
    let mut bounds: Vec<Point2> = Vec::new();
    for c in circles {
        bounds.push(c.center - Vec2::new(c.radius, c.radius));
        bounds.push(c.center + Vec2::new(c.radius, c.radius));
    }
    bounds.extend(doc.scene.point);
    for g in &groups {
        bounds.extend(g.polylines.iter().flatten().copied());
        bounds.extend(g.teeth.iter().flatten().map(|t| t.tip));
        if opts.show_control_polygon {
            bounds.extend(g.curves.iter().flat_map(|c| c.points));
        }
    }
    let vp = Viewport::fit(bounds).ok_or(RenderError::Empty)?;

    Ok((groups, vp))
}

/// The world-to-viewport mapping `render_svg` uses for `doc`.
pub fn viewport_for(doc: &ResultDocument, opts: &SvgOptions) -> Result<Viewport, RenderError> {
    prepare(doc, opts).map(|(_, vp)| vp)
}

/// Renders every feasible entry of `doc` together with the scene's circles.
pub fn render_svg(doc: &ResultDocument, opts: &SvgOptions) -> Result<Vec<u8>, RenderError> {
    let (groups, vp) = prepare(doc, opts)?;
    let circles = &doc.scene.circles;
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(vp.width),
        h = num(vp.height)
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r##"<g class="circles" fill="none" stroke="#555555" stroke-width="1">"##);
    for c in circles {
        let s = vp.to_screen(c.center);
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{}"/>"#,
            num(s.x),
            num(s.y),
            num(c.radius * vp.scale)
        );
    }
    if let Some(p) = doc.scene.point {
        let s = vp.to_screen(p);
        let _ = writeln!(out, r##"<circle class="point" cx="{}" cy="{}" r="3" fill="#555555"/>"##, num(s.x), num(s.y));
    }
    let _ = writeln!(out, "</g>");

    for (k, g) in groups.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let _ = writeln!(out, r#"<g class="entry" data-alpha0="{}">"#, g.alpha0);
        if opts.show_comb {
            let _ = writeln!(out, r#"<g class="comb" stroke="{color}" stroke-opacity="0.45" stroke-width="0.75">"#);
            for teeth in &g.teeth {
                for t in teeth {
                    let (a, b) = (vp.to_screen(t.base), vp.to_screen(t.tip));
                    let _ = writeln!(
                        out,
                        r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                        num(a.x),
                        num(a.y),
                        num(b.x),
                        num(b.y)
                    );
                }
                let tips: Vec<Point2> = teeth.iter().map(|t| t.tip).collect();
                polyline(&mut out, &vp, &tips, "comb-envelope", "none");
            }
            let _ = writeln!(out, "</g>");
        }
        if opts.show_control_polygon {
            for c in &g.curves {
                polyline(&mut out, &vp, &c.points, "control-polygon", "stroke-dasharray=\"4 3\"");
            }
        }
        let _ = writeln!(out, r#"<g class="curves" fill="none" stroke="{color}" stroke-width="2">"#);
        for p in &g.polylines {
            polyline(&mut out, &vp, p, "spiral", "none");
        }
        let _ = writeln!(out, "</g>");
        let anchor = vp.to_screen(g.curves[0].points[0]);
        let _ = writeln!(
            out,
            r#"<text class="label" x="{}" y="{}" font-family="sans-serif" font-size="12" fill="{color}">α0 = {}</text>"#,
            num(anchor.x + 6.0),
            num(anchor.y - 6.0 - 14.0 * k as f64),
            g.alpha0
        );
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, "</svg>");
    Ok(out.into_bytes())
}

fn polyline(out: &mut String, vp: &Viewport, pts: &[Point2], class: &str, extra: &str) {
    let coords: Vec<String> = pts
        .iter()
        .map(|p| {
            let s = vp.to_screen(*p);
            format!("{},{}", num(s.x), num(s.y))
        })
        .collect();
    let extra = if extra == "none" { String::new() } else { format!(" {extra}") };
    let _ = writeln!(
        out,
        r#"<polyline class="{class}" fill="none"{extra} points="{}"/>"#,
        coords.join(" ")
    );
}

/// Fixed three-decimal output keeps renders byte-stable.
fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{parse_scene, solve_scene};

    fn point_circle_scene() -> ResultDocument {
        let scene = parse_scene(
            br#"{"kind": "point_circle", "point": [0, 0],
                 "circles": [{"center": [13, 15.198684153570664], "radius": 5}], "alpha0": 0.32}"#,
        )
        .unwrap();
        solve_scene(&scene)
    }

    #[test]
    fn viewport_round_trips_and_flips_y() {
        let vp = Viewport::fit([Point2::new(-1.0, 2.0), Point2::new(3.0, 4.0)]).unwrap();
        let a = vp.to_screen(Point2::new(-1.0, 4.0));
        assert!((a.x - 40.0).abs() < 1e-12 && (a.y - 40.0).abs() < 1e-12);
        let b = vp.to_screen(Point2::new(-1.0, 2.0));
        assert!(b.y > a.y);
        let p = Point2::new(0.3, 2.7);
        assert!(vp.to_world(vp.to_screen(p)).distance(p) < 1e-12);
    }

    #[test]
    fn comb_lengths_grow_toward_the_contact() {
        let doc = point_circle_scene();
        let curve = &doc.entries[0].spirals[0].control_points;
        let teeth = comb_teeth(curve, 64, 1.0);
        assert_eq!(teeth.len(), 65);
        assert!(teeth[0].length() < 1e-9);
        for w in teeth.windows(2) {
            assert!(w[1].length() >= w[0].length() - 1e-12);
        }
        assert!((teeth[64].length() - 0.2).abs() < 1e-6);
    }

    #[test]
    fn render_is_deterministic_and_has_expected_parts() {
        let doc = point_circle_scene();
        let opts = SvgOptions {
            show_control_polygon: true,
            ..SvgOptions::default()
        };
        let a = render_svg(&doc, &opts).unwrap();
        assert_eq!(a, render_svg(&doc, &opts).unwrap());
        let text = String::from_utf8(a).unwrap();
        assert_eq!(text.matches("<circle cx").count(), 1);
        assert_eq!(text.matches(r#"class="spiral""#).count(), 1);
        assert_eq!(text.matches(r#"class="control-polygon""#).count(), 1);
        assert_eq!(text.matches("<line ").count(), DEFAULT_SAMPLES + 1);
    }

    #[test]
    fn infeasible_document_is_an_empty_render() {
        let mut doc = point_circle_scene();
        doc.entries[0].feasible = false;
        assert_eq!(render_svg(&doc, &SvgOptions::default()), Err(RenderError::Empty));
    }
}
