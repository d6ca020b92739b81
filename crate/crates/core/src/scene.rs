//! Scene and result JSON documents.
//!
//! Scenes (`spiralkit-scene/1`) describe a transition problem; results
//! (`spiralkit-result/1`) carry one entry per shape parameter. Results are
//! written canonically: object keys sorted, every float printed with 17
//! significant digits, so identical solutions give identical bytes.

use std::fmt;
use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Condition, Error};
use crate::geometry::{Point2, QuarticBezier, UnitVec2};
use crate::spiral::{Branch, ALPHA0_MAX};
use crate::transition::{self, Circle, Problem, Residuals, ShapeKind, TransitionResult};

pub const SCENE_SCHEMA: &str = "spiralkit-scene/1";
pub const RESULT_SCHEMA: &str = "spiralkit-result/1";

/// Largest number of shape parameters a single scene may request.
pub const MAX_GRID: usize = 10_000;

fn scene_schema() -> String {
    SCENE_SCHEMA.to_string()
}

fn result_schema() -> String {
    RESULT_SCHEMA.to_string()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleSpec {
    pub center: Point2,
    /// Radius magnitude; bending senses follow from the scene kind.
    pub radius: f64,
}

/// Shape parameters to solve for.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Alpha0Spec {
    Single(f64),
    List(Vec<f64>),
    Range { from: f64, to: f64, count: usize },
}

impl Alpha0Spec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Alpha0Spec::Single(a) => vec![*a],
            Alpha0Spec::List(v) => v.clone(),
            Alpha0Spec::Range { from, to, count } => match count {
                0 => Vec::new(),
                1 => vec![*from],
                n => (0..*n)
                    .map(|k| from + (to - from) * k as f64 / (*n - 1) as f64)
                    .collect(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    #[serde(default = "scene_schema")]
    pub schema: String,
    pub kind: ShapeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Point2>,
    pub circles: Vec<CircleSpec>,
    pub alpha0: Alpha0Spec,
    #[serde(default)]
    pub branch: Branch,
}

impl Scene {
    /// The solver problem this scene describes. Assumes a validated scene.
    pub fn problem(&self) -> Problem {
        let c = |i: usize| Circle::new(self.circles[i].center, self.circles[i].radius);
        match self.kind {
            ShapeKind::PointCircle => Problem::PointCircle {
                point: self.point.unwrap_or_default(),
                circle: c(0),
                branch: self.branch,
            },
            ShapeKind::SShape => Problem::SShape {
                circles: [c(0), c(1)],
                branch: self.branch,
            },
            ShapeKind::CShape => Problem::CShape {
                circles: [c(0), c(1)],
                branch: self.branch,
            },
        }
    }

    pub fn validate(&self) -> Result<(), SceneError> {
        if self.schema != SCENE_SCHEMA {
            return Err(SceneError::new(
                SceneErrorCode::UnsupportedSchema,
                "schema",
                format!("expected \"{SCENE_SCHEMA}\", got \"{}\"", self.schema),
            ));
        }
        let want = match self.kind {
            ShapeKind::PointCircle => 1,
            ShapeKind::SShape | ShapeKind::CShape => 2,
        };
        if self.circles.len() != want {
            return Err(SceneError::new(
                SceneErrorCode::Arity,
                "circles",
                format!(
                    "{:?} scenes need {want} circle(s), got {}",
                    self.kind,
                    self.circles.len()
                ),
            ));
        }
        match (self.kind, self.point) {
            (ShapeKind::PointCircle, None) => {
                return Err(SceneError::new(
                    SceneErrorCode::MissingField,
                    "point",
                    "point_circle scenes need a start point",
                ))
            }
            (ShapeKind::PointCircle, Some(p)) if !p.is_finite() => {
                return Err(SceneError::new(SceneErrorCode::Domain, "point", "non-finite point"))
            }
            (ShapeKind::SShape | ShapeKind::CShape, Some(_)) => {
                return Err(SceneError::new(
                    SceneErrorCode::Arity,
                    "point",
                    "only point_circle scenes take a point",
                ))
            }
            _ => {}
        }
        for (i, c) in self.circles.iter().enumerate() {
            if !c.center.is_finite() {
                return Err(SceneError::new(
                    SceneErrorCode::Domain,
                    format!("circles[{i}].center"),
                    "non-finite centre",
                ));
            }
            if !(c.radius > 0.0 && c.radius.is_finite()) {
                return Err(SceneError::new(
                    SceneErrorCode::Domain,
                    format!("circles[{i}].radius"),
                    format!("radius magnitude must be positive, got {}", c.radius),
                ));
            }
        }
        if let Alpha0Spec::Range { count, .. } = self.alpha0 {
            if count > MAX_GRID {
                return Err(SceneError::new(
                    SceneErrorCode::Domain,
                    "alpha0.count",
                    format!("at most {MAX_GRID} values per scene"),
                ));
            }
        }
        let values = self.alpha0.values();
        if values.len() > MAX_GRID {
            return Err(SceneError::new(
                SceneErrorCode::Domain,
                "alpha0",
                format!("at most {MAX_GRID} values per scene"),
            ));
        }
        for (i, a) in values.iter().enumerate() {
            if !(*a > 0.0 && *a <= ALPHA0_MAX) {
                let path = match self.alpha0 {
                    Alpha0Spec::Single(_) => "alpha0".to_string(),
                    Alpha0Spec::List(_) => format!("alpha0[{i}]"),
                    Alpha0Spec::Range { .. } => "alpha0".to_string(),
                };
                return Err(SceneError::new(
                    SceneErrorCode::Domain,
                    path,
                    format!(
                        "alpha0 = {a} outside (0, 0.32] ({}: {})",
                        format_theorem(Condition::SpiralDomain),
                        Condition::SpiralDomain.requirement()
                    ),
                ));
            }
        }
        Ok(())
    }
}

fn format_theorem(c: Condition) -> String {
    format!("Theorem {}", c.theorem())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SceneErrorCode {
    InvalidUtf8,
    MalformedJson,
    MissingField,
    InvalidType,
    UnknownField,
    UnsupportedSchema,
    Arity,
    Domain,
}

impl SceneErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            SceneErrorCode::InvalidUtf8 => "invalid_utf8",
            SceneErrorCode::MalformedJson => "malformed_json",
            SceneErrorCode::MissingField => "missing_field",
            SceneErrorCode::InvalidType => "invalid_type",
            SceneErrorCode::UnknownField => "unknown_field",
            SceneErrorCode::UnsupportedSchema => "unsupported_schema",
            SceneErrorCode::Arity => "arity",
            SceneErrorCode::Domain => "domain",
        }
    }
}

/// A rejected document, with the JSON path of the offending field.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SceneError {
    pub code: SceneErrorCode,
    pub path: String,
    pub message: String,
}

impl SceneError {
    fn new(code: SceneErrorCode, path: impl Into<String>, message: impl Into<String>) -> Self {
        SceneError {
            code,
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for SceneError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = if self.path.is_empty() { "." } else { &self.path };
        write!(f, "{} at {}: {}", self.code.as_str(), path, self.message)
    }
}

impl std::error::Error for SceneError {}

fn decode<T: serde::de::DeserializeOwned>(bytes: &[u8]) -> Result<T, SceneError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| SceneError::new(SceneErrorCode::InvalidUtf8, "", e.to_string()))?;
    // Syntax errors first, so that they are not reported as schema errors.
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| SceneError::new(SceneErrorCode::MalformedJson, "", e.to_string()))?;
    serde_path_to_error::deserialize::<_, T>(value).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { String::new() } else { path };
        let message = e.into_inner().to_string();
        let code = if message.starts_with("missing field") {
            SceneErrorCode::MissingField
        } else if message.starts_with("unknown field") {
            SceneErrorCode::UnknownField
        } else {
            SceneErrorCode::InvalidType
        };
        SceneError::new(code, path, message)
    })
}

/// Decodes a scene document without domain validation, so that callers can
/// apply overrides first. Call [`Scene::validate`] before solving.
pub fn decode_scene(bytes: &[u8]) -> Result<Scene, SceneError> {
    decode(bytes)
}

/// Parses and validates a scene document.
pub fn parse_scene(bytes: &[u8]) -> Result<Scene, SceneError> {
    let scene: Scene = decode(bytes)?;
    scene.validate()?;
    Ok(scene)
}

/// Why an entry has no solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Failure {
    /// `infeasible` for a violated existence condition, `numerical` otherwise.
    pub code: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<Condition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<u8>,
    pub message: String,
}

impl From<&Error> for Failure {
    fn from(e: &Error) -> Self {
        let condition = match e {
            Error::Infeasible { condition, .. } | Error::Parameter { condition, .. } => Some(*condition),
            _ => None,
        };
        Failure {
            code: if e.is_infeasible() { "infeasible" } else { "numerical" }.to_string(),
            condition,
            theorem: condition.map(Condition::theorem),
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpiralRecord {
    pub control_points: QuarticBezier,
    /// Signed end radius; the end curvature is its reciprocal.
    pub end_radius: f64,
    pub circle_center: Point2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultEntry {
    pub alpha0: f64,
    pub feasible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0: Option<Point2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<UnitVec2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t1: Option<UnitVec2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f0: Option<UnitVec2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f1: Option<UnitVec2>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spirals: Vec<SpiralRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residuals: Option<Residuals>,
}

impl ResultEntry {
    pub fn from_outcome(alpha0: f64, outcome: &Result<TransitionResult, Error>) -> Self {
        match outcome {
            Ok(r) => ResultEntry {
                alpha0,
                feasible: true,
                failure: None,
                theta: Some(r.frame.theta),
                b0: Some(r.frame.b0),
                t0: Some(r.frame.t0),
                t1: Some(r.frame.t1),
                f0: r.frame.f0,
                f1: r.frame.f1,
                spirals: r
                    .spirals()
                    .zip(r.circles.iter())
                    .map(|(c, circle)| SpiralRecord {
                        control_points: *c,
                        end_radius: circle.radius,
                        circle_center: circle.center,
                    })
                    .collect(),
                residuals: Some(r.residuals.clone()),
            },
            Err(e) => ResultEntry {
                alpha0,
                feasible: false,
                failure: Some(Failure::from(e)),
                theta: None,
                b0: None,
                t0: None,
                t1: None,
                f0: None,
                f1: None,
                spirals: Vec::new(),
                residuals: None,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultDocument {
    #[serde(default = "result_schema")]
    pub schema: String,
    pub scene: Scene,
    pub entries: Vec<ResultEntry>,
}

impl ResultDocument {
    pub fn feasible_count(&self) -> usize {
        self.entries.iter().filter(|e| e.feasible).count()
    }
}

/// Solves every shape parameter of a validated scene.
pub fn solve_scene(scene: &Scene) -> ResultDocument {
    let grid = scene.alpha0.values();
    let family = transition::sweep_family(&scene.problem(), &grid);
    ResultDocument {
        schema: RESULT_SCHEMA.to_string(),
        scene: scene.clone(),
        entries: family
            .iter()
            .map(|m| ResultEntry::from_outcome(m.alpha0, &m.outcome))
            .collect(),
    }
}

/// Pretty printer that writes every float in `{:.16e}` form.
struct CanonicalFormatter(PrettyFormatter<'static>);

macro_rules! forward {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(w $(, $arg)*)
            }
        )*
    };
}

impl Formatter for CanonicalFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    forward! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }
}

/// Serializes any document canonically: keys sorted, 17 significant digits.
pub fn to_canonical_json<T: Serialize>(doc: &T) -> Vec<u8> {
    // Round-tripping through `Value` sorts the keys.
    let value = serde_json::to_value(doc).expect("documents contain only finite values");
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(
        &mut out,
        CanonicalFormatter(PrettyFormatter::with_indent(b"  ")),
    );
    value.serialize(&mut ser).expect("writing to memory");
    out.push(b'\n');
    out
}

pub fn write_result(doc: &ResultDocument) -> Vec<u8> {
    to_canonical_json(doc)
}

pub fn parse_result(bytes: &[u8]) -> Result<ResultDocument, SceneError> {
    let doc: ResultDocument = decode(bytes)?;
    if doc.schema != RESULT_SCHEMA {
        return Err(SceneError::new(
            SceneErrorCode::UnsupportedSchema,
            "schema",
            format!("expected \"{RESULT_SCHEMA}\", got \"{}\"", doc.schema),
        ));
    }
    Ok(doc)
}
