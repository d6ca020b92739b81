use std::path::Path;
use std::process::{Command, Output};

use spiralkit::scene::{parse_result, write_result};
use spiralkit::svg::{viewport_for, SvgOptions};
use spiralkit::Vec2;

const POINT_CIRCLE: &str = r#"{"kind": "point_circle", "point": [0, 0],
    "circles": [{"center": [13, 15.198684153570664], "radius": 5}], "alpha0": 0.32}"#;
const S_SHAPE: &str = r#"{"kind": "s_shape",
    "circles": [{"center": [10, 7], "radius": 5}, {"center": [0, 0], "radius": 2}], "alpha0": 0.32}"#;

fn spiralkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spiralkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn solve_s_shape_writes_result_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write(dir.path(), "scene.json", S_SHAPE);
    let out = dir.path().join("result.json");
    let svg = dir.path().join("result.svg");
    let o = spiralkit(&[
        "solve",
        &scene,
        "-o",
        out.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
        "--control-polygon",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = parse_result(&std::fs::read(&out).unwrap()).unwrap();
    let theta = doc.entries[0].theta.unwrap();
    assert!((theta - 0.867967).abs() < 1e-4);
    let svg = std::fs::read_to_string(svg).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert_eq!(svg.matches(r#"class="spiral""#).count(), 2);
    assert_eq!(svg.matches(r#"class="control-polygon""#).count(), 2);
}

#[test]
fn solve_to_stdout_matches_library_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write(dir.path(), "scene.json", S_SHAPE);
    let o = spiralkit(&["solve", &scene]);
    assert_eq!(o.status.code(), Some(0));
    let doc = parse_result(&o.stdout).unwrap();
    assert_eq!(write_result(&doc), o.stdout);
}

#[test]
fn overrides_apply_before_validation() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write(dir.path(), "scene.json", S_SHAPE);
    let o = spiralkit(&["solve", &scene, "--alpha0", "0.1,0.2,0.32", "--branch", "right"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = parse_result(&o.stdout).unwrap();
    assert_eq!(doc.entries.len(), 3);
    assert_eq!(doc.scene.branch, spiralkit::Branch::Right);
    let o = spiralkit(&["solve", &scene, "--alpha0", "0.9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Theorem 1"));
}

#[test]
fn s_shape_overlap_is_a_clean_infeasibility() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write(
        dir.path(),
        "scene.json",
        r#"{"kind": "s_shape", "circles": [{"center": [6, 0], "radius": 5}, {"center": [0, 0], "radius": 2}], "alpha0": 0.32}"#,
    );
    let out = dir.path().join("r.json");
    let o = spiralkit(&["solve", &scene, "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Theorem 3"), "{}", stderr(&o));
    let doc = parse_result(&std::fs::read(&out).unwrap()).unwrap();
    assert!(!doc.entries[0].feasible);
}

#[test]
fn input_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(spiralkit(&["solve", missing.to_str().unwrap()]).status.code(), Some(1));
    let bad = write(dir.path(), "bad.json", "{\"kind\": ");
    let o = spiralkit(&["solve", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("malformed_json"));
    assert_eq!(spiralkit(&["certify", missing.to_str().unwrap()]).status.code(), Some(1));
}

fn solved(dir: &Path, scene: &str) -> String {
    let scene = write(dir, "scene.json", scene);
    let out = dir.join("result.json");
    let o = spiralkit(&["solve", &scene, "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    out.to_str().unwrap().to_string()
}

#[test]
fn certify_accepts_untouched_output() {
    let dir = tempfile::tempdir().unwrap();
    for scene in [POINT_CIRCLE, S_SHAPE] {
        let path = solved(dir.path(), scene);
        let o = spiralkit(&["certify", &path]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
}

#[test]
fn certify_rejects_a_perturbed_control_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = solved(dir.path(), S_SHAPE);
    let mut doc = parse_result(&std::fs::read(&path).unwrap()).unwrap();
    // 5% of the scene scale (centre distance).
    let scale = Vec2::new(10.0, 7.0).norm();
    for k in 1..5 {
        let mut tampered = doc.clone();
        tampered.entries[0].spirals[1].control_points.points[k] += Vec2::new(0.05 * scale, 0.0);
        std::fs::write(&path, write_result(&tampered)).unwrap();
        let o = spiralkit(&["certify", &path]);
        assert_eq!(o.status.code(), Some(3), "control point {k}");
        assert!(stderr(&o).contains("spiral 1"));
    }
    doc.entries[0].spirals[0].control_points.points[0] += Vec2::new(0.0, 0.05 * scale);
    std::fs::write(&path, write_result(&doc)).unwrap();
    assert_eq!(spiralkit(&["certify", &path]).status.code(), Some(3));
}

#[test]
fn certify_with_nothing_to_check_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = solved(dir.path(), S_SHAPE);
    let mut doc = parse_result(&std::fs::read(&path).unwrap()).unwrap();
    doc.entries.clear();
    std::fs::write(&path, write_result(&doc)).unwrap();
    assert_eq!(spiralkit(&["certify", &path]).status.code(), Some(2));
}

#[test]
fn svg_polylines_start_at_b0_and_end_on_the_circle() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write(dir.path(), "scene.json", POINT_CIRCLE);
    let out = dir.path().join("r.json");
    let svg_path = dir.path().join("r.svg");
    let o = spiralkit(&["solve", &scene, "-o", out.to_str().unwrap(), "--svg", svg_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc = parse_result(&std::fs::read(&out).unwrap()).unwrap();
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    let vp = viewport_for(&doc, &SvgOptions::default()).unwrap();

    let line = svg.lines().find(|l| l.contains(r#"class="spiral""#)).unwrap();
    let pts: Vec<Vec2> = line
        .split("points=\"")
        .nth(1)
        .unwrap()
        .trim_end_matches("\"/>")
        .split(' ')
        .map(|xy| {
            let (x, y) = xy.split_once(',').unwrap();
            vp.to_world(Vec2::new(x.parse().unwrap(), y.parse().unwrap()))
        })
        .collect();
    assert_eq!(pts.len(), 257);
    let chord = pts[0].distance(pts[1]).max(pts[255].distance(pts[256]));
    let curve = &doc.entries[0].spirals[0].control_points;
    assert!(pts[0].distance(doc.entries[0].b0.unwrap()) <= chord);
    assert!(pts[256].distance(curve.points[4]) <= chord);
    let circle = &doc.scene.circles[0];
    assert!((pts[256].distance(circle.center) - circle.radius).abs() <= chord);
}
