use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use tower::ServiceExt;

use spiralkit::scene::{parse_result, parse_scene, solve_scene, write_result};
use spiralkit::service::router;

const POINT_CIRCLE: &str = r#"{"kind": "point_circle", "point": [0, 0],
    "circles": [{"center": [13, 15.198684153570664], "radius": 5}], "alpha0": 0.32}"#;

async fn send(req: Request<Body>) -> (StatusCode, axum::http::HeaderMap, Vec<u8>) {
    let resp = router().oneshot(req).await.unwrap();
    let status = resp.status();
    let headers = resp.headers().clone();
    let body = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, headers, body)
}

fn post(body: &str) -> Request<Body> {
    Request::post("/v1/solve")
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap()
}

#[tokio::test]
async fn healthz() {
    let (status, _, body) = send(Request::get("/healthz").body(Body::empty()).unwrap()).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, b"ok");
}

#[tokio::test]
async fn limits() {
    let (status, headers, body) = send(Request::get("/v1/limits").body(Body::empty()).unwrap()).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(headers["content-type"], "application/json");
    let v: serde_json::Value = serde_json::from_slice(&body).unwrap();
    assert_eq!(v["alpha0_max"].as_f64(), Some(0.32));
    assert_eq!(v["theta_max"].as_f64(), Some(std::f64::consts::FRAC_PI_2));
}

#[tokio::test]
async fn solve_point_circle_matches_cli_bytes() {
    let (status, headers, body) = send(post(POINT_CIRCLE)).await;
    assert_eq!(status, StatusCode::OK);
    assert!(headers["server-timing"].to_str().unwrap().starts_with("solve;dur="));
    let doc = parse_result(&body).unwrap();
    assert!((doc.entries[0].theta.unwrap() - 1.11088).abs() < 1e-4);
    let local = write_result(&solve_scene(&parse_scene(POINT_CIRCLE.as_bytes()).unwrap()));
    assert_eq!(body, local);
}

#[tokio::test]
async fn out_of_domain_alpha0_is_a_400() {
    let (status, _, body) = send(post(&POINT_CIRCLE.replace("0.32", "0.9"))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let v: serde_json::Value = serde_json::from_slice(&body).unwrap();
    assert_eq!(v["error"]["code"], "domain");
    assert_eq!(v["error"]["path"], "alpha0");
    assert!(v["error"]["message"].as_str().unwrap().contains("Theorem 1"));
}

#[tokio::test]
async fn malformed_body_is_a_400() {
    let (status, _, body) = send(post("{nope")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let v: serde_json::Value = serde_json::from_slice(&body).unwrap();
    assert_eq!(v["error"]["code"], "malformed_json");
}

#[tokio::test]
async fn infeasible_scene_is_a_200() {
    let scene = r#"{"kind": "s_shape", "circles": [{"center": [6, 0], "radius": 5}, {"center": [0, 0], "radius": 2}], "alpha0": 0.32}"#;
    let (status, _, body) = send(post(scene)).await;
    assert_eq!(status, StatusCode::OK);
    let doc = parse_result(&body).unwrap();
    assert!(!doc.entries[0].feasible);
    assert_eq!(doc.entries[0].failure.as_ref().unwrap().theorem, Some(3));
}

#[tokio::test]
async fn concurrent_requests_are_independent() {
    let scenes: Vec<String> = (0..16)
        .map(|k| POINT_CIRCLE.replace("0.32", &format!("{}", 0.02 * (k + 1) as f64)))
        .collect();
    let handles: Vec<_> = scenes
        .iter()
        .cloned()
        .map(|s| tokio::spawn(async move { send(post(&s)).await.2 }))
        .collect();
    for (s, h) in scenes.iter().zip(handles) {
        let body = h.await.unwrap();
        assert_eq!(body, write_result(&solve_scene(&parse_scene(s.as_bytes()).unwrap())));
    }
}

#[tokio::test]
async fn unknown_route_and_preflight() {
    let (status, _, _) = send(Request::get("/nope").body(Body::empty()).unwrap()).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, headers, _) = send(Request::options("/v1/solve").body(Body::empty()).unwrap()).await;
    assert_eq!(status, StatusCode::NO_CONTENT);
    assert_eq!(headers["access-control-allow-origin"], "*");
}
