//! Stateless HTTP front end for the solver.
//!
//! `POST /v1/solve` takes a scene document and returns the same bytes
//! `spiralkit solve` would write. Solve time is reported in milliseconds in
//! the `server-timing` header. Infeasible scenes are a 200 with
//! `feasible: false` entries; only undecodable or out-of-domain scenes get a
//! 400. No authentication or TLS: bind to localhost.

use std::net::{IpAddr, SocketAddr};
use std::time::Instant;

use axum::body::Bytes;
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use serde::Serialize;

use crate::scene::{self, SceneError, MAX_GRID};
use crate::spiral::ALPHA0_MAX;

#[derive(Serialize)]
struct Limits {
    alpha0_max: f64,
    theta_max: f64,
    max_grid: usize,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: &'a SceneError,
}

fn json(status: StatusCode, body: Vec<u8>) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

async fn solve(body: Bytes) -> Response {
    let scene = match scene::parse_scene(&body) {
        Ok(s) => s,
        Err(e) => {
            log::debug!("rejected scene: {e}");
            return json(StatusCode::BAD_REQUEST, scene::to_canonical_json(&ErrorBody { error: &e }));
        }
    };
    let started = Instant::now();
    let doc = match tokio::task::spawn_blocking(move || scene::solve_scene(&scene)).await {
        Ok(doc) => doc,
        Err(e) => {
            log::error!("solver task failed: {e}");
            return (StatusCode::INTERNAL_SERVER_ERROR, "solver task failed").into_response();
        }
    };
    let ms = started.elapsed().as_secs_f64() * 1e3;
    log::info!("solve: {} entries, {} feasible, {ms:.3} ms", doc.entries.len(), doc.feasible_count());
    let mut resp = json(StatusCode::OK, scene::write_result(&doc));
    if let Ok(v) = HeaderValue::from_str(&format!("solve;dur={ms:.3}")) {
        resp.headers_mut().insert("server-timing", v);
    }
    resp
}

async fn limits() -> Response {
    json(
        StatusCode::OK,
        scene::to_canonical_json(&Limits {
            alpha0_max: ALPHA0_MAX,
            theta_max: std::f64::consts::FRAC_PI_2,
            max_grid: MAX_GRID,
        }),
    )
}

async fn healthz() -> &'static str {
    "ok"
}

async fn preflight() -> StatusCode {
    StatusCode::NO_CONTENT
}

async fn not_found() -> Response {
    json(StatusCode::NOT_FOUND, b"{\n  \"error\": \"not found\"\n}\n".to_vec())
}

// The designer page may be served from another local origin.
async fn cors(mut resp: Response) -> Response {
    let h = resp.headers_mut();
    h.insert(header::ACCESS_CONTROL_ALLOW_ORIGIN, HeaderValue::from_static("*"));
    h.insert(header::ACCESS_CONTROL_ALLOW_METHODS, HeaderValue::from_static("GET, POST, OPTIONS"));
    h.insert(header::ACCESS_CONTROL_ALLOW_HEADERS, HeaderValue::from_static("content-type"));
    h.insert(header::ACCESS_CONTROL_EXPOSE_HEADERS, HeaderValue::from_static("server-timing"));
    resp
}

pub fn router() -> Router {
    Router::new()
        .route("/v1/solve", axum::routing::post(solve).options(preflight))
        .route("/v1/limits", get(limits))
        .route("/healthz", get(healthz))
        .fallback(not_found)
        .layer(axum::middleware::map_response(cors))
}

/// Serves [`router`] until interrupted.
pub async fn serve(bind: IpAddr, port: u16) -> std::io::Result<()> {
    let addr = SocketAddr::new(bind, port);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router())
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
