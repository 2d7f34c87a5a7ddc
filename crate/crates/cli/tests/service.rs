use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use gtoc12_cli::service::{router, AppState};
use gtoc12_core::synth::{SynthesisSpec, Synthesizer};
use gtoc12_core::{serialize_solution, AsteroidCatalog, ValidationConfig};
use http_body_util::BodyExt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tower::ServiceExt;

const BOUNDARY: &str = "XyZboundary";

fn state() -> Arc<AppState> {
    Arc::new(AppState {
        catalog: AsteroidCatalog::default(),
        config: ValidationConfig::default(),
    })
}

/// Two launch-only ships need no asteroids.
fn launch_only() -> String {
    let catalog = AsteroidCatalog::default();
    let doc = Synthesizer::new(&catalog)
        .synthesize(&SynthesisSpec {
            ships: 2,
            mining_ships: 0,
            burns_per_leg: 0,
            ..SynthesisSpec::default()
        })
        .unwrap();
    serialize_solution(&doc).unwrap()
}

fn multipart(field: &str, content: &str) -> Request<Body> {
    let body = format!(
        "--{BOUNDARY}\r\nContent-Disposition: form-data; name=\"{field}\"; filename=\"a.txt\"\r\n\r\n{content}\r\n--{BOUNDARY}--\r\n"
    );
    Request::post("/validate")
        .header(
            "content-type",
            format!("multipart/form-data; boundary={BOUNDARY}"),
        )
        .body(Body::from(body))
        .unwrap()
}

async fn send(req: Request<Body>) -> (StatusCode, Value) {
    let res = router(state()).oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (
        status,
        serde_json::from_slice(&bytes).unwrap_or(Value::Null),
    )
}

#[tokio::test]
async fn valid_upload() {
    let (status, v) = send(multipart("file", &launch_only())).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["valid"], true);
    assert_eq!(v["score"], 0.0);
    assert_eq!(v["ship_count"], 2);
}

#[tokio::test]
async fn invalid_upload_is_still_200() {
    let (status, v) = send(multipart("file", "1 0 1 2 3\n")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["valid"], false);
    assert!(!v["violations"].as_array().unwrap().is_empty());
}

#[tokio::test]
async fn missing_file_field() {
    let (status, v) = send(multipart("other", "x")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["message"], "no file");
}

#[tokio::test]
async fn not_multipart() {
    let req = Request::post("/validate")
        .header("content-type", "text/plain")
        .body(Body::from("1 0 64500"))
        .unwrap();
    let (status, _) = send(req).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn empty_body() {
    let req = Request::post("/validate").body(Body::empty()).unwrap();
    let (status, v) = send(req).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["message"], "no file");
}

#[tokio::test]
async fn truncated_multipart() {
    let req = Request::post("/validate")
        .header(
            "content-type",
            format!("multipart/form-data; boundary={BOUNDARY}"),
        )
        .body(Body::from(format!(
            "--{BOUNDARY}\r\nContent-Disposition: form-data; name=\"file\"\r\n\r\n1 0"
        )))
        .unwrap();
    let (status, v) = send(req).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(v["message"].is_string());
}

/// Random uploads, both as file contents and as whole request bodies,
/// always get an answer.
#[tokio::test]
async fn random_uploads_never_crash() {
    let app = router(state());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..1000 {
        let n = rng.random_range(0..600);
        let bytes: Vec<u8> = (0..n).map(|_| rng.random()).collect();
        let req = if k % 2 == 0 {
            let mut body =
                format!("--{BOUNDARY}\r\nContent-Disposition: form-data; name=\"file\"\r\n\r\n")
                    .into_bytes();
            body.extend_from_slice(&bytes);
            body.extend_from_slice(format!("\r\n--{BOUNDARY}--\r\n").as_bytes());
            Request::post("/validate")
                .header(
                    "content-type",
                    format!("multipart/form-data; boundary={BOUNDARY}"),
                )
                .body(Body::from(body))
                .unwrap()
        } else {
            Request::post("/validate")
                .header(
                    "content-type",
                    format!("multipart/form-data; boundary={BOUNDARY}"),
                )
                .body(Body::from(bytes))
                .unwrap()
        };
        let res = app.clone().oneshot(req).await.unwrap();
        assert!(
            res.status() == StatusCode::OK || res.status() == StatusCode::BAD_REQUEST,
            "case {k}: {}",
            res.status()
        );
    }
}

#[tokio::test]
async fn health() {
    let req = Request::get("/health").body(Body::empty()).unwrap();
    let (status, v) = send(req).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["status"], "ok");
}
