//! HTTP validation service.
//!
//! `POST /validate` takes a multipart upload with the solution in a field
//! named `file` and answers with the same JSON as `gtoc12 validate --json`.

use std::future::Future;
use std::sync::Arc;

use axum::extract::multipart::MultipartRejection;
use axum::extract::{DefaultBodyLimit, Multipart, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use gtoc12_core::{validate_bytes, AsteroidCatalog, ValidationConfig};
use serde_json::json;
use tokio::net::TcpListener;

use crate::response::ValidateResponse;

/// Uploads larger than this are refused.
pub const MAX_UPLOAD_BYTES: usize = 256 * 1024 * 1024;

pub struct AppState {
    pub catalog: AsteroidCatalog,
    pub config: ValidationConfig,
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/validate", post(validate))
        .route("/health", get(health))
        .layer(DefaultBodyLimit::max(MAX_UPLOAD_BYTES))
        .with_state(state)
}

/// Serve until `shutdown` resolves.
pub async fn serve(
    listener: TcpListener,
    state: Arc<AppState>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(state))
        .with_graceful_shutdown(shutdown)
        .await
}

async fn health() -> impl IntoResponse {
    Json(json!({ "status": "ok" }))
}

fn bad_request(message: impl Into<String>) -> Response {
    let message = message.into();
    (StatusCode::BAD_REQUEST, Json(json!({ "message": message }))).into_response()
}

async fn validate(
    State(state): State<Arc<AppState>>,
    multipart: Result<Multipart, MultipartRejection>,
) -> Response {
    let mut multipart = match multipart {
        Ok(m) => m,
        Err(e) => {
            let detail = e.body_text();
            return (
                StatusCode::BAD_REQUEST,
                Json(json!({ "message": "no file", "detail": detail })),
            )
                .into_response();
        }
    };
    let mut upload = None;
    loop {
        match multipart.next_field().await {
            Ok(Some(field)) => {
                if field.name() != Some("file") {
                    continue;
                }
                match field.bytes().await {
                    Ok(bytes) => {
                        upload = Some(bytes);
                        break;
                    }
                    Err(e) => return bad_request(format!("could not read upload: {e}")),
                }
            }
            Ok(None) => break,
            Err(e) => return bad_request(format!("malformed multipart body: {e}")),
        }
    }
    let Some(bytes) = upload else {
        return bad_request("no file");
    };
    log::info!("validating upload of {} bytes", bytes.len());
    let result = tokio::task::spawn_blocking(move || {
        let report = validate_bytes(&bytes, &state.catalog, &state.config);
        ValidateResponse::from_report(&report)
    })
    .await;
    match result {
        Ok(body) => {
            log::info!("{}", body.message);
            Json(body).into_response()
        }
        Err(e) => {
            log::error!("validation task failed: {e}");
            (
                StatusCode::INTERNAL_SERVER_ERROR,
                Json(json!({ "message": "validation failed" })),
            )
                .into_response()
        }
    }
}
