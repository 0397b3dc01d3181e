//! HTTP API over a directory of project files.
//!
//! | method | path | |
//! |---|---|---|
//! | GET | `/api/health` | liveness |
//! | GET | `/api/projects` | summaries sorted by id |
//! | GET | `/api/projects/{id}` | the project document |
//! | PUT | `/api/projects/{id}/mapping` | replace the mapping (needs `X-Expected-Revision`) |
//! | GET | `/api/projects/{id}/metrics` | metric report, byte-identical to `taxunify metrics --format json` |
//! | GET | `/api/projects/{id}/session` | revision and edit lock holder |
//! | POST, DELETE | `/api/projects/{id}/lock` | take, renew or release the advisory edit lock |
//!
//! Error bodies are `{"error": "..."}`, plus `violations` for 422 on a
//! rejected mapping and `currentRevision` for 409.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::{Path, Request, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;
use taxunify::report::metrics_json;
use taxunify::scheme::MappingSetDocument;

mod workspace;

pub use workspace::{CommitError, LockHolder, ProjectSession, Workspace, WorkspaceError};

pub const DEFAULT_BIND: &str = "127.0.0.1:8642";
pub const REVISION_HEADER: &str = "x-expected-revision";
pub const SECRET_HEADER: &str = "x-taxunify-secret";
pub const DEFAULT_LOCK_TTL: Duration = Duration::from_secs(300);

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub workspace: PathBuf,
    pub bind: SocketAddr,
    /// When set, every route except `/api/health` requires this value in
    /// the `X-Taxunify-Secret` header.
    pub secret: Option<String>,
}

#[derive(Clone)]
pub struct AppState {
    workspace: Arc<Workspace>,
    secret: Option<Arc<str>>,
}

impl AppState {
    pub fn new(workspace: Workspace, secret: Option<String>) -> Self {
        AppState {
            workspace: Arc::new(workspace),
            secret: secret.map(Into::into),
        }
    }

    pub fn workspace(&self) -> &Workspace {
        &self.workspace
    }
}

pub fn router(state: AppState) -> Router {
    let api = Router::new()
        .route("/api/projects", get(list_projects))
        .route("/api/projects/{id}", get(get_project))
        .route("/api/projects/{id}/mapping", put(put_mapping))
        .route("/api/projects/{id}/metrics", get(get_metrics))
        .route("/api/projects/{id}/session", get(get_session))
        .route(
            "/api/projects/{id}/lock",
            post(take_lock).delete(release_lock),
        )
        .route_layer(middleware::from_fn_with_state(state.clone(), check_secret));
    Router::new()
        .route("/api/health", get(health))
        .merge(api)
        .with_state(state)
}

/// Binds and serves until the process is stopped.
pub async fn serve(config: ServiceConfig) -> Result<(), ServeError> {
    let workspace = Workspace::open(&config.workspace)?;
    let listener = tokio::net::TcpListener::bind(config.bind)
        .await
        .map_err(|source| ServeError::Bind {
            addr: config.bind,
            source,
        })?;
    tracing::info!(addr = %config.bind, workspace = %config.workspace.display(), "listening");
    let app = router(AppState::new(workspace, config.secret));
    axum::serve(listener, app).await.map_err(ServeError::Serve)
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error(transparent)]
    Workspace(#[from] WorkspaceError),
    #[error("cannot bind {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        source: std::io::Error,
    },
    #[error("server error: {0}")]
    Serve(std::io::Error),
}

/// A refused request before any project state is touched.
type Reject = (StatusCode, String);

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(json!({ "error": message.into() }))).into_response()
}

fn not_found(id: &str) -> Response {
    error(StatusCode::NOT_FOUND, format!("no project {id:?}"))
}

fn raw_json(body: String) -> Response {
    (
        [(
            header::CONTENT_TYPE,
            HeaderValue::from_static("application/json"),
        )],
        body,
    )
        .into_response()
}

async fn check_secret(State(state): State<AppState>, req: Request, next: Next) -> Response {
    if let Some(secret) = &state.secret {
        let given = req
            .headers()
            .get(SECRET_HEADER)
            .and_then(|v| v.to_str().ok());
        if given != Some(secret) {
            return error(StatusCode::UNAUTHORIZED, "missing or wrong shared secret");
        }
    }
    next.run(req).await
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok" }))
}

async fn list_projects(State(state): State<AppState>) -> Response {
    Json(state.workspace.summaries().await).into_response()
}

async fn get_project(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    match state.workspace.snapshot(&id).await {
        Some(p) => raw_json(p.to_json()),
        None => not_found(&id),
    }
}

async fn get_metrics(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    let Some(project) = state.workspace.snapshot(&id).await else {
        return not_found(&id);
    };
    match project.metric_report() {
        Ok(report) => raw_json(metrics_json(&report)),
        Err(e) => error(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()),
    }
}

async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    match state.workspace.session(&id).await {
        Some(s) => Json(s).into_response(),
        None => not_found(&id),
    }
}

/// Reads `X-Expected-Revision`, falling back to `If-Match` (quotes allowed).
fn expected_revision(headers: &HeaderMap) -> Result<u64, Reject> {
    let raw = headers
        .get(REVISION_HEADER)
        .or_else(|| headers.get(header::IF_MATCH))
        .ok_or((
            StatusCode::PRECONDITION_REQUIRED,
            "X-Expected-Revision header is required".to_string(),
        ))?;
    raw.to_str()
        .ok()
        .map(|s| s.trim().trim_matches('"'))
        .and_then(|s| s.parse().ok())
        .ok_or((
            StatusCode::BAD_REQUEST,
            "expected revision is not an integer".to_string(),
        ))
}

async fn put_mapping(
    State(state): State<AppState>,
    Path(id): Path<String>,
    headers: HeaderMap,
    body: Bytes,
) -> Response {
    let expected = match expected_revision(&headers) {
        Ok(r) => r,
        Err((status, message)) => return error(status, message),
    };
    let doc: MappingSetDocument = match serde_json::from_slice(&body) {
        Ok(d) => d,
        Err(e) => {
            return error(
                StatusCode::BAD_REQUEST,
                format!("invalid mapping body: {e}"),
            )
        }
    };
    match state.workspace.commit_mapping(&id, expected, doc).await {
        Ok(revision) => Json(json!({ "revision": revision })).into_response(),
        Err(CommitError::UnknownProject) => not_found(&id),
        Err(CommitError::Conflict { expected, current }) => (
            StatusCode::CONFLICT,
            Json(json!({
                "error": format!("revision {expected} is stale"),
                "currentRevision": current,
            })),
        )
            .into_response(),
        Err(CommitError::Invalid(violations)) => (
            StatusCode::UNPROCESSABLE_ENTITY,
            Json(json!({
                "error": "mapping violates the project schemes",
                "violations": violations,
            })),
        )
            .into_response(),
        Err(CommitError::Persist(e)) => {
            tracing::error!(project = %id, "persist failed: {e}");
            error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string())
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct LockRequest {
    client_token: String,
    #[serde(default)]
    ttl_seconds: Option<u64>,
}

fn lock_request(body: &Bytes) -> Result<LockRequest, Reject> {
    let req: LockRequest = serde_json::from_slice(body)
        .map_err(|e| (StatusCode::BAD_REQUEST, format!("invalid lock body: {e}")))?;
    if req.client_token.is_empty() {
        return Err((
            StatusCode::BAD_REQUEST,
            "clientToken must not be empty".to_string(),
        ));
    }
    Ok(req)
}

fn held_elsewhere(session: ProjectSession) -> Response {
    (
        StatusCode::LOCKED,
        Json(json!({ "error": "project is locked by another client", "session": session })),
    )
        .into_response()
}

async fn take_lock(State(state): State<AppState>, Path(id): Path<String>, body: Bytes) -> Response {
    let req = match lock_request(&body) {
        Ok(r) => r,
        Err((status, message)) => return error(status, message),
    };
    let ttl = req
        .ttl_seconds
        .map_or(DEFAULT_LOCK_TTL, Duration::from_secs);
    match state
        .workspace
        .acquire_lock(&id, &req.client_token, ttl)
        .await
    {
        None => not_found(&id),
        Some(Ok(session)) => Json(session).into_response(),
        Some(Err(session)) => held_elsewhere(session),
    }
}

async fn release_lock(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Response {
    let req = match lock_request(&body) {
        Ok(r) => r,
        Err((status, message)) => return error(status, message),
    };
    match state.workspace.release_lock(&id, &req.client_token).await {
        None => not_found(&id),
        Some(Ok(())) => StatusCode::NO_CONTENT.into_response(),
        Some(Err(session)) => held_elsewhere(session),
    }
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/service.md")]
mod book {}
