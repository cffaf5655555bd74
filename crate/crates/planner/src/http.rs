//! HTTP API. Request and response bodies are JSON; grey numbers are
//! `[lower, upper]` arrays.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use greymop::{Algorithm1Options, PositionSpec};
use serde_json::{json, Value};

use crate::document::from_text;
use crate::error::PlannerError;
use crate::output::to_output;
use crate::report::{run_report, Algorithm2Params, FrontierParams, ReportRequest, SolveParams};
use crate::session::{StartRequest, StepRequest};
use crate::store::Store;

#[derive(Clone)]
pub struct AppState {
    store: Store,
    locks: Arc<Mutex<HashMap<String, Arc<tokio::sync::Mutex<()>>>>>,
}

impl AppState {
    pub fn new(store: Store) -> Self {
        Self {
            store,
            locks: Arc::default(),
        }
    }

    fn session_lock(&self, id: &str) -> Arc<tokio::sync::Mutex<()>> {
        let mut locks = self.locks.lock().expect("lock table poisoned");
        locks.entry(id.to_string()).or_default().clone()
    }
}

pub struct ApiError(PlannerError);

impl From<PlannerError> for ApiError {
    fn from(e: PlannerError) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let e = self.0;
        let status = match &e {
            PlannerError::Parse { .. }
            | PlannerError::InvariantViolation { .. }
            | PlannerError::Parameter(_)
            | PlannerError::WrongKind { .. } => StatusCode::BAD_REQUEST,
            PlannerError::UnknownHandle(_) | PlannerError::UnknownSession(_) => StatusCode::NOT_FOUND,
            PlannerError::SessionClosed { .. } => StatusCode::CONFLICT,
            PlannerError::DegenerateAssessment { .. } | PlannerError::Core(_) => {
                StatusCode::UNPROCESSABLE_ENTITY
            }
            PlannerError::Io(_) | PlannerError::Corrupt { .. } => StatusCode::INTERNAL_SERVER_ERROR,
        };
        let mut body = json!({ "error": e.kind(), "message": e.to_string() });
        if let Some(a) = e.advisory() {
            body["advisory"] = json!(a);
        }
        if let PlannerError::Parse { line, column, path, .. } = &e {
            body["line"] = json!(line);
            body["column"] = json!(column);
            body["path"] = json!(path);
        }
        if let PlannerError::InvariantViolation { path, .. } = &e {
            body["path"] = json!(path);
        }
        (status, Json(body)).into_response()
    }
}

type ApiResult = Result<Json<Value>, ApiError>;

/// Empty bodies parse as `{}` so every parameter can take its default.
fn body<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, ApiError> {
    let text = if text.trim().is_empty() { "{}" } else { text };
    Ok(from_text(text)?)
}

pub fn router(store: Store) -> Router {
    Router::new()
        .route("/models", post(ingest))
        .route("/models/{id}", get(show_model))
        .route("/models/{id}/solve", post(solve))
        .route("/models/{id}/algorithm1", post(run_algorithm1))
        .route("/models/{id}/algorithm2", post(run_algorithm2))
        .route("/portfolios/{id}/frontier", post(frontier))
        .route("/sessions", post(start_session))
        .route("/sessions/{id}", get(show_session))
        .route("/sessions/{id}/step", post(step_session))
        .with_state(AppState::new(store))
}

/// Runs blocking store and solver work off the async executor.
async fn blocking<T, F>(f: F) -> Result<T, ApiError>
where
    F: FnOnce() -> Result<T, PlannerError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| PlannerError::Io(std::io::Error::other(e.to_string())))?
        .map_err(ApiError)
}

async fn ingest(State(st): State<AppState>, text: String) -> Result<(StatusCode, Json<Value>), ApiError> {
    let (handle, doc) = blocking(move || st.store.ingest(&text)).await?;
    Ok((
        StatusCode::CREATED,
        Json(json!({ "id": handle, "kind": doc.kind() })),
    ))
}

async fn show_model(State(st): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let doc = blocking(move || st.store.get(&id)).await?;
    Ok(Json(json!({ "kind": doc.kind(), "model": doc.model_value() })))
}

async fn report(st: AppState, id: String, req: ReportRequest) -> ApiResult {
    let r = blocking(move || run_report(&st.store, &id, &req)).await?;
    Ok(Json(to_output(&r)))
}

async fn solve(State(st): State<AppState>, Path(id): Path<String>, text: String) -> ApiResult {
    let position: PositionSpec = if text.trim().is_empty() {
        PositionSpec::default()
    } else {
        body(&text)?
    };
    report(st, id, ReportRequest::Solve(SolveParams { position })).await
}

async fn run_algorithm1(State(st): State<AppState>, Path(id): Path<String>, text: String) -> ApiResult {
    let options: Algorithm1Options = body(&text)?;
    report(st, id, ReportRequest::Algorithm1(options)).await
}

async fn run_algorithm2(State(st): State<AppState>, Path(id): Path<String>, text: String) -> ApiResult {
    let params: Algorithm2Params = body(&text)?;
    report(st, id, ReportRequest::Algorithm2(params)).await
}

async fn frontier(State(st): State<AppState>, Path(id): Path<String>, text: String) -> ApiResult {
    let params: FrontierParams = body(&text)?;
    report(st, id, ReportRequest::Frontier(params)).await
}

async fn start_session(State(st): State<AppState>, text: String) -> Result<(StatusCode, Json<Value>), ApiError> {
    let req: StartRequest = body(&text)?;
    let state = blocking(move || st.store.start_session(&req)).await?;
    Ok((StatusCode::CREATED, Json(to_output(&state))))
}

async fn show_session(State(st): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let lock = st.session_lock(&id);
    let _guard = lock.lock().await;
    let state = blocking(move || st.store.load_session(&id)).await?;
    Ok(Json(to_output(&state)))
}

async fn step_session(State(st): State<AppState>, Path(id): Path<String>, text: String) -> ApiResult {
    let req: StepRequest = body(&text)?;
    let lock = st.session_lock(&id);
    let _guard = lock.lock().await;
    let state = blocking(move || st.store.step_session(&id, &req)).await?;
    Ok(Json(to_output(&state)))
}

pub async fn serve(store: Store, listen: &str) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(listen).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(store)).await
}
