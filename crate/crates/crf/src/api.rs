//! JSON-over-HTTP service for the dashboard.
//!
//! Every body is a JSON object carrying `schema_version`. Reads load the
//! project file afresh, so they see either the state before or after a
//! write, never a mix. Writes are serialized by an in-process mutex and
//! the store's lock file.

use std::future::Future;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{any, get};
use axum::{Json, Router};
use crf_core::aggregation::{OverallScores, ServiceProgress};
use crf_core::bundle::{overall_bundle, progress_report, service_bundle, use_case_report, ReportError, SCHEMA_VERSION};
use crf_core::catalog::Catalog;
use crf_core::project::ProjectError;
use crf_core::reporting::ProgressBar;
use crf_core::scoring::{AssessmentInput, EnablerAssessment, ScoringError};
use crf_core::whatif::{what_if, WhatIfError, WhatIfRequest};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use tokio::sync::Mutex;
use tower_http::cors::CorsLayer;
use tower_http::services::ServeDir;

use crate::files::{to_canonical_json, FileError};
use crate::store::{Store, StoreError};

pub const JSON_CONTENT_TYPE: &str = "application/json; charset=utf-8";

#[derive(Debug)]
pub struct AppState {
    store: Store,
    catalog: Catalog,
    write: Mutex<()>,
}

impl AppState {
    /// Opens a project directory; fails if it holds no valid project.
    pub fn open(dir: &Path) -> Result<Arc<AppState>, StoreError> {
        let store = Store::open(dir)?;
        let catalog = store.catalog()?;
        let errors = store.load()?.validate(&catalog);
        if !errors.is_empty() {
            return Err(StoreError::Validation(errors));
        }
        Ok(Arc::new(AppState {
            store,
            catalog,
            write: Mutex::new(()),
        }))
    }
}

#[derive(Debug, Clone, Default)]
pub struct ServeOptions {
    /// Permissive CORS for a dashboard dev server on another origin.
    pub dev: bool,
    pub static_dir: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Envelope<T> {
    schema_version: &'static str,
    #[serde(flatten)]
    body: T,
}

fn json_response<T: Serialize>(status: StatusCode, body: T) -> Response {
    let text = to_canonical_json(&Envelope {
        schema_version: SCHEMA_VERSION,
        body,
    });
    (status, [(header::CONTENT_TYPE, JSON_CONTENT_TYPE)], text).into_response()
}

fn ok<T: Serialize>(body: T) -> Response {
    json_response(StatusCode::OK, body)
}

#[derive(Debug, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    status: StatusCode,
    code: String,
    detail: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    errors: Vec<Value>,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, detail: impl ToString) -> Self {
        ApiError {
            status,
            code: code.into(),
            detail: detail.to_string(),
            errors: Vec::new(),
        }
    }

    fn bad_request(code: &str, detail: impl ToString) -> Self {
        Self::new(StatusCode::BAD_REQUEST, code, detail)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        json_response(self.status, &self)
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::bad_request("bad-request", e.body_text())
    }
}

impl From<ProjectError> for ApiError {
    fn from(e: ProjectError) -> Self {
        let status = match e {
            ProjectError::UnknownUseCase { .. } | ProjectError::UnknownScenario { .. } => StatusCode::NOT_FOUND,
            _ => StatusCode::BAD_REQUEST,
        };
        let mut err = ApiError::new(status, e.code(), &e);
        err.errors.push(serde_json::to_value(&e).unwrap_or(Value::Null));
        err
    }
}

impl From<ScoringError> for ApiError {
    fn from(e: ScoringError) -> Self {
        let code = match e {
            ScoringError::ImportanceNone => "importance-none-forbidden",
            ScoringError::UnknownEnabler(_) => "unknown-enabler",
            _ => "invalid-level",
        };
        ApiError::bad_request(code, e)
    }
}

impl From<ReportError> for ApiError {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Project(p) => p.into(),
            ReportError::Scoring(s) => s.into(),
            ReportError::UnknownService(_) => ApiError::new(StatusCode::NOT_FOUND, "unknown-service", e),
            ReportError::Aggregation(_) | ReportError::Feasibility(_) => ApiError::bad_request("not-assessed", e),
        }
    }
}

impl From<WhatIfError> for ApiError {
    fn from(e: WhatIfError) -> Self {
        match e {
            WhatIfError::Report(r) => r.into(),
            WhatIfError::Level(s) => s.into(),
            _ => ApiError::bad_request(e.code(), e),
        }
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::NotFound(_) => ApiError::new(StatusCode::NOT_FOUND, "not-found", e),
            StoreError::Validation(ref list) => {
                let mut err = ApiError::bad_request("validation", &e);
                err.errors = list.iter().map(|p| serde_json::to_value(p).unwrap_or(Value::Null)).collect();
                err
            }
            StoreError::Locked(_) => ApiError::new(StatusCode::CONFLICT, "locked", e),
            StoreError::Exists(_) => ApiError::new(StatusCode::CONFLICT, "exists", e),
            StoreError::Incomparable(_) => ApiError::bad_request("incomparable", e),
            StoreError::File(FileError::Assessment { source, .. }) => source.into(),
            StoreError::File(_) => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "io", e),
        }
    }
}

type ApiResult = Result<Response, ApiError>;

pub fn router(state: Arc<AppState>, options: &ServeOptions) -> Router {
    let api = Router::new()
        .route("/api/catalog", get(get_catalog))
        .route("/api/project", get(get_project))
        .route("/api/assessments/{use_case}", get(get_assessments).put(put_assessments))
        .route("/api/reports/usecase/{id}", get(report_usecase))
        .route("/api/reports/service/{id}", get(report_service))
        .route("/api/reports/overall", get(report_overall))
        .route("/api/whatif", axum::routing::post(post_whatif))
        .route("/api/snapshots", get(list_snapshots).post(create_snapshot))
        .route("/api/snapshots/diff", get(diff_snapshots))
        .route("/api/{*rest}", any(not_found))
        .with_state(state);
    let mut app = match &options.static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.fallback(not_found),
    };
    if options.dev {
        app = app.layer(CorsLayer::permissive());
    }
    app
}

/// Serves until `shutdown` completes.
pub async fn serve(
    listener: tokio::net::TcpListener,
    state: Arc<AppState>,
    options: ServeOptions,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(state, &options))
        .with_graceful_shutdown(shutdown)
        .await
}

async fn not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not-found", "no such endpoint")
}

async fn get_catalog(State(s): State<Arc<AppState>>) -> Response {
    ok(&s.catalog)
}

async fn get_project(State(s): State<Arc<AppState>>) -> ApiResult {
    Ok(ok(s.store.load()?))
}

#[derive(Debug, Serialize)]
struct AssessmentList<'a> {
    use_case_id: &'a str,
    assessments: &'a [EnablerAssessment],
}

async fn get_assessments(State(s): State<Arc<AppState>>, UrlPath(reference): UrlPath<String>) -> ApiResult {
    let project = s.store.load()?;
    let uc = project.resolve_use_case(&s.catalog, &reference)?;
    Ok(ok(AssessmentList {
        use_case_id: &uc.id,
        assessments: project.assessments_for(&uc.id),
    }))
}

async fn put_assessments(
    State(s): State<Arc<AppState>>,
    UrlPath(reference): UrlPath<String>,
    body: Result<Json<Vec<AssessmentInput>>, JsonRejection>,
) -> ApiResult {
    let Json(inputs) = body?;
    let list = inputs
        .into_iter()
        .map(EnablerAssessment::try_from)
        .collect::<Result<Vec<_>, _>>()?;
    if list.is_empty() {
        return Err(ApiError::bad_request("empty", "assessment list is empty"));
    }
    let _guard = s.write.lock().await;
    let writer = s.store.writer()?;
    let mut project = s.store.load()?;
    let uc = project.resolve_use_case(&s.catalog, &reference)?.id.clone();
    project.assessments.insert(uc.clone(), list);
    writer.save_project(&project, &s.catalog)?;
    drop(writer);
    Ok(ok(use_case_report(&project, &s.catalog, &uc)?.sheet()))
}

async fn report_usecase(State(s): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> ApiResult {
    let project = s.store.load()?;
    Ok(ok(use_case_report(&project, &s.catalog, &id)?))
}

#[derive(Debug, Serialize)]
struct ServiceBody {
    #[serde(flatten)]
    progress: ServiceProgress,
    bars: Vec<ProgressBar>,
    unassessed_use_cases: Vec<String>,
}

async fn report_service(State(s): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> ApiResult {
    let project = s.store.load()?;
    let mut bundle = service_bundle(&project, &s.catalog, &id)?;
    let progress = bundle
        .service_progress
        .remove(&id)
        .ok_or_else(|| ApiError::bad_request("not-assessed", "service has no progress"))?;
    Ok(ok(ServiceBody {
        progress,
        bars: progress_report(&project, &s.catalog, &id)?.bars,
        unassessed_use_cases: bundle.unassessed_use_cases,
    }))
}

#[derive(Debug, Serialize)]
struct OverallBody {
    #[serde(flatten)]
    overall: OverallScores,
    unassessed_use_cases: Vec<String>,
}

async fn report_overall(State(s): State<Arc<AppState>>) -> ApiResult {
    let project = s.store.load()?;
    let bundle = overall_bundle(&project, &s.catalog)?;
    let overall = bundle
        .overall
        .ok_or_else(|| ApiError::bad_request("not-assessed", "no considered use case has assessments"))?;
    Ok(ok(OverallBody {
        overall,
        unassessed_use_cases: bundle.unassessed_use_cases,
    }))
}

async fn post_whatif(
    State(s): State<Arc<AppState>>,
    body: Result<Json<WhatIfRequest>, JsonRejection>,
) -> ApiResult {
    let Json(req) = body?;
    let project = s.store.load()?;
    Ok(ok(what_if(&project, &s.catalog, &req)?))
}

#[derive(Debug, Serialize)]
struct SnapshotList {
    snapshots: Vec<crate::store::SnapshotMeta>,
}

async fn list_snapshots(State(s): State<Arc<AppState>>) -> ApiResult {
    Ok(ok(SnapshotList {
        snapshots: s.store.list_snapshots()?,
    }))
}

#[derive(Debug, Default, Deserialize)]
struct SnapshotRequest {
    #[serde(default)]
    label: Option<String>,
}

async fn create_snapshot(
    State(s): State<Arc<AppState>>,
    body: Result<Json<SnapshotRequest>, JsonRejection>,
) -> ApiResult {
    let Json(req) = body?;
    let _guard = s.write.lock().await;
    let writer = s.store.writer()?;
    let project = s.store.load()?;
    let snap = writer.snapshot(&project, req.label.as_deref().unwrap_or("snapshot"))?;
    Ok(json_response(
        StatusCode::CREATED,
        crate::store::SnapshotMeta {
            id: snap.id,
            label: snap.label,
            timestamp: snap.timestamp,
        },
    ))
}

#[derive(Debug, Deserialize)]
struct DiffQuery {
    a: String,
    b: String,
}

#[derive(Debug, Serialize)]
struct DiffBody {
    a: String,
    b: String,
    diff: crf_core::DiffReport,
}

async fn diff_snapshots(
    State(s): State<Arc<AppState>>,
    query: Result<Query<DiffQuery>, axum::extract::rejection::QueryRejection>,
) -> ApiResult {
    let Query(q) = query.map_err(|e| ApiError::bad_request("bad-request", e.body_text()))?;
    let diff = s.store.diff_snapshots(&q.a, &q.b, &s.catalog)?;
    Ok(ok(DiffBody { a: q.a, b: q.b, diff }))
}
