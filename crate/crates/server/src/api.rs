//! `/v1` HTTP endpoints.
//!
//! Bodies are parsed here rather than through the `Json` extractor so that
//! every malformed request maps to a 400 with a field path.

use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tower_http::cors::{AllowOrigin, Any, CorsLayer};
use tower_http::services::ServeDir;

use ai_footprint::data::DataBundle;
use ai_footprint::portfolio::PortfolioSpec;
use ai_footprint::report::{to_json, Format, Report};
use ai_footprint::Error;

use crate::ops::{self, Lookup, OffsetRequest, ProjectRequest, SweepRequest};

/// Immutable state shared by all requests.
#[derive(Clone)]
pub struct AppState {
    pub bundle: Arc<DataBundle>,
}

#[derive(Debug, Clone, Default)]
pub struct ServeOptions {
    /// Allowed CORS origins; empty allows any.
    pub origins: Vec<String>,
    /// Directory served under `/` (the built UI).
    pub static_dir: Option<PathBuf>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ErrorBody {
    pub error: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub field: Option<String>,
    pub message: String,
}

pub struct ApiError(StatusCode, ErrorBody);

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let (status, kind, field) = match &e {
            Error::Unreachable { .. } => (StatusCode::UNPROCESSABLE_ENTITY, "unreachable", None),
            Error::InvalidInput { field, .. } => (
                StatusCode::BAD_REQUEST,
                "invalid_input",
                Some(field.clone()),
            ),
            Error::Distribution { field, .. } => {
                (StatusCode::BAD_REQUEST, "distribution", Some(field.clone()))
            }
            Error::Validation { path, .. } => {
                (StatusCode::BAD_REQUEST, "validation", Some(path.clone()))
            }
            Error::Io(_) => (StatusCode::INTERNAL_SERVER_ERROR, "io", None),
            _ => (StatusCode::BAD_REQUEST, "invalid_input", None),
        };
        ApiError(
            status,
            ErrorBody {
                error: kind.into(),
                field,
                message,
            },
        )
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = to_json(&self.1).unwrap_or_else(|_| "{}".into());
        (self.0, [(header::CONTENT_TYPE, "application/json")], body).into_response()
    }
}

fn json_response(text: String) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], text).into_response()
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| {
        let path = match e.classify() {
            serde_json::error::Category::Data => field_hint(&e.to_string()),
            _ => None,
        };
        ApiError(
            StatusCode::BAD_REQUEST,
            ErrorBody {
                error: "bad_request".into(),
                field: path,
                message: e.to_string(),
            },
        )
    })
}

/// Pull a backticked field name out of a serde message, if there is one.
fn field_hint(msg: &str) -> Option<String> {
    let start = msg.find('`')? + 1;
    let len = msg[start..].find('`')?;
    Some(msg[start..start + len].to_string())
}

fn is_blank(body: &Bytes) -> bool {
    body.iter().all(u8::is_ascii_whitespace)
}

async fn run<F>(f: F) -> Result<Response, ApiError>
where
    F: FnOnce() -> ai_footprint::Result<Report> + Send + 'static,
{
    let report = tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::from(Error::Io(e.to_string())))??;
    Ok(json_response(report.render(Format::Json)?))
}

async fn clusters(State(s): State<AppState>) -> Result<Response, ApiError> {
    run(move || ops::clusters(&s.bundle)).await
}

async fn scenarios(State(s): State<AppState>) -> Result<Response, ApiError> {
    Ok(json_response(to_json(ops::scenarios(&s.bundle))?))
}

#[derive(Deserialize)]
struct ScoreQuery {
    kwh: Option<String>,
}

async fn score(Query(q): Query<ScoreQuery>) -> Result<Response, ApiError> {
    let raw = q.kwh.ok_or_else(|| Error::InvalidInput {
        field: "kwh".into(),
        reason: "missing query parameter".into(),
    })?;
    let kwh: f64 = raw.trim().parse().map_err(|_| Error::InvalidInput {
        field: "kwh".into(),
        reason: format!("`{raw}` is not a number"),
    })?;
    Ok(json_response(ops::score(kwh)?.render(Format::Json)?))
}

async fn portfolio(State(s): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let spec: Option<PortfolioSpec> = if is_blank(&body) {
        None
    } else {
        Some(parse_body(&body)?)
    };
    run(move || ops::portfolio(&s.bundle, spec.as_ref())).await
}

async fn project(State(s): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: ProjectRequest = if is_blank(&body) {
        ProjectRequest::default()
    } else {
        parse_body(&body)?
    };
    run(move || ops::project(&s.bundle, Lookup::Presets, &req)).await
}

async fn sweep(State(s): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: SweepRequest = parse_body(&body)?;
    run(move || ops::sweep(&s.bundle, Lookup::Presets, &req)).await
}

async fn offset(State(s): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: OffsetRequest = parse_body(&body)?;
    run(move || ops::offset(&s.bundle, Lookup::Presets, &req)).await
}

async fn not_found() -> ApiError {
    ApiError(
        StatusCode::NOT_FOUND,
        ErrorBody {
            error: "not_found".into(),
            field: None,
            message: "no such endpoint".into(),
        },
    )
}

fn cors(origins: &[String]) -> CorsLayer {
    let layer = CorsLayer::new()
        .allow_methods([Method::GET, Method::POST, Method::OPTIONS])
        .allow_headers([header::CONTENT_TYPE]);
    if origins.is_empty() {
        layer.allow_origin(Any)
    } else {
        let list: Vec<HeaderValue> = origins.iter().filter_map(|o| o.parse().ok()).collect();
        layer.allow_origin(AllowOrigin::list(list))
    }
}

pub fn router(bundle: DataBundle, opts: &ServeOptions) -> Router {
    let state = AppState {
        bundle: Arc::new(bundle),
    };
    let v1 = Router::new()
        .route("/clusters", get(clusters))
        .route("/scenarios", get(scenarios))
        .route("/score", get(score))
        .route("/portfolio", post(portfolio))
        .route("/project", post(project))
        .route("/sweep", post(sweep))
        .route("/offset", post(offset))
        .fallback(not_found)
        .with_state(state);
    let mut app = Router::new().nest("/v1", v1);
    if let Some(dir) = &opts.static_dir {
        app = app.fallback_service(ServeDir::new(dir));
    }
    app.layer(cors(&opts.origins))
}

/// Bind and serve until the process is stopped.
pub async fn serve(
    bundle: DataBundle,
    addr: std::net::SocketAddr,
    opts: ServeOptions,
) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(bundle, &opts)).await
}
