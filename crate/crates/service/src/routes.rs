use std::sync::Arc;

use axum::extract::multipart::MultipartRejection;
use axum::extract::rejection::JsonRejection;
use axum::extract::{DefaultBodyLimit, FromRequest, Multipart, Request, State};
use axum::http::{HeaderValue, Method, StatusCode};
use axum::routing::{get, post};
use axum::{Json, Router};
use craft_core::Signal;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;
use tower_http::cors::CorsLayer;
use tower_http::trace::TraceLayer;

use crate::analysis::{check_report, AnalysisBundle, AnalyzeRequest, CompareRequest, CompareResponse};
use crate::clips::{Catalog, ClipEntry};
use crate::config::Config;
use crate::error::{ApiError, ApiResult};
use crate::store::{Lookup, UploadStore};
use crate::worker::SerialWorker;

// Room for multipart boundaries and part headers on top of the WAV itself.
const MULTIPART_SLACK: usize = 64 * 1024;

pub struct AppState {
    pub config: Config,
    pub catalog: Catalog,
    pub uploads: UploadStore,
    pub bench: SerialWorker,
}

impl AppState {
    pub fn new(config: Config, catalog: Catalog) -> Self {
        AppState {
            uploads: UploadStore::new(config.upload_ttl),
            bench: SerialWorker::spawn("craft-bench"),
            config,
            catalog,
        }
    }

    /// The audio a request refers to, by clip id or upload token.
    pub fn source(&self, clip: Option<&str>, token: Option<&str>) -> ApiResult<(String, Arc<Signal>)> {
        match (clip, token) {
            (Some(_), Some(_)) => Err(ApiError::invalid("token", "give either clip or token, not both")),
            (None, None) => Err(ApiError::invalid(
                "clip",
                "no audio source: give a clip id or an upload token",
            )),
            (Some(id), None) => self
                .catalog
                .get(id)
                .map(|c| (id.to_string(), c.signal.clone()))
                .ok_or_else(|| ApiError::not_found("clip", format!("unknown clip \"{id}\""))),
            (None, Some(t)) => match self.uploads.get(t) {
                Lookup::Live(s) => Ok(("upload".to_string(), s)),
                Lookup::Expired => Err(ApiError::new(StatusCode::GONE, "upload token has expired").with_field("token")),
                Lookup::Unknown => Err(ApiError::not_found("token", "unknown upload token")),
            },
        }
    }
}

/// JSON body extractor whose rejections use the API error shape.
pub struct ApiJson<T>(pub T);

impl<T, S> FromRequest<S> for ApiJson<T>
where
    T: DeserializeOwned,
    S: Send + Sync,
{
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, Self::Rejection> {
        match Json::<T>::from_request(req, state).await {
            Ok(Json(v)) => Ok(ApiJson(v)),
            Err(rejection) => Err(json_rejection(rejection)),
        }
    }
}

fn json_rejection(rejection: JsonRejection) -> ApiError {
    match rejection {
        JsonRejection::JsonDataError(e) => {
            let text = e.body_text();
            let detail = text.split_once("target type: ").map_or(text.as_str(), |(_, d)| d);
            let mut err = ApiError::invalid("body", detail.to_string());
            err.field = Some(field_of(detail));
            err
        }
        JsonRejection::MissingJsonContentType(e) => ApiError::new(StatusCode::UNSUPPORTED_MEDIA_TYPE, e.body_text()),
        other => ApiError::new(StatusCode::BAD_REQUEST, other.body_text()),
    }
}

/// Best guess at the offending field from a deserialisation message such
/// as `params.clip_ratio: invalid type` or `unknown field \`foo\``.
pub fn field_of(detail: &str) -> String {
    let (path, msg) = detail.split_once(": ").unwrap_or((".", detail));
    let named = |m: &str| {
        ["unknown field `", "missing field `"].iter().find_map(|p| {
            m.split_once(p)
                .and_then(|(_, rest)| rest.split_once('`'))
                .map(|(f, _)| f.to_string())
        })
    };
    if path == "." || path.is_empty() {
        return named(msg).unwrap_or_else(|| "body".into());
    }
    if msg.starts_with("unknown field `") {
        if let Some(f) = named(msg) {
            return f;
        }
    }
    let last = path.rsplit('.').next().unwrap_or(path);
    last.split('[').next().unwrap_or(last).to_string()
}

async fn clips(State(state): State<Arc<AppState>>) -> Json<Vec<ClipEntry>> {
    Json(state.catalog.entries().into_iter().cloned().collect())
}

async fn api_schema(State(state): State<Arc<AppState>>) -> Json<Value> {
    Json(crate::schema::schema(&state.config))
}

#[derive(Debug, Serialize)]
pub struct UploadResponse {
    pub token: String,
    pub duration_s: f64,
    pub sample_rate: u32,
    pub expires_in_s: u64,
}

fn too_large(limit: usize) -> ApiError {
    ApiError::new(
        StatusCode::PAYLOAD_TOO_LARGE,
        format!("upload exceeds the {limit}-byte limit"),
    )
    .with_field("file")
}

async fn upload(
    State(state): State<Arc<AppState>>,
    multipart: Result<Multipart, MultipartRejection>,
) -> ApiResult<Json<UploadResponse>> {
    let limit = state.config.upload_limit;
    let mut multipart = multipart.map_err(|e| {
        ApiError::invalid(
            "file",
            format!("expected a multipart/form-data WAV upload: {}", e.body_text()),
        )
    })?;
    let field = multipart.next_field().await.map_err(|e| {
        if e.status() == StatusCode::PAYLOAD_TOO_LARGE {
            too_large(limit)
        } else {
            ApiError::invalid("file", e.body_text())
        }
    })?;
    let Some(field) = field else {
        return Err(ApiError::invalid("file", "no file in upload"));
    };
    let bytes = field.bytes().await.map_err(|e| {
        if e.status() == StatusCode::PAYLOAD_TOO_LARGE {
            too_large(limit)
        } else {
            ApiError::invalid("file", e.body_text())
        }
    })?;
    if bytes.len() > limit {
        return Err(too_large(limit));
    }
    let signal = tokio::task::spawn_blocking(move || craft::wav::decode_wav(&bytes))
        .await
        .map_err(internal)?
        .map_err(|e| ApiError::invalid("file", e.to_string()))?;
    let response = UploadResponse {
        duration_s: signal.duration(),
        sample_rate: signal.sample_rate(),
        expires_in_s: state.uploads.ttl().as_secs(),
        token: state.uploads.insert(signal),
    };
    Ok(Json(response))
}

fn internal(e: impl std::fmt::Display) -> ApiError {
    ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, format!("internal error: {e}"))
}

async fn analyze(
    State(state): State<Arc<AppState>>,
    ApiJson(req): ApiJson<AnalyzeRequest>,
) -> ApiResult<Json<AnalysisBundle>> {
    let plan = req.plan()?;
    let (source, signal) = state.source(req.clip.as_deref(), req.token.as_deref())?;
    let bundle = tokio::task::spawn_blocking(move || plan.run(&signal, &source))
        .await
        .map_err(internal)??;
    Ok(Json(bundle))
}

async fn compare(
    State(state): State<Arc<AppState>>,
    ApiJson(req): ApiJson<CompareRequest>,
) -> ApiResult<Json<CompareResponse>> {
    let plan = req.plan()?;
    let signal = if plan.needs_audio() || req.clip.is_some() || req.token.is_some() {
        Some(state.source(req.clip.as_deref(), req.token.as_deref())?.1)
    } else {
        None
    };
    let plan = Arc::new(plan);
    let (p, s) = (plan.clone(), signal.clone());
    let mut response = tokio::task::spawn_blocking(move || p.run(s.as_deref()))
        .await
        .map_err(internal)??;
    if let (Some(k), Some(signal)) = (plan.k, signal) {
        let p = plan.clone();
        let timings = state
            .bench
            .run(move || {
                p.configs
                    .iter()
                    .map(|(info, cfg)| {
                        craft::bench::benchmark(info, &cfg.params, &signal, k).map(|mut t| {
                            t.label = cfg.label.clone();
                            t
                        })
                    })
                    .collect::<craft::Result<Vec<_>>>()
            })
            .await
            .ok_or_else(|| internal("benchmark worker stopped"))??;
        response.report.timings = timings;
        response.report.k = Some(k);
        check_report(&response.report)?;
    }
    Ok(Json(response))
}

async fn not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "no such endpoint")
}

async fn method_not_allowed() -> ApiError {
    ApiError::new(StatusCode::METHOD_NOT_ALLOWED, "method not allowed for this endpoint")
}

/// The full router.
pub fn app(state: AppState) -> Result<Router, String> {
    let body_limit = state.config.upload_limit.saturating_add(MULTIPART_SLACK);
    let cors = cors_layer(&state.config.cors_origins)?;
    let mut router = Router::new()
        .route("/api/clips", get(clips))
        .route("/api/schema", get(api_schema))
        .route("/api/audio", post(upload))
        .route("/api/analyze", post(analyze))
        .route("/api/compare", post(compare))
        .fallback(not_found)
        .method_not_allowed_fallback(method_not_allowed)
        .layer(DefaultBodyLimit::max(body_limit))
        .layer(TraceLayer::new_for_http())
        .with_state(Arc::new(state));
    if let Some(cors) = cors {
        router = router.layer(cors);
    }
    Ok(router)
}

fn cors_layer(origins: &[String]) -> Result<Option<CorsLayer>, String> {
    if origins.is_empty() {
        return Ok(None);
    }
    let values = origins
        .iter()
        .map(|o| HeaderValue::from_str(o.trim()).map_err(|_| format!("invalid CORS origin {o:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Some(
        CorsLayer::new()
            .allow_origin(values)
            .allow_methods([Method::GET, Method::POST])
            .allow_headers([axum::http::header::CONTENT_TYPE]),
    ))
}
