use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;

/// An error response. Every 4xx body is `{"error": ..., "field": ...}` with
/// `field` omitted when the problem is not tied to one input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
}

impl ApiError {
    pub fn new(status: StatusCode, error: impl Into<String>) -> Self {
        ApiError {
            status,
            error: error.into(),
            field: None,
        }
    }

    pub fn invalid(field: &str, error: impl Into<String>) -> Self {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, error).with_field(field)
    }

    pub fn not_found(field: &str, error: impl Into<String>) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, error).with_field(field)
    }

    pub fn with_field(mut self, field: &str) -> Self {
        self.field = Some(field.to_string());
        self
    }
}

impl From<craft_core::Error> for ApiError {
    fn from(e: craft_core::Error) -> Self {
        use craft_core::Error as E;
        let field = match &e {
            E::UnknownEstimator(_) => Some("estimator"),
            other => other.field(),
        };
        let mut err = ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string());
        err.field = field.map(str::to_string);
        err
    }
}

impl From<craft::Error> for ApiError {
    fn from(e: craft::Error) -> Self {
        match e {
            craft::Error::Analysis(inner) => inner.into(),
            craft::Error::Usage(msg) => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, msg),
            other => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, other.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

pub type ApiResult<T> = Result<T, ApiError>;
