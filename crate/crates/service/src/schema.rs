//! The description document at `/api/schema`. The estimator parameter
//! schemas come straight from the registry, so a form generated from it
//! can never drift from what the server validates.

use craft_core::f0::estimator_registry;
use serde_json::{json, Value};

use crate::analysis::{Analysis, Options, MAX_BENCH_K};
use crate::config::Config;

pub fn schema(config: &Config) -> Value {
    let estimators: Vec<Value> = estimator_registry()
        .iter()
        .map(|e| {
            json!({
                "label": e.label,
                "description": e.description,
                "params": e.params,
            })
        })
        .collect();
    let analyses: Vec<&str> = Analysis::ALL.iter().map(|a| a.name()).collect();
    json!({
        "title": "craft prosody analysis API",
        "version": env!("CARGO_PKG_VERSION"),
        "endpoints": [
            {"method": "GET", "path": "/api/clips", "summary": "bundled clip catalog"},
            {"method": "POST", "path": "/api/audio", "summary": "upload a WAV file (multipart), returns a token",
             "request": "multipart/form-data, first file part is the WAV"},
            {"method": "POST", "path": "/api/analyze", "summary": "run analyses on a clip or uploaded token",
             "request": {"clip": "string", "token": "string", "estimator": "string", "params": "object",
                         "analyses": "array", "options": "object"}},
            {"method": "POST", "path": "/api/compare", "summary": "correlation matrix, optional benchmark",
             "request": {"clip": "string", "token": "string", "configs": "array of {estimator, params, label}",
                         "tracks": "array of {source, times_s, f0_hz}", "n": "integer", "benchmark": "boolean",
                         "k": "integer"}},
            {"method": "GET", "path": "/api/schema", "summary": "this document"},
        ],
        "estimators": estimators,
        "analyses": analyses,
        "options_defaults": Options::default(),
        "limits": {
            "upload_bytes": config.upload_limit,
            "upload_ttl_s": config.upload_ttl.as_secs(),
            "benchmark_k_min": craft::bench::MIN_ITERATIONS,
            "benchmark_k_max": MAX_BENCH_K,
        },
    })
}
