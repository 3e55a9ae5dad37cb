//! HTTP JSON service over the analyses: a clip catalog, WAV uploads,
//! analysis bundles, comparisons with optional benchmarks, and a parameter
//! schema document. Every response body is JSON.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod clips;
pub mod config;
pub mod error;
pub mod routes;
pub mod schema;
pub mod store;
pub mod worker;

pub use config::Config;
pub use error::ApiError;
pub use routes::{app, AppState};
