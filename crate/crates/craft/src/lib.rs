//! Std companion to `craft-core`: WAV decoding, track files, benchmarks,
//! SVG plots and the `craft` command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod cli;
pub mod error;
pub mod svg;
pub mod tables;
pub mod track_io;
pub mod wav;

pub use craft_core as core;
pub use error::{Error, Result};
