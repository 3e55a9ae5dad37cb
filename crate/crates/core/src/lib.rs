//! Speech prosody analysis primitives.
//!
//! The crate covers the whole analysis chain used for teaching and comparing
//! F0 trackers and envelope spectra:
//!
//! * [`signal`]: the [`Signal`] type, framing, and linear resampling.
//! * [`dsp`]: FFT magnitude, brick-wall filters, center clipping, moving
//!   maximum, median smoothing, Hilbert envelope and the spectrogram.
//! * [`f0`]: the SOFT tracker (clip, filter, per-frame candidate, gate,
//!   range clip, median smoothing) and an AMDF tracker.
//! * [`rhythm`]: AM and FM envelopes, envelope spectra and rhythm-zone edges.
//! * [`contour`]: local and global polynomial models of F0 contours.
//! * [`eval`]: length normalisation, Pearson correlation and comparison
//!   matrices.
//!
//! Everything here is a pure function of its inputs. The crate is `no_std`
//! and only needs `alloc`; file formats, timing and the command line live in
//! the `craft` companion crate.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod contour;
pub mod dsp;
mod error;
pub mod eval;
pub mod f0;
pub mod fft;
pub mod fixtures;
pub mod rhythm;
pub mod signal;
pub(crate) mod util;

pub use error::{Error, Result};
pub use signal::{FrameSpec, Signal, WindowFn};
