//! F0 estimation: the SOFT tracker and an AMDF tracker.
//!
//! Both estimators produce an [`F0Track`] on the same frame grid and share
//! the same post-processing: candidates outside `[f_min, f_max]` become 0,
//! then the track is median smoothed.

use alloc::string::String;
use alloc::vec::Vec;

use crate::dsp;
use crate::error::{Error, Result};
use crate::signal::{FrameSpec, Signal, WindowFn};

mod amdf;
mod registry;
mod soft;

pub use amdf::{amdf_estimate, amdf_frame, AmdfParams};
pub use registry::{estimator, estimator_registry, EstimatorInfo, ParamKind, ParamSet, ParamSpec, ParamValue};
pub use soft::{
    frame_fft_candidate, frame_peak_candidate, frame_zcr_candidate, soft_estimate, SoftMethod, SoftParams,
    DEFAULT_HARMONIC_FLOOR,
};

/// Frame-aligned F0 estimates. A value of exactly 0 marks an unvoiced frame.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct F0Track {
    /// Frame-centre times in seconds.
    pub times: Vec<f64>,
    /// Hz, 0 for unvoiced.
    pub f0: Vec<f64>,
    /// Frame length in samples; 0 when unknown (imported tracks).
    pub frame_len: usize,
    /// Hop in samples; 0 when unknown (imported tracks).
    pub hop: usize,
    pub source: String,
}

impl F0Track {
    pub fn new(times: Vec<f64>, f0: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if times.len() != f0.len() {
            return Err(Error::LengthMismatch {
                left: times.len(),
                right: f0.len(),
            });
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param("times", "must be strictly ascending"));
        }
        if f0.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::param("f0", "must be finite and non-negative"));
        }
        Ok(F0Track {
            times,
            f0,
            frame_len: 0,
            hop: 0,
            source: source.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.f0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f0.is_empty()
    }

    pub fn voiced_count(&self) -> usize {
        self.f0.iter().filter(|v| **v > 0.0).count()
    }

    /// Frames per second, taken from the first two frame times.
    pub fn frame_rate(&self) -> Option<f64> {
        match self.times.as_slice() {
            [a, b, ..] => Some(1.0 / (b - a)),
            _ => None,
        }
    }
}

/// Frame geometry converted from milliseconds at a given sample rate.
pub(crate) fn frame_geometry(rate: f64, frame_ms: f64, hop_ms: f64) -> Result<FrameSpec> {
    if !(frame_ms > 0.0) {
        return Err(Error::param("frame_ms", "must be positive"));
    }
    if !(hop_ms > 0.0) {
        return Err(Error::param("hop_ms", "must be positive"));
    }
    let frame_len = libm::round(frame_ms * rate / 1000.0) as usize;
    let hop = (libm::round(hop_ms * rate / 1000.0) as usize).max(1);
    if hop > frame_len {
        return Err(Error::param("hop_ms", "must not exceed frame_ms"));
    }
    FrameSpec::new(frame_len, hop, WindowFn::Rectangular)
}

pub(crate) fn check_range(rate: f64, f_min: f64, f_max: f64) -> Result<()> {
    if !(f_min > 0.0) {
        return Err(Error::param("f_min", "must be positive"));
    }
    if !(f_max > f_min) {
        return Err(Error::param("f_max", "must exceed f_min"));
    }
    if !(f_max < rate / 2.0) {
        return Err(Error::param("f_max", "must be below the Nyquist frequency"));
    }
    Ok(())
}

/// Two periods of the lowest frequency must fit into a frame.
pub(crate) fn check_frame_fits(rate: f64, frame_len: usize, f_min: f64) -> Result<()> {
    let needed = libm::ceil(2.0 * rate / f_min) as usize;
    if frame_len < needed {
        Err(Error::FrameTooShort { frame_len, needed })
    } else {
        Ok(())
    }
}

pub(crate) fn check_median_win(win: usize) -> Result<()> {
    if win == 0 || win.is_multiple_of(2) {
        Err(Error::param("median_win", "must be a positive odd integer"))
    } else {
        Ok(())
    }
}

/// Range clipping followed by median smoothing, then track assembly.
pub(crate) fn finish_track(
    raw: Vec<f64>,
    signal: &Signal,
    spec: &FrameSpec,
    f_min: f64,
    f_max: f64,
    median_win: usize,
    source: &str,
) -> Result<F0Track> {
    let clipped: Vec<f64> = raw
        .into_iter()
        .map(|f| if f >= f_min && f <= f_max { f } else { 0.0 })
        .collect();
    let f0 = dsp::median_filter(&clipped, median_win)?;
    let rate = signal.rate();
    let times = (0..f0.len()).map(|i| spec.center_time(i, rate)).collect();
    Ok(F0Track {
        times,
        f0,
        frame_len: spec.frame_len,
        hop: spec.hop,
        source: source.into(),
    })
}
