//! Audio samples, analysis frames and resampling.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::util;

/// Mono audio with its sample rate. Samples are nominally in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Signal {
    samples: Vec<f64>,
    sample_rate: u32,
}

impl Signal {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::InvalidSampleRate(sample_rate));
        }
        if samples.is_empty() {
            return Err(Error::EmptySignal);
        }
        Ok(Signal { samples, sample_rate })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn rate(&self) -> f64 {
        self.sample_rate as f64
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.rate()
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, x| f64::max(m, x.abs()))
    }

    /// Scales the signal down so that no sample exceeds 1 in magnitude.
    /// Signals already within range are returned unchanged.
    pub fn normalized(mut self) -> Self {
        let peak = self.peak();
        if peak > 1.0 {
            for x in &mut self.samples {
                *x /= peak;
            }
        }
        self
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}

/// Analysis window applied to each frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum WindowFn {
    #[default]
    Rectangular,
    Hann,
    Hamming,
}

impl WindowFn {
    /// Window coefficient `k` of a window of length `len` (symmetric form).
    pub fn coefficient(self, k: usize, len: usize) -> f64 {
        if len < 2 {
            return 1.0;
        }
        let phase = 2.0 * PI * k as f64 / (len - 1) as f64;
        match self {
            WindowFn::Rectangular => 1.0,
            WindowFn::Hann => 0.5 - 0.5 * libm::cos(phase),
            WindowFn::Hamming => 0.54 - 0.46 * libm::cos(phase),
        }
    }

    pub fn coefficients(self, len: usize) -> Vec<f64> {
        (0..len).map(|k| self.coefficient(k, len)).collect()
    }
}

/// Frame geometry in samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrameSpec {
    pub frame_len: usize,
    pub hop: usize,
    pub window: WindowFn,
}

impl FrameSpec {
    pub fn new(frame_len: usize, hop: usize, window: WindowFn) -> Result<Self> {
        if frame_len == 0 {
            return Err(Error::param("frame_len", "must be positive"));
        }
        if hop == 0 || hop > frame_len {
            return Err(Error::param("hop", "must satisfy 0 < hop <= frame_len"));
        }
        Ok(FrameSpec { frame_len, hop, window })
    }

    /// Number of whole frames that fit into `n` samples.
    pub fn frame_count(&self, n: usize) -> usize {
        if n < self.frame_len {
            0
        } else {
            (n - self.frame_len) / self.hop + 1
        }
    }

    /// Centre time of frame `i` in seconds.
    pub fn center_time(&self, i: usize, rate: f64) -> f64 {
        (i * self.hop) as f64 / rate + (self.frame_len as f64 / 2.0) / rate
    }
}

/// Splits `signal` into windowed frames. Frame `i` starts at sample `i * hop`.
/// A signal shorter than one frame yields no frames.
pub fn frames(signal: &Signal, spec: &FrameSpec) -> Vec<Vec<f64>> {
    frames_of(signal.samples(), spec)
}

pub(crate) fn frames_of(samples: &[f64], spec: &FrameSpec) -> Vec<Vec<f64>> {
    let window = spec.window.coefficients(spec.frame_len);
    (0..spec.frame_count(samples.len()))
        .map(|i| {
            let start = i * spec.hop;
            samples[start..start + spec.frame_len]
                .iter()
                .zip(&window)
                .map(|(x, w)| x * w)
                .collect()
        })
        .collect()
}

/// Linear-interpolation resampler.
///
/// The output holds `round(len * target / rate)` samples (at least two when
/// the input has two) and
/// maps the first and last input samples onto the first and last output
/// samples exactly.
pub fn resample(signal: &Signal, target_rate: u32) -> Result<Signal> {
    if target_rate == 0 {
        return Err(Error::InvalidSampleRate(target_rate));
    }
    if target_rate == signal.sample_rate {
        return Ok(signal.clone());
    }
    let out_len = resampled_len(signal.len(), signal.rate(), target_rate as f64);
    Signal::new(util::stretch(signal.samples(), out_len), target_rate)
}

pub(crate) fn resampled_len(len: usize, rate: f64, target: f64) -> usize {
    let n = libm::round(len as f64 * target / rate) as usize;
    // two samples are needed to keep both endpoints
    n.max(len.min(2))
}
