//! Average magnitude difference function tracker.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::signal::Signal;

use super::{check_frame_fits, check_median_win, check_range, finish_track, frame_geometry, F0Track};

/// A dip counts as the period when it lies within this fraction of the dip
/// depth above the global minimum. Multiples of the true period dip almost
/// as deep, so the earliest such dip wins.
const SUBHARMONIC_GUARD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AmdfParams {
    pub frame_ms: f64,
    pub hop_ms: f64,
    pub f_min: f64,
    pub f_max: f64,
    /// Required relative dip depth `(mean - min) / mean` for a voiced frame.
    pub dip_ratio: f64,
    pub median_win: usize,
}

impl Default for AmdfParams {
    fn default() -> Self {
        AmdfParams {
            frame_ms: 40.0,
            hop_ms: 10.0,
            f_min: 60.0,
            f_max: 400.0,
            dip_ratio: 0.3,
            median_win: 5,
        }
    }
}

impl AmdfParams {
    pub fn validate(&self, rate: f64) -> Result<()> {
        check_range(rate, self.f_min, self.f_max)?;
        if !(self.dip_ratio > 0.0 && self.dip_ratio < 1.0) {
            return Err(Error::param("dip_ratio", "must lie in (0, 1)"));
        }
        check_median_win(self.median_win)?;
        let spec = frame_geometry(rate, self.frame_ms, self.hop_ms)?;
        check_frame_fits(rate, spec.frame_len, self.f_min)
    }
}

/// Normalised AMDF of one frame for lags `min_lag..=max_lag`.
fn amdf_curve(frame: &[f64], min_lag: usize, max_lag: usize) -> Vec<f64> {
    let len = frame.len();
    (min_lag..=max_lag)
        .map(|lag| {
            let n = len - lag;
            let sum: f64 = frame[..n].iter().zip(&frame[lag..]).map(|(a, b)| (a - b).abs()).sum();
            sum / n as f64
        })
        .collect()
}

/// Period estimate for one frame, in Hz; `None` when the dip is too shallow.
pub fn amdf_frame(frame: &[f64], rate: f64, f_min: f64, f_max: f64, dip_ratio: f64) -> Option<f64> {
    let min_lag = (libm::ceil(rate / f_max) as usize).max(1);
    let max_lag = (libm::floor(rate / f_min) as usize).min(frame.len().saturating_sub(1));
    if max_lag <= min_lag {
        return None;
    }
    let curve = amdf_curve(frame, min_lag, max_lag);
    let mean = curve.iter().sum::<f64>() / curve.len() as f64;
    let min = curve.iter().copied().fold(f64::INFINITY, f64::min);
    if !(mean > 0.0) || (mean - min) / mean < dip_ratio {
        return None;
    }
    let accept = min + SUBHARMONIC_GUARD * (mean - min);
    let last = curve.len() - 1;
    let best = (0..curve.len()).find(|&i| {
        let v = curve[i];
        v <= accept && (i == 0 || curve[i - 1] >= v) && (i == last || curve[i + 1] >= v)
    })?;
    Some(rate / (min_lag + best) as f64)
}

/// AMDF tracker over the raw signal, followed by the shared range clip and
/// median smoothing.
pub fn amdf_estimate(signal: &Signal, params: &AmdfParams) -> Result<F0Track> {
    let rate = signal.rate();
    params.validate(rate)?;
    let spec = frame_geometry(rate, params.frame_ms, params.hop_ms)?;
    let count = spec.frame_count(signal.len());
    if count == 0 {
        return Err(Error::SignalTooShort);
    }
    let x = signal.samples();
    let raw = (0..count)
        .map(|i| {
            let frame = &x[i * spec.hop..i * spec.hop + spec.frame_len];
            amdf_frame(frame, rate, params.f_min, params.f_max, params.dip_ratio).unwrap_or(0.0)
        })
        .collect();
    finish_track(
        raw,
        signal,
        &spec,
        params.f_min,
        params.f_max,
        params.median_win,
        "amdf",
    )
}
