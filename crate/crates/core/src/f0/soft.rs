//! SOFT: a simple F0 tracker built only from basic signal-processing steps.
//!
//! Pipeline: center clip, low-pass, high-pass, a per-frame frequency
//! candidate (FFT harmonic peak, zero-crossing interval, or peak interval),
//! an RMS voicing gate, range clipping and median smoothing.

use alloc::vec::Vec;

use crate::dsp;
use crate::error::{Error, Result};
use crate::fft::{fast_len, RealFft};
use crate::signal::Signal;
use crate::util;

use super::{check_frame_fits, check_median_win, check_range, finish_track, frame_geometry, F0Track};

/// Minimum magnitude, relative to the strongest peak, for a submultiple
/// to count as the fundamental.
pub const DEFAULT_HARMONIC_FLOOR: f64 = 0.25;

/// Per-frame frequency measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SoftMethod {
    #[default]
    FftHarmonic,
    ZeroCrossing,
    PeakPicking,
}

impl SoftMethod {
    pub const ALL: [SoftMethod; 3] = [
        SoftMethod::FftHarmonic,
        SoftMethod::ZeroCrossing,
        SoftMethod::PeakPicking,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SoftMethod::FftHarmonic => "fft_harmonic",
            SoftMethod::ZeroCrossing => "zero_crossing",
            SoftMethod::PeakPicking => "peak_picking",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SoftParams {
    /// Center-clipping threshold as a fraction of the peak magnitude.
    pub clip_ratio: f64,
    pub lp_cutoff: f64,
    pub hp_cutoff: f64,
    pub frame_ms: f64,
    pub hop_ms: f64,
    pub method: SoftMethod,
    pub f_min: f64,
    pub f_max: f64,
    pub median_win: usize,
    /// Frames whose RMS is at or below this fraction of the global RMS are unvoiced.
    pub voicing_rms: f64,
}

impl Default for SoftParams {
    fn default() -> Self {
        SoftParams {
            clip_ratio: 0.3,
            lp_cutoff: 900.0,
            hp_cutoff: 60.0,
            frame_ms: 40.0,
            hop_ms: 10.0,
            method: SoftMethod::FftHarmonic,
            f_min: 60.0,
            f_max: 400.0,
            median_win: 5,
            voicing_rms: 0.1,
        }
    }
}

impl SoftParams {
    pub fn with_method(self, method: SoftMethod) -> Self {
        SoftParams { method, ..self }
    }

    /// Checks every constraint that depends on the sample rate as well.
    pub fn validate(&self, rate: f64) -> Result<()> {
        if !(0.0..1.0).contains(&self.clip_ratio) {
            return Err(Error::param("clip_ratio", "must lie in [0, 1)"));
        }
        check_range(rate, self.f_min, self.f_max)?;
        if !(self.hp_cutoff > 0.0) {
            return Err(Error::param("hp_cutoff", "must be positive"));
        }
        if !(self.hp_cutoff < self.lp_cutoff) {
            return Err(Error::param("hp_cutoff", "must be below lp_cutoff"));
        }
        if !(self.lp_cutoff < rate / 2.0) {
            return Err(Error::param("lp_cutoff", "must be below the Nyquist frequency"));
        }
        if !(self.voicing_rms >= 0.0) {
            return Err(Error::param("voicing_rms", "must be non-negative"));
        }
        check_median_win(self.median_win)?;
        let spec = frame_geometry(rate, self.frame_ms, self.hop_ms)?;
        check_frame_fits(rate, spec.frame_len, self.f_min)
    }
}

/// Runs the SOFT pipeline over `signal`.
pub fn soft_estimate(signal: &Signal, params: &SoftParams) -> Result<F0Track> {
    let rate = signal.rate();
    params.validate(rate)?;
    let spec = frame_geometry(rate, params.frame_ms, params.hop_ms)?;
    if spec.frame_count(signal.len()) == 0 {
        return Err(Error::SignalTooShort);
    }

    let clipped = dsp::center_clip(signal.samples(), params.clip_ratio)?;
    let x = dsp::band_limit(&clipped, rate, params.hp_cutoff, params.lp_cutoff)?;

    let gate = params.voicing_rms * util::rms(&x);
    let harmonic = HarmonicPicker::new(spec.frame_len);
    let raw: Vec<f64> = (0..spec.frame_count(x.len()))
        .map(|i| {
            let frame = &x[i * spec.hop..i * spec.hop + spec.frame_len];
            if util::rms(frame) <= gate {
                return 0.0;
            }
            let candidate = match params.method {
                SoftMethod::FftHarmonic => {
                    harmonic.candidate(frame, rate, params.f_min, params.f_max, DEFAULT_HARMONIC_FLOOR)
                }
                SoftMethod::ZeroCrossing => frame_zcr_candidate(frame, rate),
                SoftMethod::PeakPicking => frame_peak_candidate(frame, rate),
            };
            candidate.unwrap_or(0.0)
        })
        .collect();

    finish_track(
        raw,
        signal,
        &spec,
        params.f_min,
        params.f_max,
        params.median_win,
        "soft",
    )
}

/// Strongest-and-lowest harmonic peak picker with a cached transform plan.
struct HarmonicPicker {
    plan: RealFft,
    window: Vec<f64>,
}

impl HarmonicPicker {
    fn new(frame_len: usize) -> Self {
        // two-times oversampled spectrum keeps the +-1 bin harmonic test tighter
        // than the Hann main lobe
        let n = fast_len(2 * frame_len);
        HarmonicPicker {
            plan: RealFft::new(n),
            window: crate::signal::WindowFn::Hann.coefficients(frame_len),
        }
    }

    fn candidate(&self, frame: &[f64], rate: f64, f_min: f64, f_max: f64, floor: f64) -> Option<f64> {
        let windowed: Vec<f64> = frame.iter().zip(&self.window).map(|(x, w)| x * w).collect();
        let spectrum = dsp::magnitude_with(&self.plan, &windowed, rate);
        pick_harmonic(&spectrum, f_min, f_max, floor)
    }
}

fn is_local_peak(mags: &[f64], i: usize) -> bool {
    i > 0 && i + 1 < mags.len() && mags[i] >= mags[i - 1] && mags[i] >= mags[i + 1] && mags[i] > 0.0
}

/// Peak position refined by a parabola through the log magnitudes.
fn refine(mags: &[f64], i: usize) -> f64 {
    let (a, b, c) = (mags[i - 1], mags[i], mags[i + 1]);
    if a <= 0.0 || b <= 0.0 || c <= 0.0 {
        return i as f64;
    }
    let (la, lb, lc) = (libm::log(a), libm::log(b), libm::log(c));
    let denom = la - 2.0 * lb + lc;
    if denom >= 0.0 {
        return i as f64;
    }
    i as f64 + (0.5 * (la - lc) / denom).clamp(-0.5, 0.5)
}

fn pick_harmonic(spectrum: &dsp::Spectrum, f_min: f64, f_max: f64, floor: f64) -> Option<f64> {
    let mags = &spectrum.mags;
    let res = spectrum.resolution;
    let first = libm::ceil(f_min / res) as usize;
    let strongest = (first.max(1)..mags.len().saturating_sub(1))
        .filter(|&i| is_local_peak(mags, i))
        .fold(None, |best: Option<usize>, i| match best {
            Some(b) if mags[b] >= mags[i] => Some(b),
            _ => Some(i),
        })?;
    let peak_freq = refine(mags, strongest) * res;
    let threshold = floor * mags[strongest];

    let max_k = libm::floor(peak_freq / f_min) as usize;
    (1..=max_k.max(1)).rev().find_map(|k| {
        let cand = peak_freq / k as f64;
        if cand < f_min || cand > f_max {
            return None;
        }
        let centre = libm::round(cand / res) as isize;
        let supported = (centre - 1..=centre + 1).any(|j| {
            j > 0 && (j as usize) < mags.len() && is_local_peak(mags, j as usize) && mags[j as usize] >= threshold
        });
        supported.then_some(cand)
    })
}

/// FFT harmonic candidate for one frame: the lowest submultiple of the
/// strongest spectral peak that lies in `[f_min, f_max]` and is itself
/// backed by a spectral peak of at least `DEFAULT_HARMONIC_FLOOR` times the
/// strongest magnitude.
pub fn frame_fft_candidate(frame: &[f64], rate: f64, f_min: f64, f_max: f64) -> Option<f64> {
    if frame.is_empty() {
        return None;
    }
    HarmonicPicker::new(frame.len()).candidate(frame, rate, f_min, f_max, DEFAULT_HARMONIC_FLOOR)
}

/// Fraction of the frame peak a signal must dip below before the next rising
/// crossing counts. Suppresses ringing around zero.
pub const CROSSING_HYSTERESIS: f64 = 0.2;

/// Rising zero crossings at fractional sample positions, with hysteresis.
fn rising_crossings(frame: &[f64]) -> Vec<f64> {
    let peak = frame.iter().fold(0.0, |m: f64, x| m.max(x.abs()));
    let arm_below = -CROSSING_HYSTERESIS * peak;
    let mut armed = false;
    let mut out = Vec::new();
    for (i, w) in frame.windows(2).enumerate() {
        if w[0] < arm_below {
            armed = true;
        }
        if armed && w[0] < 0.0 && w[1] >= 0.0 {
            out.push(i as f64 + (-w[0]) / (w[1] - w[0]));
            armed = false;
        }
    }
    out
}

/// Period from the mean interval between rising zero crossings.
pub fn frame_zcr_candidate(frame: &[f64], rate: f64) -> Option<f64> {
    let crossings = rising_crossings(frame);
    if crossings.len() < 2 {
        return None;
    }
    let span = crossings[crossings.len() - 1] - crossings[0];
    let mean_interval = span / (crossings.len() - 1) as f64;
    (mean_interval > 0.0).then(|| rate / mean_interval)
}

/// Peak-interval candidate: zero crossings of the differenced frame.
pub fn frame_peak_candidate(frame: &[f64], rate: f64) -> Option<f64> {
    frame_zcr_candidate(&dsp::diff(frame), rate)
}
