//! Amplitude and frequency demodulation, envelope spectra and rhythm-zone
//! edges.
//!
//! The AM envelope uses a peak detector: rectify, take a moving maximum,
//! low-pass, then decimate to a low envelope rate. The FM envelope is the
//! F0 track itself, median-interpolated and mean-removed. Both are turned
//! into magnitude spectra below a display limit (20 Hz by default), whose
//! prominent minima split the range into rhythm zones.

use alloc::vec::Vec;

use crate::contour::median_interpolate;
use crate::dsp::{self, Spectrum};
use crate::error::{Error, Result};
use crate::eval::{self, Correlation};
use crate::f0::F0Track;
use crate::signal::{resampled_len, Signal, WindowFn};
use crate::util;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum EnvelopeKind {
    Am,
    Fm,
}

/// A low-rate modulation trace.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Envelope {
    pub values: Vec<f64>,
    /// Hz.
    pub rate: f64,
    pub kind: EnvelopeKind,
}

impl Envelope {
    pub fn times(&self) -> Vec<f64> {
        (0..self.values.len()).map(|i| i as f64 / self.rate).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AmParams {
    /// Moving-maximum window, milliseconds.
    pub win_ms: f64,
    pub lp_cutoff: f64,
    pub out_rate: u32,
}

impl Default for AmParams {
    fn default() -> Self {
        AmParams {
            win_ms: 20.0,
            lp_cutoff: 24.0,
            out_rate: 100,
        }
    }
}

/// Peak-detector amplitude envelope.
pub fn am_envelope(signal: &Signal, params: &AmParams) -> Result<Envelope> {
    if !(params.win_ms > 0.0) {
        return Err(Error::param("win_ms", "must be positive"));
    }
    if params.out_rate == 0 {
        return Err(Error::param("out_rate", "must be positive"));
    }
    if !(params.lp_cutoff > 0.0 && params.lp_cutoff < params.out_rate as f64 / 2.0) {
        return Err(Error::param(
            "lp_cutoff",
            "must lie between 0 and half the envelope rate",
        ));
    }
    let rate = signal.rate();
    let mut win = (libm::round(params.win_ms * rate / 1000.0) as usize).max(1);
    if win.is_multiple_of(2) {
        win += 1;
    }
    let rectified: Vec<f64> = signal.samples().iter().map(|x| x.abs()).collect();
    let peaks = dsp::moving_max(&rectified, win)?;
    let smooth = dsp::lowpass(&peaks, rate, params.lp_cutoff)?;
    let out_len = resampled_len(smooth.len(), rate, params.out_rate as f64);
    Ok(Envelope {
        values: util::stretch(&smooth, out_len),
        rate: params.out_rate as f64,
        kind: EnvelopeKind::Am,
    })
}

/// Frequency-modulation envelope from an F0 track: unvoiced frames take the
/// median voiced F0, the mean is removed, and the result is resampled to
/// `out_rate`.
pub fn fm_envelope(track: &F0Track, out_rate: u32) -> Result<Envelope> {
    if track.voiced_count() < 2 {
        return Err(Error::NoVoicedFrames);
    }
    if out_rate == 0 {
        return Err(Error::param("out_rate", "must be positive"));
    }
    let frame_rate = track
        .frame_rate()
        .ok_or_else(|| Error::param("track", "need at least two frames"))?;
    let filled = median_interpolate(&track.f0)?;
    let mean = util::mean(&filled);
    let detrended: Vec<f64> = filled.iter().map(|v| v - mean).collect();
    let out_len = resampled_len(detrended.len(), frame_rate, out_rate as f64);
    let values = if out_len == detrended.len() {
        detrended
    } else {
        util::stretch(&detrended, out_len)
    };
    Ok(Envelope {
        values,
        rate: out_rate as f64,
        kind: EnvelopeKind::Fm,
    })
}

/// Magnitude spectrum of an envelope from DC to `display_max`: mean removed,
/// Hann windowed, zero padded to a power of two of at least four times the
/// envelope length.
pub fn envelope_spectrum(env: &Envelope, display_max: f64) -> Result<Spectrum> {
    if env.values.len() < 8 {
        return Err(Error::param("envelope", "need at least 8 samples"));
    }
    if !(display_max > 0.0 && display_max <= env.rate / 2.0) {
        return Err(Error::param("display_max", "must lie in (0, rate/2]"));
    }
    let mean = util::mean(&env.values);
    let window = WindowFn::Hann.coefficients(env.values.len());
    let prepared: Vec<f64> = env.values.iter().zip(&window).map(|(v, w)| (v - mean) * w).collect();
    let pad = (4 * prepared.len()).next_power_of_two();
    Ok(dsp::fft_magnitude(&prepared, env.rate, Some(pad))?.truncated(display_max))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EdgeParams {
    /// Moving-average width applied before differencing, bins (odd).
    pub smooth_win: usize,
    /// Required relative depth of a minimum below its lower neighbouring peak.
    pub prominence: f64,
}

impl Default for EdgeParams {
    fn default() -> Self {
        EdgeParams {
            smooth_win: 3,
            prominence: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RhythmZone {
    pub f_low: f64,
    pub f_high: f64,
    pub peak_freq: f64,
    pub peak_mag: f64,
}

/// Zone boundaries and the zones they delimit over `[0, display_max]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RhythmZoneSet {
    pub boundaries: Vec<f64>,
    pub zones: Vec<RhythmZone>,
    pub display_max: f64,
}

/// Highest value reachable from `i` by walking in one direction without
/// dropping below `mags[i]`.
fn shoulder(mags: &[f64], i: usize, leftwards: bool) -> f64 {
    let floor = mags[i];
    let mut best = floor;
    let mut j = i;
    loop {
        let next = if leftwards {
            match j.checked_sub(1) {
                Some(n) => n,
                None => break,
            }
        } else if j + 1 < mags.len() {
            j + 1
        } else {
            break;
        };
        if mags[next] < floor {
            break;
        }
        best = best.max(mags[next]);
        j = next;
    }
    best
}

/// Rhythm-zone edges: smooth the spectrum, difference it, and place a
/// boundary at every negative-to-non-negative sign change of the difference
/// whose minimum lies below `(1 - prominence)` times the lower of its two
/// neighbouring peaks.
///
/// `display_max` closes the last zone; it must not be below the highest bin.
pub fn jassem_edges(spec: &Spectrum, params: &EdgeParams, display_max: f64) -> Result<RhythmZoneSet> {
    if spec.mags.len() < 5 {
        return Err(Error::param("spectrum", "need at least 5 bins"));
    }
    if !(0.0..1.0).contains(&params.prominence) {
        return Err(Error::param("prominence", "must lie in [0, 1)"));
    }
    // half a bin of slack absorbs rounding in the caller's bin grid
    let last = spec.freqs[spec.freqs.len() - 1];
    if display_max < last - 0.5 * spec.resolution {
        return Err(Error::param("display_max", "must cover the whole spectrum"));
    }
    let smooth = dsp::moving_average(&spec.mags, params.smooth_win)?;
    let slope = dsp::diff(&smooth);
    let mut boundaries = Vec::new();
    for i in 1..slope.len() {
        if !(slope[i - 1] < 0.0 && slope[i] >= 0.0) {
            continue;
        }
        let peak = shoulder(&smooth, i, true).min(shoulder(&smooth, i, false));
        if smooth[i] < (1.0 - params.prominence) * peak {
            boundaries.push(spec.freqs[i]);
        }
    }

    let mut edges = Vec::with_capacity(boundaries.len() + 2);
    edges.push(0.0);
    edges.extend_from_slice(&boundaries);
    edges.push(display_max);
    let zones = edges
        .windows(2)
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            let (peak_freq, peak_mag) = spec
                .freqs
                .iter()
                .zip(&spec.mags)
                .filter(|(f, _)| **f >= lo && **f <= hi)
                .fold((lo, 0.0), |best, (f, m)| if *m > best.1 { (*f, *m) } else { best });
            RhythmZone {
                f_low: lo,
                f_high: hi,
                peak_freq,
                peak_mag,
            }
        })
        .collect();
    Ok(RhythmZoneSet {
        boundaries,
        zones,
        display_max,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RhythmParams {
    pub am: AmParams,
    pub display_max: f64,
    pub edges: EdgeParams,
    /// Common length for the AM/FM correlation.
    pub compare_len: usize,
}

impl Default for RhythmParams {
    fn default() -> Self {
        RhythmParams {
            am: AmParams::default(),
            display_max: 20.0,
            edges: EdgeParams::default(),
            compare_len: eval::DEFAULT_NORMALIZED_LEN,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RhythmReport {
    pub am: Envelope,
    pub fm: Envelope,
    pub aes: Spectrum,
    pub fes: Spectrum,
    pub am_zones: RhythmZoneSet,
    pub fm_zones: RhythmZoneSet,
    /// `None` when either envelope is constant.
    pub am_fm_r: Option<Correlation>,
}

/// AM and FM envelopes, their spectra and zones, and the AM/FM correlation.
pub fn rhythm_report(signal: &Signal, track: &F0Track, params: &RhythmParams) -> Result<RhythmReport> {
    let am = am_envelope(signal, &params.am)?;
    let fm = fm_envelope(track, params.am.out_rate)?;
    let aes = envelope_spectrum(&am, params.display_max)?;
    let fes = envelope_spectrum(&fm, params.display_max)?;
    let am_zones = jassem_edges(&aes, &params.edges, params.display_max)?;
    let fm_zones = jassem_edges(&fes, &params.edges, params.display_max)?;
    let am_fm_r = envelope_correlation(&am, &fm, params.compare_len)?;
    Ok(RhythmReport {
        am,
        fm,
        aes,
        fes,
        am_zones,
        fm_zones,
        am_fm_r,
    })
}

/// Pearson r between length-normalised envelopes; `None` if one is constant.
pub fn envelope_correlation(am: &Envelope, fm: &Envelope, n: usize) -> Result<Option<Correlation>> {
    let x = eval::normalize_length(&am.values, n)?;
    let y = eval::normalize_length(&fm.values, n)?;
    let n_effective = am.values.len().min(fm.values.len());
    match eval::pearson_with_n(&x, &y, n_effective) {
        Ok(c) => Ok(Some(c)),
        Err(Error::DegenerateInput) => Ok(None),
        Err(e) => Err(e),
    }
}
