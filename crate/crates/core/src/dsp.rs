//! Signal-processing primitives shared by the estimators and envelope
//! analyses.
//!
//! Filters are zero-phase FFT masks over the full signal length: a bin at
//! exactly the cutoff frequency belongs to the low-pass side, so a low-pass
//! and a high-pass at the same cutoff partition the spectrum.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fft::{self, Complex64, RealFft};
use crate::signal::{FrameSpec, Signal};
use crate::util;

/// Default display floor for dB spectrograms.
pub const DEFAULT_FLOOR_DB: f64 = -60.0;

/// Magnitude spectrum from DC upwards.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Spectrum {
    pub freqs: Vec<f64>,
    pub mags: Vec<f64>,
    /// Bin spacing in Hz.
    pub resolution: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.mags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mags.is_empty()
    }

    /// Keeps the bins with frequency `<= max_freq`.
    pub fn truncated(mut self, max_freq: f64) -> Spectrum {
        let keep = self
            .freqs
            .iter()
            .take_while(|&&f| f <= max_freq + 1e-9 * self.resolution)
            .count();
        self.freqs.truncate(keep);
        self.mags.truncate(keep);
        self
    }

    /// Index of the strongest bin, excluding DC.
    pub fn peak_bin(&self) -> Option<usize> {
        if self.mags.len() < 2 {
            return None;
        }
        util::argmax(&self.mags[1..]).map(|i| i + 1)
    }

    pub fn peak_frequency(&self) -> Option<f64> {
        self.peak_bin().map(|i| self.freqs[i])
    }
}

/// Time-frequency magnitude grid, one row per frame.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectrogramGrid {
    pub times: Vec<f64>,
    pub freqs: Vec<f64>,
    /// `mags[t][f]`
    pub mags: Vec<Vec<f64>>,
    pub db: bool,
}

fn check_pad(len: usize, pad_to: Option<usize>) -> Result<usize> {
    match pad_to {
        None => Ok(len.next_power_of_two()),
        Some(p) if p < len => Err(Error::param("pad_to", "must not be shorter than the input")),
        Some(p) if !p.is_power_of_two() => Err(Error::param("pad_to", "must be a power of two")),
        Some(p) => Ok(p),
    }
}

/// Magnitudes of the real-input DFT, bins `0..=N/2`, where `N` is the padded
/// length (next power of two by default).
pub fn fft_magnitude(samples: &[f64], rate: f64, pad_to: Option<usize>) -> Result<Spectrum> {
    if samples.is_empty() {
        return Err(Error::EmptySignal);
    }
    let n = check_pad(samples.len(), pad_to)?;
    let plan = RealFft::new(n);
    Ok(magnitude_with(&plan, samples, rate))
}

/// Same as [`fft_magnitude`] with a caller-owned plan; `samples` is zero-padded
/// to the plan length.
pub(crate) fn magnitude_with(plan: &RealFft, samples: &[f64], rate: f64) -> Spectrum {
    let bins = plan.forward(samples);
    let resolution = rate / plan.len() as f64;
    Spectrum {
        freqs: (0..bins.len()).map(|k| k as f64 * resolution).collect(),
        mags: bins.iter().map(|c| c.norm()).collect(),
        resolution,
    }
}

fn mask_filter(samples: &[f64], rate: f64, keep: impl Fn(f64) -> bool) -> Vec<f64> {
    let n = samples.len();
    let plan = RealFft::new(n);
    let mut spectrum = plan.forward(samples);
    for (k, bin) in spectrum.iter_mut().enumerate() {
        if !keep(k as f64 * rate / n as f64) {
            *bin = Complex64::new(0.0, 0.0);
        }
    }
    plan.inverse(&spectrum)
}

fn check_cutoff(rate: f64, cutoff: f64) -> Result<()> {
    if cutoff > 0.0 && cutoff < rate / 2.0 {
        Ok(())
    } else {
        Err(Error::param(
            "cutoff",
            "must lie strictly between 0 and the Nyquist frequency",
        ))
    }
}

/// Zero-phase low-pass: removes every bin above `cutoff`.
pub fn lowpass(samples: &[f64], rate: f64, cutoff: f64) -> Result<Vec<f64>> {
    check_cutoff(rate, cutoff)?;
    if samples.is_empty() {
        return Ok(Vec::new());
    }
    Ok(mask_filter(samples, rate, |f| f <= cutoff))
}

/// Zero-phase high-pass: removes every bin at or below `cutoff`, DC included.
pub fn highpass(samples: &[f64], rate: f64, cutoff: f64) -> Result<Vec<f64>> {
    check_cutoff(rate, cutoff)?;
    if samples.is_empty() {
        return Ok(Vec::new());
    }
    Ok(mask_filter(samples, rate, |f| f > cutoff))
}

/// Band limiting in a single transform: identical to
/// `highpass(lowpass(x, lp_cutoff), hp_cutoff)` because both masks act on
/// the same bins.
pub fn band_limit(samples: &[f64], rate: f64, hp_cutoff: f64, lp_cutoff: f64) -> Result<Vec<f64>> {
    check_cutoff(rate, lp_cutoff)?;
    check_cutoff(rate, hp_cutoff)?;
    if samples.is_empty() {
        return Ok(Vec::new());
    }
    Ok(mask_filter(samples, rate, |f| f > hp_cutoff && f <= lp_cutoff))
}

/// Zeroes samples whose magnitude is below `ratio * max(|x|)`.
pub fn center_clip(samples: &[f64], ratio: f64) -> Result<Vec<f64>> {
    if !(0.0..1.0).contains(&ratio) {
        return Err(Error::param("clip_ratio", "must lie in [0, 1)"));
    }
    let peak = samples.iter().fold(0.0, |m: f64, x| m.max(x.abs()));
    let threshold = ratio * peak;
    Ok(samples
        .iter()
        .map(|&x| if x.abs() >= threshold { x } else { 0.0 })
        .collect())
}

fn check_odd(field: &'static str, win: usize, min: usize) -> Result<()> {
    if win < min || win.is_multiple_of(2) {
        Err(Error::param(field, "window must be odd and large enough"))
    } else {
        Ok(())
    }
}

/// Centered running maximum. The window is clipped at the sequence ends.
pub fn moving_max(samples: &[f64], win: usize) -> Result<Vec<f64>> {
    check_odd("win", win, 1)?;
    let n = samples.len();
    let half = win / 2;
    let mut out = Vec::with_capacity(n);
    // indices with decreasing values
    let mut deque: VecDeque<usize> = VecDeque::new();
    let mut next = 0;
    for i in 0..n {
        let hi = (i + half).min(n - 1);
        while next <= hi {
            while deque.back().is_some_and(|&j| samples[j] <= samples[next]) {
                deque.pop_back();
            }
            deque.push_back(next);
            next += 1;
        }
        let lo = i.saturating_sub(half);
        while deque.front().is_some_and(|&j| j < lo) {
            deque.pop_front();
        }
        out.push(samples[deque[0]]);
    }
    Ok(out)
}

/// Centered running median with edge replication.
pub fn median_filter(samples: &[f64], win: usize) -> Result<Vec<f64>> {
    check_odd("median_win", win, 1)?;
    if win == 1 || samples.is_empty() {
        return Ok(samples.to_vec());
    }
    let n = samples.len() as isize;
    let half = (win / 2) as isize;
    let mut window = vec![0.0; win];
    Ok((0..n)
        .map(|i| {
            for (slot, j) in window.iter_mut().zip(i - half..=i + half) {
                *slot = samples[j.clamp(0, n - 1) as usize];
            }
            window.sort_by(f64::total_cmp);
            window[win / 2]
        })
        .collect())
}

/// Centered moving average; windows are clipped at the ends and averaged
/// over the samples they actually cover.
pub fn moving_average(samples: &[f64], win: usize) -> Result<Vec<f64>> {
    check_odd("smooth_win", win, 1)?;
    let n = samples.len();
    let half = win / 2;
    Ok((0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(n - 1);
            samples[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect())
}

/// First difference, `y[i] = x[i+1] - x[i]`.
pub fn diff(samples: &[f64]) -> Vec<f64> {
    samples.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Magnitude of the analytic signal, computed in the frequency domain.
pub fn hilbert_envelope(samples: &[f64]) -> Result<Vec<f64>> {
    let n = samples.len();
    if n < 4 {
        return Err(Error::param("samples", "need at least 4 samples"));
    }
    let mut spectrum = fft::forward_real(samples);
    let half = n / 2;
    for (k, bin) in spectrum.iter_mut().enumerate() {
        let gain = if k == 0 || (n.is_multiple_of(2) && k == half) {
            1.0
        } else if k <= (n - 1) / 2 {
            2.0
        } else {
            0.0
        };
        *bin *= gain;
    }
    Ok(fft::inverse(&spectrum).into_iter().map(|c| c.norm()).collect())
}

/// Short-time magnitude spectra. With `db` set, magnitudes are converted to
/// `20 log10(mag / max_mag)` and clamped at `floor_db`.
pub fn spectrogram(
    signal: &Signal,
    spec: &FrameSpec,
    pad_to: Option<usize>,
    db: bool,
    floor_db: f64,
) -> Result<SpectrogramGrid> {
    let frames = crate::signal::frames(signal, spec);
    if frames.is_empty() {
        return Err(Error::SignalTooShort);
    }
    if db && floor_db >= 0.0 {
        return Err(Error::param("floor_db", "must be negative"));
    }
    let n = check_pad(spec.frame_len, pad_to)?;
    let plan = RealFft::new(n);
    let rate = signal.rate();
    let mut freqs = Vec::new();
    let mut mags = Vec::with_capacity(frames.len());
    for frame in &frames {
        let column = magnitude_with(&plan, frame, rate);
        if freqs.is_empty() {
            freqs = column.freqs;
        }
        mags.push(column.mags);
    }
    if db {
        let max = mags.iter().flatten().fold(0.0, |m: f64, &v| m.max(v));
        for row in &mut mags {
            for v in row.iter_mut() {
                *v = if max > 0.0 && *v > 0.0 {
                    (20.0 * libm::log10(*v / max)).max(floor_db)
                } else {
                    floor_db
                };
            }
        }
    }
    let times = (0..frames.len()).map(|i| spec.center_time(i, rate)).collect();
    Ok(SpectrogramGrid { times, freqs, mags, db })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{resample, WindowFn};
    use core::f64::consts::PI;
    use proptest::prelude::*;

    fn sine(freq: f64, amp: f64, rate: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| amp * libm::sin(2.0 * PI * freq * i as f64 / rate))
            .collect()
    }

    /// Direct evaluation of |DFT| at an arbitrary frequency.
    fn dft_mag_at(x: &[f64], freq: f64, rate: f64) -> f64 {
        let (mut re, mut im) = (0.0, 0.0);
        for (i, v) in x.iter().enumerate() {
            let a = 2.0 * PI * freq * i as f64 / rate;
            re += v * libm::cos(a);
            im -= v * libm::sin(a);
        }
        libm::sqrt(re * re + im * im)
    }

    /// Frequency (integer Hz grid) with the largest direct-DFT magnitude.
    fn dft_peak(x: &[f64], rate: f64, lo: usize, hi: usize) -> f64 {
        (lo..=hi)
            .map(|f| (f as f64, dft_mag_at(x, f as f64, rate)))
            .fold((0.0, -1.0), |best, c| if c.1 > best.1 { c } else { best })
            .0
    }

    fn rms_diff(a: &[f64], b: &[f64]) -> f64 {
        util::rms(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
    }

    #[test]
    fn dc_only_spectrum() {
        let s = fft_magnitude(&[1.0; 4], 4.0, None).unwrap();
        assert_eq!(s.len(), 3);
        assert!((s.mags[0] - 4.0).abs() < 1e-12);
        assert!(s.mags[1] < 1e-12 && s.mags[2] < 1e-12);
    }

    #[test]
    fn cosine_peak_at_bin_one() {
        let x: Vec<f64> = (0..8).map(|i| libm::cos(2.0 * PI * i as f64 / 8.0)).collect();
        let s = fft_magnitude(&x, 8.0, None).unwrap();
        assert_eq!(s.peak_bin(), Some(1));
        assert!((s.mags[1] - 4.0).abs() < 1e-12);
        assert_eq!(s.resolution, 1.0);
    }

    #[test]
    fn magnitude_is_linear() {
        let x = sine(3.0, 0.7, 64.0, 50);
        let a = fft_magnitude(&x, 64.0, Some(64)).unwrap();
        let scaled: Vec<f64> = x.iter().map(|v| 2.5 * v).collect();
        let b = fft_magnitude(&scaled, 64.0, Some(64)).unwrap();
        for (p, q) in a.mags.iter().zip(&b.mags) {
            assert!((2.5 * p - q).abs() < 1e-12);
        }
        assert!(fft_magnitude(&x, 64.0, Some(32)).is_err());
        assert!(fft_magnitude(&x, 64.0, Some(100)).is_err());
    }

    #[test]
    fn lowpass_removes_on_bin_tone() {
        let rate = 8000.0;
        let low = sine(50.0, 1.0, rate, 8000);
        let mixed: Vec<f64> = low
            .iter()
            .zip(sine(500.0, 1.0, rate, 8000))
            .map(|(a, b)| a + b)
            .collect();
        let before = dft_mag_at(&mixed, 500.0, rate);
        let out = lowpass(&mixed, rate, 100.0).unwrap();
        assert_eq!(out.len(), mixed.len());
        assert!(dft_mag_at(&out, 500.0, rate) < 1e-9 * before);
        assert!(rms_diff(&lowpass(&low, rate, 100.0).unwrap(), &low) < 1e-9);
    }

    #[test]
    fn lowpass_keeps_dc_and_phase() {
        let x = vec![0.5; 64];
        let y = lowpass(&x, 64.0, 5.0).unwrap();
        assert!(rms_diff(&x, &y) < 1e-12);
        // a centred symmetric pulse stays centred
        let mut pulse = vec![0.0; 65];
        pulse[31] = 0.5;
        pulse[32] = 1.0;
        pulse[33] = 0.5;
        let smooth = lowpass(&pulse, 65.0, 8.0).unwrap();
        assert_eq!(util::argmax(&smooth), Some(32));
        assert!((smooth[31] - smooth[33]).abs() < 1e-12);
    }

    #[test]
    fn highpass_stop_and_pass() {
        let rate = 8000.0;
        let low = sine(50.0, 1.0, rate, 8000);
        assert!(util::rms(&highpass(&low, rate, 100.0).unwrap()) < 1e-9);
        let high = sine(500.0, 1.0, rate, 8000);
        assert!(rms_diff(&highpass(&high, rate, 100.0).unwrap(), &high) < 1e-9);
        let dc: Vec<f64> = high.iter().map(|v| v + 0.3).collect();
        assert!(util::mean(&highpass(&dc, rate, 100.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn filters_reject_bad_cutoff() {
        assert!(lowpass(&[1.0, 2.0], 100.0, 0.0).is_err());
        assert!(highpass(&[1.0, 2.0], 100.0, 50.0).is_err());
    }

    #[test]
    fn center_clip_examples() {
        let out = center_clip(&[0.1, -0.5, 0.9], 0.2).unwrap();
        assert_eq!(out, vec![0.0, -0.5, 0.9]);
        let x = [0.3, -0.1, 0.02];
        assert_eq!(center_clip(&x, 0.0).unwrap(), x.to_vec());
        assert_eq!(center_clip(&[0.0; 3], 0.5).unwrap(), vec![0.0; 3]);
        assert!(center_clip(&x, 1.0).is_err());
    }

    #[test]
    fn center_clip_survivors_match_count() {
        let x = sine(37.0, 0.8, 8000.0, 4000);
        let out = center_clip(&x, 0.99).unwrap();
        let peak = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let expected = x.iter().filter(|v| v.abs() >= 0.99 * peak).count();
        assert_eq!(out.iter().filter(|v| **v != 0.0).count(), expected);
        assert!(expected > 0 && expected < x.len() / 10);
    }

    #[test]
    fn moving_max_examples() {
        let x = [0.0, 1.0, 0.0, 0.0, 2.0, 0.0];
        assert_eq!(moving_max(&x, 3).unwrap(), vec![1.0, 1.0, 1.0, 2.0, 2.0, 2.0]);
        assert_eq!(moving_max(&x, 1).unwrap(), x.to_vec());
        assert!(moving_max(&x, 4).is_err());
    }

    #[test]
    fn median_filter_examples() {
        assert_eq!(median_filter(&[1.0, 9.0, 1.0], 3).unwrap(), vec![1.0, 1.0, 1.0]);
        let mono = [1.0, 2.0, 5.0, 7.0, 7.5];
        assert_eq!(median_filter(&mono, 3).unwrap(), mono.to_vec());
        assert_eq!(median_filter(&mono, 5).unwrap(), mono.to_vec());
    }

    #[test]
    fn diff_examples() {
        assert_eq!(diff(&[1.0, 3.0, 2.0]), vec![2.0, -1.0]);
        assert_eq!(diff(&[4.0; 5]), vec![0.0; 4]);
        let x = [0.5, -1.0, 2.0, 0.25];
        let cum: Vec<f64> = x
            .iter()
            .scan(0.0, |s, v| {
                *s += v;
                Some(*s)
            })
            .collect();
        assert_eq!(diff(&cum), x[1..].to_vec());
    }

    #[test]
    fn hilbert_of_pure_tone() {
        let rate = 8000.0;
        let x = sine(200.0, 0.8, rate, 4000);
        let env = hilbert_envelope(&x).unwrap();
        let edge = x.len() / 20;
        for v in &env[edge..env.len() - edge] {
            assert!((v - 0.8).abs() < 0.02, "{v}");
        }
        let scaled: Vec<f64> = x.iter().map(|v| 3.0 * v).collect();
        for (a, b) in hilbert_envelope(&scaled).unwrap().iter().zip(&env) {
            assert!((a - 3.0 * b).abs() < 1e-9);
        }
        assert!(hilbert_envelope(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn hilbert_tracks_modulation() {
        let rate = 4000.0;
        let n = 8000;
        let x: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 / rate;
                (1.0 + 0.5 * libm::sin(2.0 * PI * 4.0 * t)) * libm::sin(2.0 * PI * 200.0 * t)
            })
            .collect();
        let env = hilbert_envelope(&x).unwrap();
        let mean = util::mean(&env);
        let centred: Vec<f64> = env.iter().map(|v| v - mean).collect();
        assert_eq!(dft_peak(&centred, rate, 1, 40), 4.0);
    }

    #[test]
    fn resample_keeps_dominant_frequency() {
        let x = Signal::new(sine(200.0, 0.5, 16000.0, 16000), 16000).unwrap();
        let y = resample(&x, 8000).unwrap();
        assert_eq!(y.len(), 8000);
        assert_eq!(dft_peak(x.samples(), 16000.0, 50, 1000), 200.0);
        assert_eq!(dft_peak(y.samples(), 8000.0, 50, 1000), 200.0);
    }

    #[test]
    fn spectrogram_tracks_tone() {
        let rate = 16000;
        let sig = Signal::new(sine(1000.0, 0.5, rate as f64, 8000), rate).unwrap();
        let spec = FrameSpec::new(512, 256, WindowFn::Hann).unwrap();
        let grid = spectrogram(&sig, &spec, None, false, DEFAULT_FLOOR_DB).unwrap();
        assert_eq!(grid.mags.len(), spec.frame_count(8000));
        assert_eq!(grid.freqs.len(), 257);
        let resolution = rate as f64 / 512.0;
        for row in &grid.mags {
            assert_eq!(row.len(), 257);
            let peak = util::argmax(row).unwrap() as f64 * resolution;
            assert!((peak - 1000.0).abs() <= resolution);
        }
        assert!((grid.times[0] - 256.0 / 16000.0).abs() < 1e-15);
    }

    #[test]
    fn spectrogram_of_silence_sits_at_floor() {
        let sig = Signal::new(vec![0.0; 2048], 8000).unwrap();
        let spec = FrameSpec::new(256, 128, WindowFn::Hann).unwrap();
        let grid = spectrogram(&sig, &spec, Some(512), true, -60.0).unwrap();
        assert_eq!(grid.freqs.len(), 257);
        assert!(grid.mags.iter().flatten().all(|&v| v == -60.0));
        let short = Signal::new(vec![0.0; 100], 8000).unwrap();
        assert_eq!(
            spectrogram(&short, &spec, None, true, -60.0),
            Err(Error::SignalTooShort)
        );
    }

    proptest! {
        #[test]
        fn filters_are_idempotent_projections(
            x in proptest::collection::vec(-1.0f64..1.0, 16..512),
            cutoff_frac in 0.01f64..0.49,
        ) {
            let rate = 1000.0;
            let c = cutoff_frac * rate;
            let lo = lowpass(&x, rate, c).unwrap();
            let hi = highpass(&x, rate, c).unwrap();
            prop_assert!(rms_diff(&lowpass(&lo, rate, c).unwrap(), &lo) < 1e-9);
            prop_assert!(rms_diff(&highpass(&hi, rate, c).unwrap(), &hi) < 1e-9);
            let sum: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| a + b).collect();
            prop_assert!(rms_diff(&sum, &x) < 1e-9);
        }

        #[test]
        fn band_limit_equals_cascade(
            x in proptest::collection::vec(-1.0f64..1.0, 16..400),
            lo in 0.01f64..0.2,
            hi in 0.25f64..0.49,
        ) {
            let rate = 1000.0;
            let cascade = highpass(&lowpass(&x, rate, hi * rate).unwrap(), rate, lo * rate).unwrap();
            let single = band_limit(&x, rate, lo * rate, hi * rate).unwrap();
            prop_assert!(rms_diff(&cascade, &single) < 1e-9);
        }

        #[test]
        fn moving_max_matches_brute_force(
            x in proptest::collection::vec(-5.0f64..5.0, 1..200),
            half in 0usize..10,
        ) {
            let win = 2 * half + 1;
            let y = moving_max(&x, win).unwrap();
            for i in 0..x.len() {
                let lo = i.saturating_sub(half);
                let hi = (i + half).min(x.len() - 1);
                let m = x[lo..=hi].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                prop_assert_eq!(y[i], m);
                prop_assert!(y[i] >= x[i]);
            }
        }

        #[test]
        fn moving_max_is_monotone(
            x in proptest::collection::vec(0.0f64..5.0, 1..100),
            bumps in proptest::collection::vec(0.0f64..1.0, 100),
            half in 0usize..6,
        ) {
            let bumped: Vec<f64> = x.iter().zip(&bumps).map(|(a, b)| a + b).collect();
            let a = moving_max(&x, 2 * half + 1).unwrap();
            let b = moving_max(&bumped, 2 * half + 1).unwrap();
            prop_assert!(a.iter().zip(&b).all(|(p, q)| p <= q));
        }

        #[test]
        fn median_filter_matches_sorting_oracle(
            x in proptest::collection::vec(-5.0f64..5.0, 1..120),
            half in 1usize..6,
        ) {
            let win = 2 * half + 1;
            let y = median_filter(&x, win).unwrap();
            let n = x.len() as isize;
            let lo = x.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            for i in 0..n {
                let mut w: Vec<f64> = (i - half as isize..=i + half as isize)
                    .map(|j| x[j.clamp(0, n - 1) as usize])
                    .collect();
                w.sort_by(|a, b| a.partial_cmp(b).unwrap());
                prop_assert_eq!(y[i as usize], w[half]);
                prop_assert!(y[i as usize] >= lo && y[i as usize] <= hi);
            }
        }

        #[test]
        fn outputs_are_deterministic(x in proptest::collection::vec(-1.0f64..1.0, 8..128)) {
            let a = hilbert_envelope(&x).unwrap();
            let b = hilbert_envelope(&x).unwrap();
            prop_assert!(a.iter().zip(&b).all(|(p, q)| p.to_bits() == q.to_bits()));
            prop_assert!(a.iter().all(|v| *v >= 0.0));
        }
    }
}
