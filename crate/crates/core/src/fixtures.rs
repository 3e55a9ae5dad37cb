//! Synthetic test signals with known F0 and modulation.
//!
//! These stand in for a speech corpus: every generator's ground truth is
//! known by construction, so estimator output can be checked exactly.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::signal::Signal;

fn sample_count(rate: u32, seconds: f64) -> usize {
    libm::round(rate as f64 * seconds) as usize
}

fn signal(samples: Vec<f64>, rate: u32) -> Signal {
    Signal::new(samples, rate).expect("fixture durations are positive")
}

/// Uniform white noise in `[-1, 1)`, reproducible from `seed`.
pub fn white_noise(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let unit = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            2.0 * unit - 1.0
        })
        .collect()
}

pub fn sine(freq: f64, amplitude: f64, rate: u32, seconds: f64) -> Signal {
    let r = rate as f64;
    let samples = (0..sample_count(rate, seconds))
        .map(|i| amplitude * libm::sin(2.0 * PI * freq * i as f64 / r))
        .collect();
    signal(samples, rate)
}

/// Sawtooth whose instantaneous frequency follows `f0(t)`.
pub fn sawtooth_with(f0: impl Fn(f64) -> f64, amplitude: f64, rate: u32, seconds: f64) -> Signal {
    let r = rate as f64;
    let mut phase = 0.0;
    let samples = (0..sample_count(rate, seconds))
        .map(|i| {
            let value = amplitude * (2.0 * phase - 1.0);
            phase += f0(i as f64 / r) / r;
            phase -= libm::floor(phase);
            value
        })
        .collect();
    signal(samples, rate)
}

pub fn sawtooth(freq: f64, amplitude: f64, rate: u32, seconds: f64) -> Signal {
    sawtooth_with(|_| freq, amplitude, rate, seconds)
}

/// F0 contour of [`meander`]: wanders between 100 and 200 Hz.
pub fn meander_f0(t: f64) -> f64 {
    150.0 + 42.0 * libm::sin(2.0 * PI * 0.4 * t) + 8.0 * libm::sin(2.0 * PI * 1.3 * t + 0.5)
}

/// Speech-like sawtooth with a slowly meandering F0 (100 to 200 Hz).
pub fn meander(rate: u32, seconds: f64) -> Signal {
    sawtooth_with(meander_f0, 0.6, rate, seconds)
}

/// White noise whose amplitude follows `0.5 (1 + depth sin(2 pi mod_freq t))`.
pub fn am_noise(mod_freq: f64, depth: f64, rate: u32, seconds: f64, seed: u64) -> Signal {
    let r = rate as f64;
    let noise = white_noise(sample_count(rate, seconds), seed);
    let samples = noise
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let t = i as f64 / r;
            0.5 * (1.0 + depth * libm::sin(2.0 * PI * mod_freq * t)) * v
        })
        .collect();
    signal(samples, rate)
}

/// Sine carrier with amplitude `0.5 (1 + depth sin(2 pi mod_freq t))`.
pub fn am_tone(carrier: f64, mod_freq: f64, depth: f64, rate: u32, seconds: f64) -> Signal {
    let r = rate as f64;
    let samples = (0..sample_count(rate, seconds))
        .map(|i| {
            let t = i as f64 / r;
            0.5 * (1.0 + depth * libm::sin(2.0 * PI * mod_freq * t)) * libm::sin(2.0 * PI * carrier * t)
        })
        .collect();
    signal(samples, rate)
}

/// Sawtooth with `F0 = centre + swing sin(2 pi mod_freq t)`.
pub fn fm_sawtooth(centre: f64, swing: f64, mod_freq: f64, rate: u32, seconds: f64) -> Signal {
    sawtooth_with(
        move |t| centre + swing * libm::sin(2.0 * PI * mod_freq * t),
        0.6,
        rate,
        seconds,
    )
}

/// Sawtooth whose amplitude and F0 follow the same sinusoidal modulator.
pub fn comodulated(centre: f64, swing: f64, mod_freq: f64, depth: f64, rate: u32, seconds: f64) -> Signal {
    let carrier = fm_sawtooth(centre, swing, mod_freq, rate, seconds);
    let r = rate as f64;
    let samples = carrier
        .samples()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let t = i as f64 / r;
            (1.0 + depth * libm::sin(2.0 * PI * mod_freq * t)) / (1.0 + depth) * v
        })
        .collect();
    signal(samples, rate)
}
