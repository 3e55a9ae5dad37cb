//! Discrete Fourier transforms of arbitrary length.
//!
//! Lengths whose prime factors are all small run through a mixed-radix
//! Cooley-Tukey recursion. Anything else is mapped onto a power-of-two
//! convolution with Bluestein's chirp-z algorithm, so every length costs
//! O(n log n) and the transform is exact up to rounding (the brick-wall
//! filters rely on that).

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

pub use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// A reusable transform plan for one length and direction.
///
/// Inverse transforms are unnormalised; [`inverse`] divides by the length.
#[derive(Debug, Clone)]
pub struct FftPlan {
    len: usize,
    direction: Direction,
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    Radix {
        factors: Vec<usize>,
        twiddles: Vec<Complex64>,
    },
    Bluestein {
        chirp: Vec<Complex64>,
        kernel_spectrum: Vec<Complex64>,
        forward: alloc::boxed::Box<FftPlan>,
        inverse: alloc::boxed::Box<FftPlan>,
    },
}

fn sign(direction: Direction) -> f64 {
    match direction {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    }
}

/// Radix sequence for `n`, or `None` when a prime factor exceeds 31.
fn factorize(mut n: usize) -> Option<Vec<usize>> {
    let mut factors = Vec::new();
    for p in [4usize, 2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        while n.is_multiple_of(p) {
            factors.push(p);
            n /= p;
        }
    }
    if n == 1 {
        Some(factors)
    } else {
        None
    }
}

impl FftPlan {
    pub fn new(len: usize, direction: Direction) -> Self {
        assert!(len > 0, "transform length must be positive");
        let kind = match factorize(len) {
            Some(factors) => {
                let s = sign(direction);
                let twiddles = (0..len)
                    .map(|k| {
                        let angle = s * 2.0 * PI * k as f64 / len as f64;
                        Complex64::new(libm::cos(angle), libm::sin(angle))
                    })
                    .collect();
                Kind::Radix { factors, twiddles }
            }
            None => Self::bluestein(len, direction),
        };
        FftPlan { len, direction, kind }
    }

    fn bluestein(len: usize, direction: Direction) -> Kind {
        let s = sign(direction);
        let m = (2 * len - 1).next_power_of_two();
        // chirp[k] = exp(s * i * pi * k^2 / n); k^2 reduced mod 2n keeps the angle small.
        let chirp: Vec<Complex64> = (0..len)
            .map(|k| {
                let k2 = ((k as u128 * k as u128) % (2 * len as u128)) as f64;
                let angle = s * PI * k2 / len as f64;
                Complex64::new(libm::cos(angle), libm::sin(angle))
            })
            .collect();
        let mut kernel = vec![Complex64::new(0.0, 0.0); m];
        kernel[0] = chirp[0].conj();
        for k in 1..len {
            kernel[k] = chirp[k].conj();
            kernel[m - k] = chirp[k].conj();
        }
        let forward = FftPlan::new(m, Direction::Forward);
        forward.process(&mut kernel);
        Kind::Bluestein {
            chirp,
            kernel_spectrum: kernel,
            forward: alloc::boxed::Box::new(forward),
            inverse: alloc::boxed::Box::new(FftPlan::new(m, Direction::Inverse)),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Transforms `data` in place. `data.len()` must equal the plan length.
    pub fn process(&self, data: &mut [Complex64]) {
        assert_eq!(data.len(), self.len, "buffer length does not match plan");
        match &self.kind {
            Kind::Radix { factors, twiddles } => stockham(data, factors, twiddles),
            Kind::Bluestein {
                chirp,
                kernel_spectrum,
                forward,
                inverse,
            } => {
                let m = kernel_spectrum.len();
                let mut buf = vec![Complex64::new(0.0, 0.0); m];
                for ((b, x), c) in buf.iter_mut().zip(data.iter()).zip(chirp) {
                    *b = x * c;
                }
                forward.process(&mut buf);
                for (b, k) in buf.iter_mut().zip(kernel_spectrum) {
                    *b *= k;
                }
                inverse.process(&mut buf);
                let scale = 1.0 / m as f64;
                for ((x, b), c) in data.iter_mut().zip(&buf).zip(chirp) {
                    *x = b * c * scale;
                }
            }
        }
    }
}

/// Self-sorting mixed-radix transform.
///
/// After the stage that brings the sub-transform length to `l`, slot
/// `k * l + j` holds bin `j` of the length-`l` DFT of the subsequence
/// `x[k], x[k + r], x[k + 2r], ...` with `r = n / l`.
fn stockham(data: &mut [Complex64], factors: &[usize], twiddles: &[Complex64]) {
    let n = data.len();
    if n == 1 {
        return;
    }
    let mut src = data.to_vec();
    let mut dst = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); factors.iter().copied().max().unwrap_or(1)];
    let mut l_prev = 1;
    for &p in factors {
        let l = l_prev * p;
        let r = n / l;
        let tw_step = n / l;
        match p {
            2 => {
                for k in 0..r {
                    for j in 0..l_prev {
                        let w = twiddles[j * tw_step];
                        let a = src[k * l_prev + j];
                        let b = src[(k + r) * l_prev + j] * w;
                        dst[k * l + j] = a + b;
                        dst[k * l + j + l_prev] = a - b;
                    }
                }
            }
            4 => {
                // exp(s * i * pi / 2) from the table keeps the direction's sign
                let w4 = twiddles[n / 4];
                for k in 0..r {
                    for j in 0..l_prev {
                        let a0 = src[k * l_prev + j];
                        let a1 = src[(k + r) * l_prev + j] * twiddles[j * tw_step];
                        let a2 = src[(k + 2 * r) * l_prev + j] * twiddles[2 * j * tw_step];
                        let a3 = src[(k + 3 * r) * l_prev + j] * twiddles[3 * j * tw_step];
                        let s02 = a0 + a2;
                        let d02 = a0 - a2;
                        let s13 = a1 + a3;
                        let d13 = (a1 - a3) * w4;
                        let base = k * l + j;
                        dst[base] = s02 + s13;
                        dst[base + l_prev] = d02 + d13;
                        dst[base + 2 * l_prev] = s02 - s13;
                        dst[base + 3 * l_prev] = d02 - d13;
                    }
                }
            }
            _ => {
                let roots: Vec<Complex64> = (0..p).map(|q| twiddles[q * (n / p)]).collect();
                for k in 0..r {
                    for j in 0..l_prev {
                        for (s, slot) in scratch[..p].iter_mut().enumerate() {
                            *slot = src[(k + s * r) * l_prev + j] * twiddles[j * s * tw_step];
                        }
                        for t in 0..p {
                            let mut acc = scratch[0];
                            let mut idx = 0;
                            for y in &scratch[1..p] {
                                idx += t;
                                if idx >= p {
                                    idx -= p;
                                }
                                acc += y * roots[idx];
                            }
                            dst[k * l + j + t * l_prev] = acc;
                        }
                    }
                }
            }
        }
        core::mem::swap(&mut src, &mut dst);
        l_prev = l;
    }
    data.copy_from_slice(&src);
}

/// Transforms of real sequences, returning or consuming the
/// non-negative half spectrum (`n/2 + 1` bins).
///
/// Even lengths pack the signal into a complex sequence of half the length;
/// odd lengths fall back to a full complex transform.
#[derive(Debug, Clone)]
pub struct RealFft {
    len: usize,
    // forward only; inverse transforms conjugate around it
    plan: FftPlan,
    // exp(-2 pi i k / n), k in 0..n/2, only used for even lengths
    twiddles: Vec<Complex64>,
}

impl RealFft {
    pub fn new(len: usize) -> Self {
        assert!(len > 0, "transform length must be positive");
        let inner = if len.is_multiple_of(2) { len / 2 } else { len };
        let twiddles = if len.is_multiple_of(2) {
            (0..len / 2)
                .map(|k| {
                    let angle = -2.0 * PI * k as f64 / len as f64;
                    Complex64::new(libm::cos(angle), libm::sin(angle))
                })
                .collect()
        } else {
            Vec::new()
        };
        RealFft {
            len,
            plan: FftPlan::new(inner, Direction::Forward),
            twiddles,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bins `0..=n/2` of the DFT of `samples` (zero padded to the plan length).
    pub fn forward(&self, samples: &[f64]) -> Vec<Complex64> {
        let n = self.len;
        let bins = n / 2 + 1;
        if n % 2 == 1 {
            let mut data = vec![Complex64::new(0.0, 0.0); n];
            for (d, &x) in data.iter_mut().zip(samples) {
                d.re = x;
            }
            self.plan.process(&mut data);
            data.truncate(bins);
            return data;
        }
        let half = n / 2;
        let mut z = vec![Complex64::new(0.0, 0.0); half];
        for (i, &x) in samples.iter().enumerate().take(n) {
            if i % 2 == 0 {
                z[i / 2].re = x;
            } else {
                z[i / 2].im = x;
            }
        }
        self.plan.process(&mut z);
        let mut out = Vec::with_capacity(bins);
        for k in 0..bins {
            let zk = z[k % half];
            let zc = z[(half - k % half) % half].conj();
            let even = (zk + zc) * 0.5;
            let odd = (zk - zc) * Complex64::new(0.0, -0.5);
            let w = if k < half {
                self.twiddles[k]
            } else {
                Complex64::new(-1.0, 0.0)
            };
            out.push(even + w * odd);
        }
        out
    }

    /// Real sequence whose DFT has the half spectrum `bins` (normalised).
    pub fn inverse(&self, bins: &[Complex64]) -> Vec<f64> {
        let n = self.len;
        assert_eq!(bins.len(), n / 2 + 1, "expected n/2 + 1 bins");
        if n % 2 == 1 {
            let mut data = vec![Complex64::new(0.0, 0.0); n];
            data[..bins.len()].copy_from_slice(bins);
            for k in 1..bins.len() {
                data[n - k] = bins[k].conj();
            }
            self.inverse_in_place(&mut data);
            return data.iter().map(|c| c.re / n as f64).collect();
        }
        let half = n / 2;
        let mut z: Vec<Complex64> = (0..half)
            .map(|k| {
                let xk = bins[k];
                let xc = bins[half - k].conj();
                let even = (xk + xc) * 0.5;
                let odd = (xk - xc) * 0.5 / self.twiddles[k];
                even + Complex64::new(0.0, 1.0) * odd
            })
            .collect();
        self.inverse_in_place(&mut z);
        let scale = 1.0 / half as f64;
        let mut out = Vec::with_capacity(n);
        for c in &z {
            out.push(c.re * scale);
            out.push(c.im * scale);
        }
        out
    }
}

impl RealFft {
    /// Unnormalised inverse through the forward plan: `conj(F(conj(x)))`.
    fn inverse_in_place(&self, data: &mut [Complex64]) {
        for c in data.iter_mut() {
            *c = c.conj();
        }
        self.plan.process(data);
        for c in data.iter_mut() {
            *c = c.conj();
        }
    }
}

/// Full forward DFT of a real sequence.
pub fn forward_real(samples: &[f64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut full = RealFft::new(n).forward(samples);
    full.reserve(n - full.len());
    for k in full.len()..n {
        let mirrored = full[n - k].conj();
        full.push(mirrored);
    }
    full
}

/// Smallest even length >= `min` with no prime factor above 5.
pub fn fast_len(min: usize) -> usize {
    let mut n = min.max(2);
    n += n % 2;
    loop {
        let mut m = n;
        for p in [2, 3, 5] {
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        if m == 1 {
            return n;
        }
        n += 2;
    }
}

/// Normalised inverse DFT.
pub fn inverse(spectrum: &[Complex64]) -> Vec<Complex64> {
    let mut data = spectrum.to_vec();
    FftPlan::new(data.len(), Direction::Inverse).process(&mut data);
    let scale = 1.0 / data.len() as f64;
    for x in &mut data {
        *x *= scale;
    }
    data
}
