//! Track comparison: length normalisation, median interpolation and
//! Pearson correlation with a two-tailed t-test p-value.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::contour::median_interpolate;
use crate::error::{Error, Result};
use crate::f0::F0Track;
use crate::util;

pub const DEFAULT_NORMALIZED_LEN: usize = 1000;

/// Linear interpolation onto `n` evenly spaced points over the same index
/// range. The first and last values are kept exactly.
pub fn normalize_length(values: &[f64], n: usize) -> Result<Vec<f64>> {
    if values.len() < 2 {
        return Err(Error::param("values", "need at least two values"));
    }
    if n < 2 {
        return Err(Error::param("n", "target length must be at least 2"));
    }
    Ok(util::stretch(values, n))
}

/// Pearson correlation and its p-value.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Correlation {
    pub r: f64,
    pub p: f64,
    /// Sample size behind `p`.
    pub n_effective: usize,
}

/// Product-moment correlation with `p` computed for `len(x)` observations.
pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<Correlation> {
    pearson_with_n(x, y, x.len())
}

/// As [`pearson_r`], but the p-value uses `n_effective` observations.
pub fn pearson_with_n(x: &[f64], y: &[f64], n_effective: usize) -> Result<Correlation> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(Error::param("x", "need at least three points"));
    }
    if n_effective < 3 {
        return Err(Error::param("n_effective", "need at least three observations"));
    }
    // single-pass co-moments; the cross term is written symmetrically so
    // swapping x and y gives a bit-identical r
    let (mut mx, mut my, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, (&a, &b)) in x.iter().zip(y).enumerate() {
        let k = (i + 1) as f64;
        let dx = a - mx;
        let dy = b - my;
        let w = (k - 1.0) / k;
        mx += dx / k;
        my += dy / k;
        sxx += w * (dx * dx);
        syy += w * (dy * dy);
        sxy += w * (dx * dy);
    }
    if !(sxx > 0.0) || !(syy > 0.0) {
        return Err(Error::DegenerateInput);
    }
    let r = (sxy / libm::sqrt(sxx * syy)).clamp(-1.0, 1.0);
    Ok(Correlation {
        r,
        p: correlation_p_value(r, n_effective),
        n_effective,
    })
}

/// Two-tailed p-value of `r` under the null of zero correlation, using the
/// t statistic with `n - 2` degrees of freedom.
pub fn correlation_p_value(r: f64, n: usize) -> f64 {
    let df = (n - 2) as f64;
    let r2 = r * r;
    if r2 >= 1.0 {
        return 0.0;
    }
    let t2 = r2 * df / (1.0 - r2);
    student_t_two_tailed(t2, df)
}

/// `P(|T| >= t)` for Student's t with `df` degrees of freedom, given `t^2`.
pub fn student_t_two_tailed(t2: f64, df: f64) -> f64 {
    if t2 <= 0.0 {
        return 1.0;
    }
    regularized_incomplete_beta(df / (df + t2), df / 2.0, 0.5).clamp(0.0, 1.0)
}

fn ln_beta(a: f64, b: f64) -> f64 {
    libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b)
}

/// `I_x(a, b)` by Lentz's continued fraction.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let front = libm::exp(a * libm::log(x) + b * libm::log(1.0 - x) - ln_beta(a, b));
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_fraction(x, a, b) / a
    } else {
        1.0 - front * beta_fraction(1.0 - x, b, a) / b
    }
}

fn beta_fraction(x: f64, a: f64, b: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-15;
    let guard = |v: f64| if v.abs() < TINY { TINY } else { v };
    let mut c = 1.0;
    let mut d = 1.0 / guard(1.0 - (a + b) * x / (a + 1.0));
    let mut h = d;
    for m in 1..1000 {
        let m = m as f64;
        let even = m * (b - m) * x / ((a + 2.0 * m - 1.0) * (a + 2.0 * m));
        d = 1.0 / guard(1.0 + even * d);
        c = guard(1.0 + even / c);
        h *= d * c;
        let odd = -(a + m) * (a + b + m) * x / ((a + 2.0 * m) * (a + 2.0 * m + 1.0));
        d = 1.0 / guard(1.0 + odd * d);
        c = guard(1.0 + odd / c);
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Median-interpolates both tracks, stretches them to `n` points and
/// correlates them. The p-value uses the shorter original track length.
pub fn compare_tracks(a: &F0Track, b: &F0Track, n: usize) -> Result<Correlation> {
    for t in [a, b] {
        if t.voiced_count() < 2 {
            return Err(Error::NoVoicedFrames);
        }
    }
    let x = normalize_length(&median_interpolate(&a.f0)?, n)?;
    let y = normalize_length(&median_interpolate(&b.f0)?, n)?;
    pearson_with_n(&x, &y, a.len().min(b.len()))
}

/// Median wall-clock time of one estimator configuration.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Timing {
    pub label: String,
    /// Seconds.
    pub median: f64,
    /// Retained runs in execution order (warm-up excluded), seconds.
    pub samples: Vec<f64>,
}

impl Timing {
    pub fn from_samples(label: impl Into<String>, samples: Vec<f64>) -> Self {
        Timing {
            label: label.into(),
            median: util::median(&samples).unwrap_or(0.0),
            samples,
        }
    }

    pub fn min(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.samples.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Pairwise correlations across labelled tracks, optionally with timings.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComparisonReport {
    pub labels: Vec<String>,
    pub r_matrix: Vec<Vec<f64>>,
    pub p_matrix: Vec<Vec<f64>>,
    pub n_effective: Vec<Vec<usize>>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Vec::is_empty"))]
    pub timings: Vec<Timing>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub k: Option<usize>,
}

/// Compares every unordered pair. Labels come from each track's `source`.
pub fn comparison_matrix(tracks: &[F0Track], n: usize) -> Result<ComparisonReport> {
    if tracks.len() < 2 {
        return Err(Error::NotEnoughTracks(tracks.len()));
    }
    let size = tracks.len();
    let mut r_matrix = vec![vec![1.0; size]; size];
    let mut p_matrix = vec![vec![0.0; size]; size];
    let mut n_effective = vec![vec![0; size]; size];
    for i in 0..size {
        n_effective[i][i] = tracks[i].len();
        for j in i + 1..size {
            let c = compare_tracks(&tracks[i], &tracks[j], n)?;
            r_matrix[i][j] = c.r;
            r_matrix[j][i] = c.r;
            p_matrix[i][j] = c.p;
            p_matrix[j][i] = c.p;
            n_effective[i][j] = c.n_effective;
            n_effective[j][i] = c.n_effective;
        }
    }
    Ok(ComparisonReport {
        labels: tracks.iter().map(|t| t.source.clone()).collect(),
        r_matrix,
        p_matrix,
        n_effective,
        timings: Vec::new(),
        k: None,
    })
}
