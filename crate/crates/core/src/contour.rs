//! Polynomial models of F0 contours.
//!
//! Two modelling domains are supported: local fits over each voiced
//! segment, and one global fit over the whole utterance after unvoiced
//! frames have been filled with the median voiced F0.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::f0::F0Track;
use crate::util;

pub const DEFAULT_LOCAL_ORDER: usize = 3;
pub const DEFAULT_GLOBAL_ORDER: usize = 6;
pub const DEFAULT_MIN_SEG_FRAMES: usize = 5;

/// A maximal run of voiced frames, `start..end` in frame indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VoicedSegment {
    pub start: usize,
    pub end: usize,
}

impl VoicedSegment {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

/// Least-squares polynomial. Coefficients are in ascending powers of
/// `t - span.0`, in seconds.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PolyModel {
    pub order: usize,
    pub coeffs: Vec<f64>,
    pub span: (f64, f64),
    pub rmse: f64,
}

impl PolyModel {
    /// Evaluates the model at absolute time `t`.
    pub fn eval(&self, t: f64) -> f64 {
        let x = t - self.span.0;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

/// Local and global models of one track.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ContourModels {
    pub local: Vec<PolyModel>,
    pub global: PolyModel,
    /// Voiced segments too short for a local fit.
    pub skipped: Vec<VoicedSegment>,
}

pub fn voiced_segments(track: &F0Track) -> Vec<VoicedSegment> {
    let mut segments = Vec::new();
    let mut start = None;
    for (i, &f) in track.f0.iter().enumerate() {
        match (f > 0.0, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                segments.push(VoicedSegment { start: s, end: i });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        segments.push(VoicedSegment {
            start: s,
            end: track.f0.len(),
        });
    }
    segments
}

/// Replaces every zero with the median of the non-zero values.
pub fn median_interpolate(f0: &[f64]) -> Result<Vec<f64>> {
    let voiced: Vec<f64> = f0.iter().copied().filter(|v| *v != 0.0).collect();
    let fill = util::median(&voiced).ok_or(Error::NoVoicedFrames)?;
    Ok(f0.iter().map(|&v| if v == 0.0 { fill } else { v }).collect())
}

/// Least-squares fit of degree `order` via Householder QR.
///
/// Time is re-originated at `times[0]` and scaled to unit range internally;
/// the returned coefficients are for the re-originated (unscaled) time.
pub fn fit_poly(times: &[f64], values: &[f64], order: usize) -> Result<PolyModel> {
    if times.len() != values.len() {
        return Err(Error::LengthMismatch {
            left: times.len(),
            right: values.len(),
        });
    }
    let n = times.len();
    let m = order + 1;
    if n < m {
        return Err(Error::SegmentTooShort { points: n, order });
    }
    let mut sorted = times.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::param("times", "must be distinct"));
    }

    let origin = times[0];
    let scale = times
        .iter()
        .map(|t| (t - origin).abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);

    // Column-major Vandermonde matrix in scaled time.
    let mut a: Vec<f64> = Vec::with_capacity(n * m);
    for k in 0..m {
        a.extend(times.iter().map(|t| libm::pow((t - origin) / scale, k as f64)));
    }
    let mut b = values.to_vec();
    let scaled = householder_solve(&mut a, &mut b, n, m)?;

    let coeffs: Vec<f64> = scaled
        .iter()
        .enumerate()
        .map(|(k, c)| c / libm::pow(scale, k as f64))
        .collect();
    let model = PolyModel {
        order,
        coeffs,
        span: (origin, sorted[n - 1]),
        rmse: 0.0,
    };
    let sse: f64 = times
        .iter()
        .zip(values)
        .map(|(t, v)| {
            let r = model.eval(*t) - v;
            r * r
        })
        .sum();
    Ok(PolyModel {
        rmse: libm::sqrt(sse / n as f64),
        ..model
    })
}

/// Solves `min |A x - b|` in place. `a` is column-major `rows x cols`.
fn householder_solve(a: &mut [f64], b: &mut [f64], rows: usize, cols: usize) -> Result<Vec<f64>> {
    let idx = |r: usize, c: usize| c * rows + r;
    let mut diag = Vec::with_capacity(cols);
    for k in 0..cols {
        let norm = libm::sqrt((k..rows).map(|r| a[idx(r, k)] * a[idx(r, k)]).sum::<f64>());
        if norm == 0.0 {
            return Err(Error::param("times", "design matrix is rank deficient"));
        }
        let alpha = if a[idx(k, k)] > 0.0 { -norm } else { norm };
        // v = x - alpha e1, stored in place of column k
        a[idx(k, k)] -= alpha;
        let vnorm2: f64 = (k..rows).map(|r| a[idx(r, k)] * a[idx(r, k)]).sum();
        if vnorm2 > 0.0 {
            for c in k + 1..cols {
                let dot: f64 = (k..rows).map(|r| a[idx(r, k)] * a[idx(r, c)]).sum();
                let f = 2.0 * dot / vnorm2;
                for r in k..rows {
                    a[idx(r, c)] -= f * a[idx(r, k)];
                }
            }
            let dot: f64 = (k..rows).map(|r| a[idx(r, k)] * b[r]).sum();
            let f = 2.0 * dot / vnorm2;
            for r in k..rows {
                b[r] -= f * a[idx(r, k)];
            }
        }
        diag.push(alpha);
    }
    // back substitution against R (diagonal in `diag`, upper part in `a`)
    let mut x = alloc::vec![0.0; cols];
    for k in (0..cols).rev() {
        let s: f64 = (k + 1..cols).map(|c| a[idx(k, c)] * x[c]).sum();
        x[k] = (b[k] - s) / diag[k];
    }
    Ok(x)
}

/// Fits local models per voiced segment and one global model over the
/// median-interpolated track.
pub fn model_track(
    track: &F0Track,
    local_order: usize,
    global_order: usize,
    min_seg_frames: usize,
) -> Result<ContourModels> {
    let filled = median_interpolate(&track.f0)?;
    if filled.len() < global_order + 1 {
        return Err(Error::SegmentTooShort {
            points: filled.len(),
            order: global_order,
        });
    }
    let needed = min_seg_frames.max(local_order + 1);
    let mut local = Vec::new();
    let mut skipped = Vec::new();
    for seg in voiced_segments(track) {
        if seg.len() < needed {
            skipped.push(seg);
            continue;
        }
        local.push(fit_poly(
            &track.times[seg.start..seg.end],
            &track.f0[seg.start..seg.end],
            local_order,
        )?);
    }
    let global = fit_poly(&track.times, &filled, global_order)?;
    Ok(ContourModels { local, global, skipped })
}
