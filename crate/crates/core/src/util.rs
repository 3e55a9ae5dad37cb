use alloc::vec::Vec;

/// Median with the mean-of-middle-two convention for even counts.
/// Returns `None` for an empty slice.
pub(crate) fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        Some(sorted[mid])
    } else {
        Some(0.5 * (sorted[mid - 1] + sorted[mid]))
    }
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

pub(crate) fn rms(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    libm::sqrt(values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64)
}

/// Index of the largest value; first wins on ties.
pub(crate) fn argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &v) in values.iter().enumerate() {
        match best {
            Some((_, b)) if v <= b => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| i)
}

/// Linear interpolation of `values` at fractional index `pos`.
pub(crate) fn lerp_at(values: &[f64], pos: f64) -> f64 {
    let last = values.len() - 1;
    if pos <= 0.0 {
        return values[0];
    }
    if pos >= last as f64 {
        return values[last];
    }
    let i = libm::floor(pos) as usize;
    let frac = pos - i as f64;
    if frac == 0.0 {
        values[i]
    } else {
        values[i] + (values[i + 1] - values[i]) * frac
    }
}

/// Endpoint-preserving linear map of `values` onto `n` points.
pub(crate) fn stretch(values: &[f64], n: usize) -> Vec<f64> {
    match (values.len(), n) {
        (_, 0) => Vec::new(),
        (0, _) => Vec::new(),
        (1, _) => alloc::vec![values[0]; n],
        (_, 1) => alloc::vec![values[0]],
        (len, _) => {
            let scale = (len - 1) as f64 / (n - 1) as f64;
            let mut out: Vec<f64> = (0..n).map(|j| lerp_at(values, j as f64 * scale)).collect();
            out[n - 1] = values[len - 1];
            out
        }
    }
}
