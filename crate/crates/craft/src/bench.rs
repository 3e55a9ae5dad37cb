use std::hint::black_box;
use std::sync::Mutex;
use std::time::Instant;

use craft_core::eval::Timing;
use craft_core::f0::{estimator, EstimatorInfo, ParamSet};
use craft_core::Signal;

use crate::error::{Error, Result};

pub const MIN_ITERATIONS: usize = 3;

// Benchmarks never overlap within a process, so timings are not polluted by
// a concurrent run.
static EXCLUSIVE: Mutex<()> = Mutex::new(());

/// Times `k` runs of an estimator on the calling thread. The first run is a
/// warm-up and is not part of the returned distribution.
pub fn benchmark(info: &EstimatorInfo, overrides: &ParamSet, signal: &Signal, k: usize) -> Result<Timing> {
    if k < MIN_ITERATIONS {
        return Err(Error::Usage(format!("benchmark needs k >= {MIN_ITERATIONS}, got {k}")));
    }
    let params = info.resolve(overrides)?;
    let _guard = EXCLUSIVE.lock().unwrap_or_else(|poisoned| poisoned.into_inner());
    let mut samples = Vec::with_capacity(k - 1);
    for i in 0..k {
        let start = Instant::now();
        black_box(info.run(black_box(signal), &params)?);
        let elapsed = start.elapsed().as_secs_f64();
        if i > 0 {
            samples.push(elapsed);
        }
    }
    Ok(Timing::from_samples(info.label, samples))
}

pub fn benchmark_label(label: &str, overrides: &ParamSet, signal: &Signal, k: usize) -> Result<Timing> {
    benchmark(&estimator(label)?, overrides, signal, k)
}
