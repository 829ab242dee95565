//! Monte Carlo plumbing shared by the simulators: run configuration,
//! reports with Wilson intervals, and a deterministic counting fan-out.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Sample count, seed and thread count of a Monte Carlo run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self {
            samples,
            seed,
            workers: 1,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::validation("samples must be at least 1"));
        }
        if self.workers == 0 {
            return Err(Error::validation("workers must be at least 1"));
        }
        Ok(())
    }
}

/// Empirical probability with a Wilson 95% interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub samples: u64,
    pub seed: u64,
    #[serde(default)]
    pub meta: BTreeMap<String, String>,
}

impl McReport {
    pub fn from_counts(successes: u64, samples: u64, seed: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(successes, samples, Z95);
        Self {
            estimate: successes as f64 / samples as f64,
            ci_low,
            ci_high,
            samples,
            seed,
            meta: BTreeMap::new(),
        }
    }

    pub fn tag(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.insert(key.to_string(), value.to_string());
        self
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }
}

/// Wilson score interval for `successes` out of `n` trials. The interval is
/// clamped to `[0, 1]` and always contains the point estimate.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    assert!(n > 0, "wilson interval needs at least one trial");
    let n_f = n as f64;
    let phat = successes as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let center = (phat + z2 / (2.0 * n_f)) / denom;
    let half = z * (phat * (1.0 - phat) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    let low = (center - half).max(0.0).min(phat);
    let high = (center + half).min(1.0).max(phat);
    (low, high)
}

/// Runs `kernel(sample_index, counters)` for every sample in `0..samples`
/// and returns the summed counters.
///
/// Samples are split into contiguous chunks, one per worker. Integer sums
/// commute, so the result is identical for every worker count.
pub fn count_parallel<F>(samples: u64, workers: usize, counters: usize, kernel: F) -> Vec<u64>
where
    F: Fn(u64, &mut [u64]) + Sync,
{
    let workers = workers.max(1).min(samples.max(1) as usize);
    if workers == 1 {
        let mut acc = vec![0u64; counters];
        for i in 0..samples {
            kernel(i, &mut acc);
        }
        return acc;
    }
    let chunk = samples.div_ceil(workers as u64);
    let kernel = &kernel;
    let partial: Vec<Vec<u64>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers as u64)
            .map(|w| {
                scope.spawn(move || {
                    let mut acc = vec![0u64; counters];
                    let start = w * chunk;
                    let end = ((w + 1) * chunk).min(samples);
                    for i in start..end {
                        kernel(i, &mut acc);
                    }
                    acc
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("monte carlo worker panicked"))
            .collect()
    });
    let mut acc = vec![0u64; counters];
    for part in partial {
        for (a, b) in acc.iter_mut().zip(part) {
            *a += b;
        }
    }
    acc
}
