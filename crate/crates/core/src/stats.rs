//! Confidence intervals and replica seeding.

use serde::{Deserialize, Serialize};

use crate::field::mix64;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Per-replica seeds derived from one base seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplicaPlan {
    pub replicas: usize,
    pub base_seed: u64,
}

impl ReplicaPlan {
    pub fn new(replicas: usize, base_seed: u64) -> Self {
        ReplicaPlan { replicas, base_seed }
    }

    pub fn seed(&self, replica: usize) -> u64 {
        mix64(self.base_seed ^ mix64(replica as u64 + 1))
    }

    pub fn seeds(&self) -> Vec<u64> {
        (0..self.replicas).map(|i| self.seed(i)).collect()
    }
}

/// Runs `f` on every replica index and returns results in index order, so
/// the outcome does not depend on scheduling.
pub fn map_replicas<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Point estimate with a 95% interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateCI {
    pub point: f64,
    pub lo: f64,
    pub hi: f64,
    pub replicas: usize,
    pub censored_count: usize,
}

impl EstimateCI {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    /// Standard error implied by the interval.
    pub fn stderr(&self) -> f64 {
        self.half_width() / Z95
    }
}

/// Wilson score interval for `successes` out of `n`.
pub fn wilson(successes: usize, n: usize, censored: usize) -> EstimateCI {
    if n == 0 {
        return EstimateCI {
            point: 0.0,
            lo: 0.0,
            hi: 1.0,
            replicas: 0,
            censored_count: censored,
        };
    }
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = Z95 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    EstimateCI {
        point: p,
        lo: (centre - half).max(0.0).min(p),
        hi: (centre + half).min(1.0).max(p),
        replicas: n,
        censored_count: censored,
    }
}

/// Sample mean and its standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Normal-approximation interval for a mean.
pub fn mean_ci(xs: &[f64], censored: usize) -> EstimateCI {
    let (m, se) = mean_se(xs);
    EstimateCI {
        point: m,
        lo: m - Z95 * se,
        hi: m + Z95 * se,
        replicas: xs.len(),
        censored_count: censored,
    }
}
