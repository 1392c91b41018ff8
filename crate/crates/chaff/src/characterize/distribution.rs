//! Order-statistic distributions with nearest-rank percentiles.

/// A sorted sample set over arbitrary real values.
///
/// Percentiles use the nearest-rank method: `percentile(p)` is the sample at
/// rank `ceil(p/100 * n)` (1-based, clamped to `[1, n]`), so the result is
/// always an actual sample, `percentile(0)` is the minimum, and
/// `percentile(100)` is the maximum.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SampleDistribution {
    samples: Vec<f64>,
}

impl SampleDistribution {
    pub fn new(mut samples: Vec<f64>) -> Self {
        samples.sort_by(|a, b| a.total_cmp(b));
        SampleDistribution { samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sorted samples, ascending.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn min(&self) -> Option<f64> {
        self.samples.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.samples.last().copied()
    }

    pub fn mean(&self) -> Option<f64> {
        if self.samples.is_empty() {
            return None;
        }
        Some(self.samples.iter().sum::<f64>() / self.samples.len() as f64)
    }

    /// Nearest-rank percentile for `p` in `[0, 100]`.
    pub fn percentile(&self, p: f64) -> Option<f64> {
        if self.samples.is_empty() {
            return None;
        }
        debug_assert!((0.0..=100.0).contains(&p), "percentile {p} out of range");
        let p = p.clamp(0.0, 100.0);
        let n = self.samples.len();
        let rank = ((p / 100.0) * n as f64).ceil() as usize;
        Some(self.samples[rank.clamp(1, n) - 1])
    }

    /// First, second, and third quartiles.
    pub fn quartiles(&self) -> Option<(f64, f64, f64)> {
        Some((
            self.percentile(25.0)?,
            self.percentile(50.0)?,
            self.percentile(75.0)?,
        ))
    }
}

/// A distribution of non-negative durations in seconds.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LatencyDistribution {
    inner: SampleDistribution,
}

impl LatencyDistribution {
    /// Builds from durations in seconds. Callers filter negative latencies
    /// before construction; this is asserted in debug builds.
    pub fn from_seconds(samples: Vec<f64>) -> Self {
        debug_assert!(samples.iter().all(|&s| s >= 0.0), "negative latency sample");
        LatencyDistribution {
            inner: SampleDistribution::new(samples),
        }
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        self.inner.samples()
    }

    pub fn percentile(&self, p: f64) -> Option<f64> {
        self.inner.percentile(p)
    }

    pub fn min(&self) -> Option<f64> {
        self.inner.min()
    }

    pub fn max(&self) -> Option<f64> {
        self.inner.max()
    }

    pub fn mean(&self) -> Option<f64> {
        self.inner.mean()
    }

    pub fn as_sample_distribution(&self) -> &SampleDistribution {
        &self.inner
    }
}
