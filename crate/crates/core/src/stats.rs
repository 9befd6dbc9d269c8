//! Correlation, paired permutation tests and bootstrap intervals.
//!
//! Inference on matched control/treatment observations is done by
//! within-pair sign-flip permutation, which respects the pairing structure
//! without fitting a model. Every resample derives its generator from
//! `(seed, resample_index)`, so results are identical however the loop is
//! scheduled.

use thiserror::Error;

use rand::Rng;

use crate::seed;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("input vectors have mismatched lengths")]
    LengthMismatch,
    #[error("need at least {min} values, got {got}")]
    TooFewValues { min: usize, got: usize },
    #[error("need at least 2 pairs, got {0}")]
    TooFewPairs(usize),
    #[error("input vector is constant; correlation undefined")]
    DegenerateVariance,
    #[error("empty input")]
    EmptyInput,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Matched control/treatment observations; pairing is positional.
#[derive(Debug, Clone)]
pub struct PairedSample {
    control: Vec<f64>,
    treatment: Vec<f64>,
    labels: Vec<String>,
}

impl PairedSample {
    pub fn new(
        control: Vec<f64>,
        treatment: Vec<f64>,
        labels: Vec<String>,
    ) -> Result<Self, StatsError> {
        if control.len() != treatment.len() || control.len() != labels.len() {
            return Err(StatsError::LengthMismatch);
        }
        if control.len() < 2 {
            return Err(StatsError::TooFewPairs(control.len()));
        }
        Ok(PairedSample { control, treatment, labels })
    }

    pub fn len(&self) -> usize {
        self.control.len()
    }

    pub fn is_empty(&self) -> bool {
        self.control.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Per-pair treatment minus control differences.
    pub fn differences(&self) -> Vec<f64> {
        self.treatment.iter().zip(&self.control).map(|(t, c)| t - c).collect()
    }
}

/// Outcome of a paired permutation test, with a percentile-bootstrap
/// interval for the mean difference.
#[derive(Debug, Clone, PartialEq)]
pub struct TestResult {
    pub mean_difference: f64,
    pub p_value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_resamples: usize,
}

/// Product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch);
    }
    if x.len() < 2 {
        return Err(StatsError::TooFewValues { min: 2, got: x.len() });
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::DegenerateVariance);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn check_resamples(n_resamples: usize) -> Result<(), StatsError> {
    if n_resamples < 1000 {
        return Err(StatsError::InvalidParameter(format!(
            "need at least 1000 resamples, got {n_resamples}"
        )));
    }
    Ok(())
}

/// Two-sided test of mean(treatment - control) = 0 under random
/// within-pair sign flips. Deterministic given the seed.
pub fn paired_permutation_test(
    sample: &PairedSample,
    n_resamples: usize,
    seed_value: u64,
) -> Result<TestResult, StatsError> {
    check_resamples(n_resamples)?;
    let diffs = sample.differences();
    let observed = mean(&diffs);
    let n = diffs.len() as f64;

    let mut at_least_as_extreme = 0usize;
    for i in 0..n_resamples {
        let mut rng = seed::rng(seed::derive(seed_value, i as u64));
        let mut sum = 0.0;
        for &d in &diffs {
            sum += if rng.random::<bool>() { d } else { -d };
        }
        if (sum / n).abs() >= observed.abs() - 1e-15 {
            at_least_as_extreme += 1;
        }
    }
    let p_value = (at_least_as_extreme + 1) as f64 / (n_resamples + 1) as f64;
    let (ci_low, ci_high) =
        bootstrap_ci(&diffs, Statistic::Mean, n_resamples, 0.95, seed::derive(seed_value, u64::MAX))?;
    Ok(TestResult { mean_difference: observed, p_value: p_value.min(1.0), ci_low, ci_high, n_resamples })
}

/// Statistic resampled by [`bootstrap_ci`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    Mean,
}

/// Percentile bootstrap interval. Deterministic given the seed; the same
/// seed reuses the same resamples at every level, so widening the level
/// can only widen the interval.
pub fn bootstrap_ci(
    values: &[f64],
    statistic: Statistic,
    n_resamples: usize,
    level: f64,
    seed_value: u64,
) -> Result<(f64, f64), StatsError> {
    if values.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    check_resamples(n_resamples)?;
    if !(level > 0.0 && level < 1.0) {
        return Err(StatsError::InvalidParameter(format!("level {level} must lie in (0,1)")));
    }
    let n = values.len();
    let mut stats = Vec::with_capacity(n_resamples);
    let mut resample = vec![0.0f64; n];
    for i in 0..n_resamples {
        let mut rng = seed::rng(seed::derive(seed_value, i as u64));
        for slot in resample.iter_mut() {
            *slot = values[rng.random_range(0..n)];
        }
        let stat = match statistic {
            Statistic::Mean => mean(&resample),
        };
        stats.push(stat);
    }
    stats.sort_by(|a, b| a.partial_cmp(b).expect("finite statistics"));
    let alpha = (1.0 - level) / 2.0;
    let lo_idx = ((alpha * n_resamples as f64).floor() as usize).min(n_resamples - 1);
    let hi_idx = (((1.0 - alpha) * n_resamples as f64).ceil() as usize)
        .saturating_sub(1)
        .min(n_resamples - 1);
    Ok((stats[lo_idx], stats[hi_idx]))
}
