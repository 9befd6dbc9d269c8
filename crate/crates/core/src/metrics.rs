//! Measurement constructs: normalized individual error, cross-party
//! polarization, the Revision Coefficient (a partial correlation), and the
//! collective/individual/diversity squared-error decomposition.
//!
//! All quantities are normalized by the standard deviation of a question's
//! baseline estimates so that tasks of wildly different scales are
//! comparable.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("question context invalid: {0}")]
    InvalidContext(String),
    #[error("polarization undefined: one party has no estimates")]
    EmptyParty,
    #[error("input vectors must have equal length >= {min}, got {got}")]
    TooFewObservations { min: usize, got: usize },
    #[error("input vectors have mismatched lengths")]
    LengthMismatch,
    #[error("variance of an input vector is zero; correlation undefined")]
    DegenerateVariance,
    #[error("control correlation within 1e-12 of +/-1; partial correlation unstable")]
    NumericalInstability,
}

/// Per-question normalization context: the true value and the sample
/// standard deviation of the baseline (round 1) estimates.
#[derive(Debug, Clone, Copy)]
pub struct QuestionContext {
    true_value: f64,
    baseline_sd: f64,
}

impl QuestionContext {
    pub fn new(true_value: f64, baseline_sd: f64) -> Result<Self, MetricsError> {
        if !true_value.is_finite() {
            return Err(MetricsError::InvalidContext("true value not finite".into()));
        }
        if !(baseline_sd.is_finite() && baseline_sd > 0.0) {
            return Err(MetricsError::InvalidContext(format!(
                "baseline standard deviation must be positive, got {baseline_sd}"
            )));
        }
        Ok(QuestionContext { true_value, baseline_sd })
    }

    /// Build the context from the baseline estimates themselves, using the
    /// sample (n-1) standard deviation. Degenerate questions (fewer than 2
    /// estimates, or all estimates identical) are rejected.
    pub fn from_estimates(true_value: f64, baseline: &[f64]) -> Result<Self, MetricsError> {
        if baseline.len() < 2 {
            return Err(MetricsError::InvalidContext(format!(
                "need at least 2 baseline estimates, got {}",
                baseline.len()
            )));
        }
        let sd = sample_sd(baseline);
        Self::new(true_value, sd)
    }

    pub fn true_value(&self) -> f64 {
        self.true_value
    }

    pub fn baseline_sd(&self) -> f64 {
        self.baseline_sd
    }

    /// Distance between two values in baseline-SD units.
    pub fn normalized_distance(&self, a: f64, b: f64) -> f64 {
        (a - b).abs() / self.baseline_sd
    }
}

fn sample_sd(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
    (ss / (n - 1.0)).sqrt()
}

/// Absolute distance from the truth in baseline-SD units.
pub fn individual_error(estimate: f64, ctx: &QuestionContext) -> f64 {
    (estimate - ctx.true_value).abs() / ctx.baseline_sd
}

/// Mean normalized distance over all cross-party pairs.
pub fn polarization(
    dem_estimates: &[f64],
    rep_estimates: &[f64],
    ctx: &QuestionContext,
) -> Result<f64, MetricsError> {
    if dem_estimates.is_empty() || rep_estimates.is_empty() {
        return Err(MetricsError::EmptyParty);
    }
    let mut total = 0.0;
    for &d in dem_estimates {
        for &r in rep_estimates {
            total += (d - r).abs();
        }
    }
    let pairs = (dem_estimates.len() * rep_estimates.len()) as f64;
    Ok(total / pairs / ctx.baseline_sd)
}

fn pearson_raw(x: &[f64], y: &[f64]) -> Result<f64, MetricsError> {
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
        return Err(MetricsError::DegenerateVariance);
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Partial correlation between initial errors and absolute revisions,
/// controlling for the social signal each agent received. Closed form:
/// `(r_ed - r_es * r_ds) / sqrt((1 - r_es^2)(1 - r_ds^2))`.
pub fn revision_coefficient(
    initial_errors: &[f64],
    revisions: &[f64],
    social_signals: &[f64],
) -> Result<f64, MetricsError> {
    if initial_errors.len() != revisions.len() || initial_errors.len() != social_signals.len() {
        return Err(MetricsError::LengthMismatch);
    }
    if initial_errors.len() < 3 {
        return Err(MetricsError::TooFewObservations { min: 3, got: initial_errors.len() });
    }
    let r_ed = pearson_raw(initial_errors, revisions)?;
    let r_es = pearson_raw(initial_errors, social_signals)?;
    let r_ds = pearson_raw(revisions, social_signals)?;
    if (1.0 - r_es.abs()) < 1e-12 || (1.0 - r_ds.abs()) < 1e-12 {
        return Err(MetricsError::NumericalInstability);
    }
    let r = (r_ed - r_es * r_ds) / ((1.0 - r_es * r_es) * (1.0 - r_ds * r_ds)).sqrt();
    Ok(r.clamp(-1.0, 1.0))
}

/// Squared-error decomposition of a set of estimates against the truth:
/// collective squared error, mean individual squared error, and predictive
/// diversity (the population variance of the estimates). The first equals
/// the difference of the other two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DptDecomposition {
    pub collective_sqe: f64,
    pub individual_sqe: f64,
    pub predictive_diversity: f64,
}

pub fn dpt_decompose(estimates: &[f64], true_value: f64) -> DptDecomposition {
    assert!(!estimates.is_empty(), "dpt_decompose needs at least one estimate");
    let n = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / n;
    let collective_sqe = (mean - true_value) * (mean - true_value);
    let individual_sqe =
        estimates.iter().map(|x| (x - true_value) * (x - true_value)).sum::<f64>() / n;
    let predictive_diversity = estimates.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    DptDecomposition { collective_sqe, individual_sqe, predictive_diversity }
}
