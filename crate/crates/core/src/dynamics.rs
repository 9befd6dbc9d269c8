//! Self-weight modulation and the synchronous weighted-averaging update.
//!
//! Each agent revises its estimate toward the mean of its neighbors,
//! weighted by a per-agent self-weight. The self-weight starts from the
//! agent's calibrated baseline and is shifted once, before the first
//! update, by two condition-dependent terms: how the agent's evidence
//! quality compares with its neighbors', and what fraction of its
//! neighbors share its party. Control and treatment runs differ only in
//! the coefficients of those terms.

use rand::seq::index;
use thiserror::Error;

use crate::calib::AgentProfile;
use crate::graph::Network;
use crate::seed;

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("profile count {got} does not match network node count {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("homophily term requested but agent {agent} has no party label")]
    MissingPartyForHomophily { agent: usize },
    #[error("invalid coefficients: {0}")]
    InvalidCoefficients(String),
    #[error("treatment fraction {0} must lie in [0,1]")]
    InvalidFraction(f64),
    #[error("round count {0} must be at least 2")]
    InvalidRounds(usize),
}

/// Which arm of a matched pair an agent ran under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    Control,
    Treatment,
}

impl Condition {
    pub fn label(&self) -> &'static str {
        match self {
            Condition::Control => "control",
            Condition::Treatment => "treatment",
        }
    }
}

/// Coefficients of the self-weight shift for one condition: an intercept
/// and slope on the evidence-quality gap (slope must be non-negative), and
/// an intercept and slope on the same-party neighbor fraction (slope must
/// be non-positive).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionCoefficients {
    evidence_intercept: f64,
    evidence_slope: f64,
    homophily_intercept: f64,
    homophily_slope: f64,
}

impl ConditionCoefficients {
    pub fn new(
        evidence_intercept: f64,
        evidence_slope: f64,
        homophily_intercept: f64,
        homophily_slope: f64,
    ) -> Result<Self, DynamicsError> {
        let all = [evidence_intercept, evidence_slope, homophily_intercept, homophily_slope];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(DynamicsError::InvalidCoefficients("coefficients must be finite".into()));
        }
        if evidence_slope < 0.0 {
            return Err(DynamicsError::InvalidCoefficients(format!(
                "evidence slope must be >= 0, got {evidence_slope}"
            )));
        }
        if homophily_slope > 0.0 {
            return Err(DynamicsError::InvalidCoefficients(format!(
                "homophily slope must be <= 0, got {homophily_slope}"
            )));
        }
        Ok(ConditionCoefficients {
            evidence_intercept,
            evidence_slope,
            homophily_intercept,
            homophily_slope,
        })
    }

    pub fn evidence_intercept(&self) -> f64 {
        self.evidence_intercept
    }

    pub fn evidence_slope(&self) -> f64 {
        self.evidence_slope
    }

    pub fn homophily_intercept(&self) -> f64 {
        self.homophily_intercept
    }

    pub fn homophily_slope(&self) -> f64 {
        self.homophily_slope
    }

    /// True when `treatment` reacts more steeply to evidence gaps and less
    /// steeply to homophily than `self` — the ordering a meaningful
    /// control/treatment pair is expected to satisfy.
    pub fn admits_treatment(&self, treatment: &ConditionCoefficients) -> bool {
        treatment.evidence_slope > self.evidence_slope
            && treatment.homophily_slope > self.homophily_slope
    }
}

/// Default control-arm coefficients.
pub fn default_control_coefficients() -> ConditionCoefficients {
    ConditionCoefficients::new(0.0, 0.10, 0.0, -0.20).unwrap()
}

/// Default treatment-arm coefficients: steeper on evidence, flatter on
/// homophily. The homophily intercept sits slightly below the control
/// arm's average homophily effect, so treated agents stay marginally more
/// receptive to peers overall while their self-weight barely reacts to how
/// partisan the neighborhood is.
pub fn default_treatment_coefficients() -> ConditionCoefficients {
    ConditionCoefficients::new(0.0, 0.30, -0.05, -0.05).unwrap()
}

/// One agent's trajectory through a single run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub agent_index: usize,
    pub condition: Condition,
    /// Estimates at rounds 1..=R (index 0 is the untouched baseline).
    pub estimates: Vec<f64>,
    /// Self-weight actually used at every update, after modulation and
    /// clipping to [0, 1].
    pub modulated_alpha: f64,
    /// Fraction of neighbors sharing the agent's party; absent when the
    /// homophily term is disabled.
    pub homophily_fraction: Option<f64>,
    /// Agent's evidence quality minus the mean of its neighbors'.
    pub evidence_gap: f64,
}

/// Shift the baseline self-weight by the evidence-gap and homophily terms
/// and clip to [0, 1]. An absent homophily fraction zeroes that whole term
/// (intercept included).
pub fn modulate_self_weight(
    alpha0: f64,
    own_evidence: f64,
    neighbor_mean_evidence: f64,
    homophily_fraction: Option<f64>,
    coeffs: &ConditionCoefficients,
) -> f64 {
    let evidence_term =
        coeffs.evidence_intercept + coeffs.evidence_slope * (own_evidence - neighbor_mean_evidence);
    let homophily_term = match homophily_fraction {
        Some(h) => coeffs.homophily_intercept + coeffs.homophily_slope * h,
        None => 0.0,
    };
    (alpha0 + evidence_term + homophily_term).clamp(0.0, 1.0)
}

/// One weighted-averaging update: `alpha * own + (1 - alpha) * neighbor_mean`.
pub fn degroot_step(own: f64, neighbor_mean: f64, alpha: f64) -> f64 {
    alpha * own + (1.0 - alpha) * neighbor_mean
}

/// Run the control and treatment arms of one matched pair.
///
/// Both arms share the network, node assignment, baseline estimates,
/// baseline self-weights and evidence scores; they differ only in which
/// coefficient set modulates each agent's self-weight. In the treatment
/// arm a seeded subset of `ceil(fraction * n)` agents receives the
/// treatment coefficients and everyone else keeps the control ones.
/// Self-weights are computed once, before the first update, and reused at
/// every round; updates are synchronous.
#[allow(clippy::too_many_arguments)]
pub fn run_matched_pair(
    network: &Network,
    profiles: &[AgentProfile],
    control: &ConditionCoefficients,
    treatment: &ConditionCoefficients,
    treatment_fraction: f64,
    homophily_enabled: bool,
    rounds: usize,
    subset_seed: u64,
) -> Result<(Vec<TrajectoryRecord>, Vec<TrajectoryRecord>), DynamicsError> {
    let n = network.node_count();
    if profiles.len() != n {
        return Err(DynamicsError::LengthMismatch { expected: n, got: profiles.len() });
    }
    if !(0.0..=1.0).contains(&treatment_fraction) || !treatment_fraction.is_finite() {
        return Err(DynamicsError::InvalidFraction(treatment_fraction));
    }
    if rounds < 2 {
        return Err(DynamicsError::InvalidRounds(rounds));
    }
    if homophily_enabled {
        if let Some(agent) = (0..n).find(|&i| profiles[i].party.is_none()) {
            return Err(DynamicsError::MissingPartyForHomophily { agent });
        }
    }

    // Static per-agent quantities, shared by both arms.
    let neighbor_mean_evidence: Vec<f64> = (0..n)
        .map(|i| {
            let nbrs = network.neighbors(i);
            nbrs.iter().map(|&j| profiles[j].evidence_quality).sum::<f64>() / nbrs.len() as f64
        })
        .collect();
    let homophily: Vec<Option<f64>> = (0..n)
        .map(|i| {
            if !homophily_enabled {
                return None;
            }
            let own = profiles[i].party;
            let nbrs = network.neighbors(i);
            let same = nbrs.iter().filter(|&&j| profiles[j].party == own).count();
            Some(same as f64 / nbrs.len() as f64)
        })
        .collect();

    let treated = {
        let count = ((treatment_fraction * n as f64).ceil() as usize).min(n);
        let mut mask = vec![false; n];
        if count > 0 {
            let mut rng = seed::rng(subset_seed);
            for idx in index::sample(&mut rng, n, count) {
                mask[idx] = true;
            }
        }
        mask
    };

    let run_arm = |condition: Condition| -> Vec<TrajectoryRecord> {
        let alphas: Vec<f64> = (0..n)
            .map(|i| {
                let coeffs = match condition {
                    Condition::Control => control,
                    Condition::Treatment => {
                        if treated[i] {
                            treatment
                        } else {
                            control
                        }
                    }
                };
                modulate_self_weight(
                    profiles[i].alpha0,
                    profiles[i].evidence_quality,
                    neighbor_mean_evidence[i],
                    homophily[i],
                    coeffs,
                )
            })
            .collect();

        let mut history: Vec<Vec<f64>> = Vec::with_capacity(rounds);
        history.push(profiles.iter().map(|p| p.initial_estimate).collect());
        for _ in 1..rounds {
            let current = history.last().unwrap();
            let next: Vec<f64> = (0..n)
                .map(|i| {
                    let nbrs = network.neighbors(i);
                    let mean =
                        nbrs.iter().map(|&j| current[j]).sum::<f64>() / nbrs.len() as f64;
                    degroot_step(current[i], mean, alphas[i])
                })
                .collect();
            history.push(next);
        }

        (0..n)
            .map(|i| TrajectoryRecord {
                agent_index: i,
                condition,
                estimates: history.iter().map(|round| round[i]).collect(),
                modulated_alpha: alphas[i],
                homophily_fraction: homophily[i],
                evidence_gap: profiles[i].evidence_quality - neighbor_mean_evidence[i],
            })
            .collect()
    };

    Ok((run_arm(Condition::Control), run_arm(Condition::Treatment)))
}
