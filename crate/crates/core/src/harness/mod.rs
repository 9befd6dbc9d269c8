//! End-to-end experiment orchestration: load or synthesize calibration
//! data, run matched control/treatment replications over seeded networks,
//! compute per-round metrics, and persist results deterministically.
//!
//! Replication cells are independent tasks; rows are sorted by
//! `(question, replication, condition, round)` before writing, so the
//! output is byte-identical no matter how many worker threads ran.

mod config;
pub mod report;

pub use config::{
    config_to_string, load_config, manifest, parse_config, DatasetSource, ExperimentConfig,
};

use std::fs;
use std::io;
use std::path::Path;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use thiserror::Error;

use crate::calib::{self, AgentProfile, CalibError, Dataset, Party};
use crate::dynamics::{self, Condition, DynamicsError, TrajectoryRecord};
use crate::graph::{self, GraphError};
use crate::metrics::{self, MetricsError, QuestionContext};
use crate::seed;
use crate::stats::{self, PairedSample, StatsError};

/// Resample count used for the paired permutation tests in sweep summaries.
pub const INFERENCE_RESAMPLES: usize = 10_000;
/// Seed-tree label for inference randomness (kept apart from cell streams).
const INFERENCE_STREAM: u64 = 6;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("question `{question}` replication {replication}: {source}")]
    Cell {
        question: String,
        replication: usize,
        #[source]
        source: Box<HarnessError>,
    },
    #[error(transparent)]
    Calib(#[from] CalibError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("{path}: {msg}")]
    ResultFile { path: String, msg: String },
}

/// One aggregate observation: a question, replication, condition and round.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub question_id: String,
    pub replication: usize,
    pub condition: Condition,
    /// 1-based; round 1 is the untouched baseline.
    pub round: usize,
    pub mean_error: f64,
    pub collective_sqe: f64,
    pub individual_sqe: f64,
    pub predictive_diversity: f64,
    /// Present only for party-complete questions with both parties seen.
    pub polarization: Option<f64>,
    /// Present only on final-round rows, and only when defined.
    pub revision_coefficient: Option<f64>,
}

/// Per-agent inputs of the revision analysis, for one condition of one
/// replication. All three values are in baseline-SD units.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentRow {
    pub question_id: String,
    pub replication: usize,
    pub condition: Condition,
    pub agent: usize,
    pub initial_error: f64,
    pub revision: f64,
    pub social_signal: f64,
}

/// Everything a run produces, in deterministic order.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub rows: Vec<ResultRow>,
    pub agent_rows: Vec<AgentRow>,
    pub question_ids: Vec<String>,
}

struct PreparedQuestion {
    index: usize,
    id: String,
    true_value: f64,
    ctx: QuestionContext,
    estimates: Vec<f64>,
    initial_errors: Vec<f64>,
    alpha0: Vec<Option<f64>>,
    parties: Vec<Option<Party>>,
    /// Every respondent carries a party and both parties are represented.
    party_complete: bool,
}

fn prepare_questions(dataset: &Dataset) -> Result<Vec<PreparedQuestion>, HarnessError> {
    dataset
        .iter()
        .enumerate()
        .map(|(index, (q, rs))| {
            let estimates: Vec<f64> = rs.iter().map(|r| r.initial_estimate).collect();
            let ctx = QuestionContext::from_estimates(q.true_value, &estimates).map_err(|e| {
                HarnessError::Config(format!("question `{}`: {e}", q.question_id))
            })?;
            let initial_errors: Vec<f64> =
                estimates.iter().map(|&x| metrics::individual_error(x, &ctx)).collect();
            let parties: Vec<Option<Party>> = rs.iter().map(|r| r.party).collect();
            let party_complete = parties.iter().all(|p| p.is_some())
                && parties.contains(&Some(Party::D))
                && parties.contains(&Some(Party::R));
            Ok(PreparedQuestion {
                index,
                id: q.question_id.clone(),
                true_value: q.true_value,
                ctx,
                estimates,
                initial_errors,
                alpha0: rs.iter().map(|r| r.alpha0).collect(),
                parties,
                party_complete,
            })
        })
        .collect()
}

/// Resolve the configured dataset source into memory.
pub fn resolve_dataset(cfg: &ExperimentConfig) -> Result<Dataset, HarnessError> {
    match &cfg.dataset {
        DatasetSource::Path(path) => Ok(calib::load_dataset(path)?),
        DatasetSource::Synthetic(spec) => {
            Ok(calib::generate_synthetic_dataset(spec, seed::derive(cfg.master_seed, u64::MAX))?)
        }
    }
}

struct CellOutput {
    question_index: usize,
    replication: usize,
    rows: Vec<ResultRow>,
    agent_rows: Vec<AgentRow>,
}

fn run_cell(
    cfg: &ExperimentConfig,
    q: &PreparedQuestion,
    replication: usize,
) -> Result<CellOutput, HarnessError> {
    let n = q.estimates.len();
    let q_seed = seed::derive(cfg.master_seed, q.index as u64);
    let rep_seed = seed::derive(q_seed, replication as u64);
    let network_seed = if cfg.regenerate_topology {
        seed::derive(rep_seed, seed::NETWORK_STREAM)
    } else {
        seed::derive(q_seed, seed::NETWORK_STREAM)
    };

    let network = graph::generate_network(cfg.network, n, network_seed)?;

    // Synthesis happens in respondent order; assignment permutes afterwards.
    let alpha_seed = seed::derive(rep_seed, seed::ALPHA_STREAM);
    let synthesized_alpha: Option<Vec<f64>> = if q.alpha0.iter().any(|a| a.is_none()) {
        Some(calib::synthesize_alpha0(&q.initial_errors, cfg.alpha_synthesis, alpha_seed)?)
    } else {
        None
    };
    let evidence = calib::synthesize_evidence(
        &q.initial_errors,
        cfg.evidence_noise_sigma,
        seed::derive(rep_seed, seed::EVIDENCE_STREAM),
    )?;

    let assignment: Vec<usize> = {
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rng = seed::rng(seed::derive(rep_seed, seed::ASSIGNMENT_STREAM));
        perm.shuffle(&mut rng);
        perm
    };

    let profiles: Vec<AgentProfile> = assignment
        .iter()
        .map(|&r| AgentProfile {
            initial_estimate: q.estimates[r],
            alpha0: q.alpha0[r]
                .unwrap_or_else(|| synthesized_alpha.as_ref().expect("synthesized")[r]),
            party: q.parties[r],
            evidence_quality: evidence[r],
        })
        .collect();

    let (control_arm, treatment_arm) = dynamics::run_matched_pair(
        &network,
        &profiles,
        &cfg.control,
        &cfg.treatment,
        cfg.treatment_fraction,
        cfg.homophily_enabled,
        cfg.rounds,
        seed::derive(rep_seed, seed::SUBSET_STREAM),
    )?;

    // Social signal: distance to the neighborhood mean at round 1.
    let social_signals: Vec<f64> = (0..n)
        .map(|i| {
            let nbrs = network.neighbors(i);
            let mean =
                nbrs.iter().map(|&j| profiles[j].initial_estimate).sum::<f64>() / nbrs.len() as f64;
            q.ctx.normalized_distance(profiles[i].initial_estimate, mean)
        })
        .collect();

    let mut rows = Vec::with_capacity(2 * cfg.rounds);
    let mut agent_rows = Vec::with_capacity(2 * n);
    for (condition, arm) in
        [(Condition::Control, &control_arm), (Condition::Treatment, &treatment_arm)]
    {
        let initial_errors: Vec<f64> = arm
            .iter()
            .map(|rec| metrics::individual_error(rec.estimates[0], &q.ctx))
            .collect();
        let revisions: Vec<f64> = arm
            .iter()
            .map(|rec| {
                q.ctx.normalized_distance(rec.estimates[cfg.rounds - 1], rec.estimates[0])
            })
            .collect();
        let revision_coefficient =
            metrics::revision_coefficient(&initial_errors, &revisions, &social_signals).ok();

        for round in 1..=cfg.rounds {
            let snapshot: Vec<f64> = arm.iter().map(|rec| rec.estimates[round - 1]).collect();
            let mean_error = snapshot
                .iter()
                .map(|&x| metrics::individual_error(x, &q.ctx))
                .sum::<f64>()
                / n as f64;
            let dpt = metrics::dpt_decompose(&snapshot, q.true_value);
            let polarization = if q.party_complete {
                let dem: Vec<f64> = arm
                    .iter()
                    .zip(&profiles)
                    .filter(|(_, p)| p.party == Some(Party::D))
                    .map(|(rec, _)| rec.estimates[round - 1])
                    .collect();
                let rep: Vec<f64> = arm
                    .iter()
                    .zip(&profiles)
                    .filter(|(_, p)| p.party == Some(Party::R))
                    .map(|(rec, _)| rec.estimates[round - 1])
                    .collect();
                Some(metrics::polarization(&dem, &rep, &q.ctx)?)
            } else {
                None
            };
            rows.push(ResultRow {
                question_id: q.id.clone(),
                replication,
                condition,
                round,
                mean_error,
                collective_sqe: dpt.collective_sqe,
                individual_sqe: dpt.individual_sqe,
                predictive_diversity: dpt.predictive_diversity,
                polarization,
                revision_coefficient: if round == cfg.rounds { revision_coefficient } else { None },
            });
        }

        agent_rows.extend(arm.iter().enumerate().map(|(i, _rec): (usize, &TrajectoryRecord)| {
            AgentRow {
                question_id: q.id.clone(),
                replication,
                condition,
                agent: i,
                initial_error: initial_errors[i],
                revision: revisions[i],
                social_signal: social_signals[i],
            }
        }));
    }

    Ok(CellOutput { question_index: q.index, replication, rows, agent_rows })
}

/// Run the full experiment: every question times every replication, both
/// conditions, all rounds. Total row count is
/// `questions * replications * 2 * rounds`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput, HarnessError> {
    cfg.validate()?;
    let dataset = resolve_dataset(cfg)?;
    if cfg.homophily_enabled {
        for (q, rs) in &dataset {
            if rs.iter().any(|r| r.party.is_none()) {
                return Err(HarnessError::Config(format!(
                    "homophily enabled but question `{}` has respondents without a party label",
                    q.question_id
                )));
            }
        }
    }
    let questions = prepare_questions(&dataset)?;

    let cells: Vec<(usize, usize)> = questions
        .iter()
        .flat_map(|q| (0..cfg.replications).map(move |r| (q.index, r)))
        .collect();
    let mut outputs: Vec<CellOutput> = cells
        .par_iter()
        .map(|&(qi, rep)| {
            run_cell(cfg, &questions[qi], rep).map_err(|e| HarnessError::Cell {
                question: questions[qi].id.clone(),
                replication: rep,
                source: Box::new(e),
            })
        })
        .collect::<Result<_, _>>()?;

    outputs.sort_by_key(|c| (c.question_index, c.replication));
    let mut rows = Vec::with_capacity(outputs.len() * 2 * cfg.rounds);
    let mut agent_rows = Vec::new();
    for cell in outputs {
        rows.extend(cell.rows);
        agent_rows.extend(cell.agent_rows);
    }
    Ok(ExperimentOutput {
        rows,
        agent_rows,
        question_ids: questions.iter().map(|q| q.id.clone()).collect(),
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub const RESULTS_HEADER: &str = "question_id,replication,condition,round,mean_error,\
collective_sqe,individual_sqe,predictive_diversity,polarization,revision_coefficient";

pub fn write_results_csv<W: io::Write>(rows: &[ResultRow], w: W) -> Result<(), HarnessError> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(RESULTS_HEADER.split(','))?;
    for r in rows {
        wtr.write_record([
            r.question_id.as_str(),
            &r.replication.to_string(),
            r.condition.label(),
            &r.round.to_string(),
            &r.mean_error.to_string(),
            &r.collective_sqe.to_string(),
            &r.individual_sqe.to_string(),
            &r.predictive_diversity.to_string(),
            &fmt_opt(r.polarization),
            &fmt_opt(r.revision_coefficient),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub const AGENTS_HEADER: &str =
    "question_id,replication,condition,agent,initial_error,revision,social_signal";

pub fn write_agents_csv<W: io::Write>(rows: &[AgentRow], w: W) -> Result<(), HarnessError> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(AGENTS_HEADER.split(','))?;
    for r in rows {
        wtr.write_record([
            r.question_id.as_str(),
            &r.replication.to_string(),
            r.condition.label(),
            &r.agent.to_string(),
            &r.initial_error.to_string(),
            &r.revision.to_string(),
            &r.social_signal.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Write `results.csv`, `agents.csv` and `manifest.txt` into a directory.
pub fn write_outputs(
    output: &ExperimentOutput,
    cfg: &ExperimentConfig,
    dir: &Path,
) -> Result<(), HarnessError> {
    fs::create_dir_all(dir)?;
    write_results_csv(&output.rows, fs::File::create(dir.join("results.csv"))?)?;
    write_agents_csv(&output.agent_rows, fs::File::create(dir.join("agents.csv"))?)?;
    fs::write(dir.join("manifest.txt"), manifest(cfg, &output.question_ids))?;
    Ok(())
}

/// Dump the network topology of replication 0 for each question, one
/// edge-list file per question.
pub fn dump_networks(cfg: &ExperimentConfig, dir: &Path) -> Result<(), HarnessError> {
    let dataset = resolve_dataset(cfg)?;
    fs::create_dir_all(dir)?;
    for (qi, (q, rs)) in dataset.iter().enumerate() {
        let q_seed = seed::derive(cfg.master_seed, qi as u64);
        let network_seed = if cfg.regenerate_topology {
            seed::derive(seed::derive(q_seed, 0), seed::NETWORK_STREAM)
        } else {
            seed::derive(q_seed, seed::NETWORK_STREAM)
        };
        let network = graph::generate_network(cfg.network, rs.len(), network_seed)?;
        let path = dir.join(format!("{}_rep0.edges", q.question_id));
        let mut file = fs::File::create(path)?;
        network.write_edge_list(&mut file)?;
    }
    Ok(())
}

/// Metric column a paired test can run on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    MeanError,
    RevisionCoefficient,
    Polarization,
}

impl MetricKind {
    pub fn label(&self) -> &'static str {
        match self {
            MetricKind::MeanError => "error",
            MetricKind::RevisionCoefficient => "revision_coefficient",
            MetricKind::Polarization => "polarization",
        }
    }

    fn extract(&self, row: &ResultRow) -> Option<f64> {
        match self {
            MetricKind::MeanError => Some(row.mean_error),
            MetricKind::RevisionCoefficient => row.revision_coefficient,
            MetricKind::Polarization => row.polarization,
        }
    }
}

/// Treatment-minus-control effect with its permutation p-value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectSummary {
    pub effect: f64,
    pub p_value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_pairs: usize,
}

/// Build the matched (question x replication) sample for one metric at the
/// final round. Pairs where either side lacks the metric are dropped;
/// `None` when fewer than 2 pairs remain.
pub fn final_round_pairs(rows: &[ResultRow], metric: MetricKind) -> Option<PairedSample> {
    let final_round = rows.iter().map(|r| r.round).max()?;
    let mut control = Vec::new();
    let mut treatment = Vec::new();
    let mut labels = Vec::new();
    let finals: Vec<&ResultRow> = rows.iter().filter(|r| r.round == final_round).collect();
    for row in finals.iter().filter(|r| r.condition == Condition::Control) {
        let partner = finals.iter().find(|t| {
            t.condition == Condition::Treatment
                && t.question_id == row.question_id
                && t.replication == row.replication
        })?;
        if let (Some(c), Some(t)) = (metric.extract(row), metric.extract(partner)) {
            control.push(c);
            treatment.push(t);
            labels.push(format!("{}:{}", row.question_id, row.replication));
        }
    }
    PairedSample::new(control, treatment, labels).ok()
}

/// Paired permutation test of one metric at the final round.
pub fn metric_effect(
    rows: &[ResultRow],
    metric: MetricKind,
    master_seed: u64,
) -> Result<Option<EffectSummary>, HarnessError> {
    let Some(sample) = final_round_pairs(rows, metric) else {
        return Ok(None);
    };
    let test = stats::paired_permutation_test(
        &sample,
        INFERENCE_RESAMPLES,
        seed::derive(seed::derive(master_seed, INFERENCE_STREAM), metric as u64),
    )?;
    Ok(Some(EffectSummary {
        effect: test.mean_difference,
        p_value: test.p_value,
        ci_low: test.ci_low,
        ci_high: test.ci_high,
        n_pairs: sample.len(),
    }))
}

/// Revision-analysis inputs pooled across replications, one partial
/// correlation per (question, condition).
pub fn pooled_revision_coefficients(
    agent_rows: &[AgentRow],
) -> Vec<(String, Condition, Option<f64>)> {
    let mut keys: Vec<(String, Condition)> = Vec::new();
    for r in agent_rows {
        let key = (r.question_id.clone(), r.condition);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(qid, condition)| {
            let mut e = Vec::new();
            let mut d = Vec::new();
            let mut s = Vec::new();
            for r in agent_rows {
                if r.question_id == qid && r.condition == condition {
                    e.push(r.initial_error);
                    d.push(r.revision);
                    s.push(r.social_signal);
                }
            }
            let rc = metrics::revision_coefficient(&e, &d, &s).ok();
            (qid, condition, rc)
        })
        .collect()
}

/// Per-kind effect summary across network structures.
#[derive(Debug, Clone)]
pub struct NetworkSweepRow {
    pub kind: graph::NetworkKind,
    pub error: EffectSummary,
    pub revision: Option<EffectSummary>,
    pub polarization: Option<EffectSummary>,
}

/// Run the experiment once per network kind and summarize the three
/// headline effects.
pub fn sweep_networks(
    cfg: &ExperimentConfig,
    kinds: &[graph::NetworkKind],
) -> Result<Vec<NetworkSweepRow>, HarnessError> {
    kinds
        .iter()
        .map(|&kind| {
            let mut run_cfg = cfg.clone();
            run_cfg.network = kind;
            let output = run_experiment(&run_cfg)?;
            let error = metric_effect(&output.rows, MetricKind::MeanError, cfg.master_seed)?
                .ok_or_else(|| HarnessError::Config("no error pairs produced".into()))?;
            let revision =
                metric_effect(&output.rows, MetricKind::RevisionCoefficient, cfg.master_seed)?;
            let polarization =
                metric_effect(&output.rows, MetricKind::Polarization, cfg.master_seed)?;
            Ok(NetworkSweepRow { kind, error, revision, polarization })
        })
        .collect()
}

/// Per-fraction effect summary for the partial-treatment sweep.
#[derive(Debug, Clone)]
pub struct FractionSweepRow {
    pub fraction: f64,
    pub error: EffectSummary,
    pub revision: Option<EffectSummary>,
    pub polarization: Option<EffectSummary>,
}

/// Run the experiment once per treatment fraction, sharing every other
/// seed and setting.
pub fn sweep_fraction(
    cfg: &ExperimentConfig,
    fractions: &[f64],
) -> Result<Vec<FractionSweepRow>, HarnessError> {
    if fractions.windows(2).any(|w| w[0] > w[1]) {
        return Err(HarnessError::Config("fractions must be sorted ascending".into()));
    }
    if fractions.iter().any(|f| !(0.0..=1.0).contains(f)) {
        return Err(HarnessError::Config("fractions must lie in [0,1]".into()));
    }
    fractions
        .iter()
        .map(|&fraction| {
            let mut run_cfg = cfg.clone();
            run_cfg.treatment_fraction = fraction;
            let output = run_experiment(&run_cfg)?;
            let error = metric_effect(&output.rows, MetricKind::MeanError, cfg.master_seed)?
                .ok_or_else(|| HarnessError::Config("no error pairs produced".into()))?;
            let revision =
                metric_effect(&output.rows, MetricKind::RevisionCoefficient, cfg.master_seed)?;
            let polarization =
                metric_effect(&output.rows, MetricKind::Polarization, cfg.master_seed)?;
            Ok(FractionSweepRow { fraction, error, revision, polarization })
        })
        .collect()
}

fn sign(effect: f64) -> &'static str {
    if effect < 0.0 {
        "-"
    } else if effect > 0.0 {
        "+"
    } else {
        "0"
    }
}

fn effect_fields(e: Option<&EffectSummary>) -> [String; 3] {
    match e {
        Some(e) => [e.effect.to_string(), sign(e.effect).to_string(), e.p_value.to_string()],
        None => [String::new(), String::new(), String::new()],
    }
}

pub fn write_network_sweep_csv<W: io::Write>(
    rows: &[NetworkSweepRow],
    w: W,
) -> Result<(), HarnessError> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record([
        "network",
        "error_effect",
        "error_sign",
        "error_p",
        "revision_effect",
        "revision_sign",
        "revision_p",
        "polarization_effect",
        "polarization_sign",
        "polarization_p",
    ])?;
    for row in rows {
        let e = effect_fields(Some(&row.error));
        let r = effect_fields(row.revision.as_ref());
        let p = effect_fields(row.polarization.as_ref());
        let mut record = vec![row.kind.to_string()];
        record.extend(e);
        record.extend(r);
        record.extend(p);
        wtr.write_record(&record)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_fraction_sweep_csv<W: io::Write>(
    rows: &[FractionSweepRow],
    w: W,
) -> Result<(), HarnessError> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record([
        "fraction",
        "error_effect",
        "error_sign",
        "error_p",
        "revision_effect",
        "revision_sign",
        "revision_p",
        "polarization_effect",
        "polarization_sign",
        "polarization_p",
    ])?;
    for row in rows {
        let e = effect_fields(Some(&row.error));
        let r = effect_fields(row.revision.as_ref());
        let p = effect_fields(row.polarization.as_ref());
        let mut record = vec![row.fraction.to_string()];
        record.extend(e);
        record.extend(r);
        record.extend(p);
        wtr.write_record(&record)?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calib::SyntheticSpec;

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            dataset: DatasetSource::Synthetic(SyntheticSpec {
                n_questions: 2,
                n_respondents: 30,
                ..Default::default()
            }),
            replications: 3,
            ..Default::default()
        }
    }

    #[test]
    fn row_count_contract() {
        let mut cfg = small_config();
        cfg.dataset = DatasetSource::Synthetic(SyntheticSpec {
            n_questions: 1,
            n_respondents: 20,
            ..Default::default()
        });
        cfg.replications = 2;
        cfg.rounds = 3;
        let out = run_experiment(&cfg).unwrap();
        assert_eq!(out.rows.len(), 2 * 2 * 3);
        assert_eq!(out.agent_rows.len(), 2 * 2 * 20);
    }

    #[test]
    fn matched_null_propagates_through_metrics() {
        let mut cfg = small_config();
        cfg.treatment = cfg.control;
        let out = run_experiment(&cfg).unwrap();
        let controls: Vec<&ResultRow> =
            out.rows.iter().filter(|r| r.condition == Condition::Control).collect();
        let treatments: Vec<&ResultRow> =
            out.rows.iter().filter(|r| r.condition == Condition::Treatment).collect();
        assert_eq!(controls.len(), treatments.len());
        for (c, t) in controls.iter().zip(&treatments) {
            assert_eq!(c.mean_error, t.mean_error);
            assert_eq!(c.collective_sqe, t.collective_sqe);
            assert_eq!(c.polarization, t.polarization);
            assert_eq!(c.revision_coefficient, t.revision_coefficient);
        }
    }

    #[test]
    fn runs_are_byte_identical() {
        let cfg = small_config();
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        let mut buf_a = Vec::new();
        let mut buf_b = Vec::new();
        write_results_csv(&a.rows, &mut buf_a).unwrap();
        write_results_csv(&b.rows, &mut buf_b).unwrap();
        assert_eq!(buf_a, buf_b);
    }

    #[test]
    fn extending_replications_preserves_existing_cells() {
        let mut cfg = small_config();
        cfg.replications = 2;
        let short = run_experiment(&cfg).unwrap();
        cfg.replications = 3;
        let long = run_experiment(&cfg).unwrap();
        for row in &short.rows {
            assert!(long.rows.contains(row), "row from short run missing in long run");
        }
    }

    #[test]
    fn homophily_requires_party_labels() {
        let mut cfg = small_config();
        cfg.dataset = DatasetSource::Synthetic(SyntheticSpec {
            party_split: None,
            ..SyntheticSpec::default()
        });
        cfg.homophily_enabled = true;
        assert!(matches!(run_experiment(&cfg), Err(HarnessError::Config(_))));
    }

    #[test]
    fn party_free_dataset_has_no_polarization() {
        let mut cfg = small_config();
        cfg.dataset = DatasetSource::Synthetic(SyntheticSpec {
            n_questions: 1,
            n_respondents: 20,
            party_split: None,
            ..Default::default()
        });
        cfg.homophily_enabled = false;
        let out = run_experiment(&cfg).unwrap();
        assert!(out.rows.iter().all(|r| r.polarization.is_none()));
    }

    #[test]
    fn dpt_identity_holds_in_every_row() {
        let out = run_experiment(&small_config()).unwrap();
        for r in &out.rows {
            let gap = (r.collective_sqe - (r.individual_sqe - r.predictive_diversity)).abs();
            assert!(gap <= 1e-9 * r.individual_sqe.max(1.0));
        }
    }

    #[test]
    fn fraction_zero_effect_is_exactly_zero() {
        let mut cfg = small_config();
        cfg.replications = 2;
        let rows = sweep_fraction(&cfg, &[0.0]).unwrap();
        assert_eq!(rows[0].error.effect, 0.0);
        assert_eq!(rows[0].error.p_value, 1.0);
    }

    #[test]
    fn matched_null_sweep_has_zero_effects() {
        let mut cfg = small_config();
        cfg.replications = 2;
        cfg.treatment = cfg.control;
        let rows =
            sweep_networks(&cfg, &[graph::NetworkKind::Egalitarian { degree: 4 }]).unwrap();
        let row = &rows[0];
        assert_eq!(row.error.effect, 0.0);
        assert_eq!(row.error.p_value, 1.0);
        let rc = row.revision.as_ref().unwrap();
        assert_eq!(rc.effect, 0.0);
        assert_eq!(rc.p_value, 1.0);
        let pol = row.polarization.as_ref().unwrap();
        assert_eq!(pol.effect, 0.0);
        assert_eq!(pol.p_value, 1.0);
    }

    #[test]
    fn fraction_sweep_validates_inputs() {
        let cfg = small_config();
        assert!(sweep_fraction(&cfg, &[0.5, 0.1]).is_err());
        assert!(sweep_fraction(&cfg, &[0.5, 1.1]).is_err());
    }

    #[test]
    fn sweep_shapes() {
        let mut cfg = small_config();
        cfg.replications = 2;
        cfg.dataset = DatasetSource::Synthetic(SyntheticSpec {
            n_questions: 1,
            n_respondents: 24,
            ..Default::default()
        });
        let kinds = [
            graph::NetworkKind::Egalitarian { degree: 4 },
            graph::NetworkKind::Star,
        ];
        let rows = sweep_networks(&cfg, &kinds).unwrap();
        assert_eq!(rows.len(), 2);
        let fr = sweep_fraction(&cfg, &[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(fr.len(), 3);
    }

    #[test]
    fn cell_errors_carry_provenance() {
        let mut cfg = small_config();
        // Degree 25 is impossible for 20-node questions.
        cfg.dataset = DatasetSource::Synthetic(SyntheticSpec {
            n_questions: 1,
            n_respondents: 20,
            ..Default::default()
        });
        cfg.network = graph::NetworkKind::Egalitarian { degree: 25 };
        match run_experiment(&cfg) {
            Err(HarnessError::Cell { question, .. }) => assert_eq!(question, "q0"),
            other => panic!("expected cell error, got {other:?}"),
        }
    }
}
