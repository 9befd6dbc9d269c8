//! Aggregate result files into plot-ready data: per-round error and
//! polarization curves with bootstrap intervals, revision-coefficient
//! summaries, adjusted scatter pairs, and the squared-error decomposition
//! comparison.

use std::collections::BTreeSet;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::dynamics::Condition;
use crate::seed;
use crate::stats::{self, Statistic};

use super::{
    pooled_revision_coefficients, AgentRow, HarnessError, ResultRow, AGENTS_HEADER, RESULTS_HEADER,
};

/// Knobs for the bootstrap intervals in the report.
#[derive(Debug, Clone, Copy)]
pub struct ReportOptions {
    pub resamples: usize,
    pub level: f64,
    pub seed: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { resamples: super::INFERENCE_RESAMPLES, level: 0.95, seed: 42 }
    }
}

fn file_error(path: &Path, msg: impl Into<String>) -> HarnessError {
    HarnessError::ResultFile { path: path.display().to_string(), msg: msg.into() }
}

fn parse_condition(path: &Path, value: &str) -> Result<Condition, HarnessError> {
    match value {
        "control" => Ok(Condition::Control),
        "treatment" => Ok(Condition::Treatment),
        other => Err(file_error(path, format!("unknown condition `{other}`"))),
    }
}

fn parse_field<T: std::str::FromStr>(path: &Path, value: &str, what: &str) -> Result<T, HarnessError> {
    value.parse::<T>().map_err(|_| file_error(path, format!("{what}: cannot parse `{value}`")))
}

fn parse_opt_f64(path: &Path, value: &str, what: &str) -> Result<Option<f64>, HarnessError> {
    if value.is_empty() {
        return Ok(None);
    }
    Ok(Some(parse_field(path, value, what)?))
}

/// Read a results CSV written by [`super::write_results_csv`].
pub fn read_results_csv(path: &Path) -> Result<Vec<ResultRow>, HarnessError> {
    let file = fs::File::open(path).map_err(|e| file_error(path, e.to_string()))?;
    let mut rdr = csv::Reader::from_reader(io::BufReader::new(file));
    let headers = rdr.headers().map_err(|e| file_error(path, e.to_string()))?;
    let expected: Vec<&str> = RESULTS_HEADER.split(',').collect();
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(file_error(path, "header does not match the results schema"));
    }
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| file_error(path, e.to_string()))?;
        if record.len() != expected.len() {
            return Err(file_error(path, format!("row has {} fields", record.len())));
        }
        let get = |i: usize| record.get(i).unwrap_or("");
        rows.push(ResultRow {
            question_id: get(0).to_string(),
            replication: parse_field(path, get(1), "replication")?,
            condition: parse_condition(path, get(2))?,
            round: parse_field(path, get(3), "round")?,
            mean_error: parse_field(path, get(4), "mean_error")?,
            collective_sqe: parse_field(path, get(5), "collective_sqe")?,
            individual_sqe: parse_field(path, get(6), "individual_sqe")?,
            predictive_diversity: parse_field(path, get(7), "predictive_diversity")?,
            polarization: parse_opt_f64(path, get(8), "polarization")?,
            revision_coefficient: parse_opt_f64(path, get(9), "revision_coefficient")?,
        });
    }
    Ok(rows)
}

/// Read an agents CSV written by [`super::write_agents_csv`].
pub fn read_agents_csv(path: &Path) -> Result<Vec<AgentRow>, HarnessError> {
    let file = fs::File::open(path).map_err(|e| file_error(path, e.to_string()))?;
    let mut rdr = csv::Reader::from_reader(io::BufReader::new(file));
    let headers = rdr.headers().map_err(|e| file_error(path, e.to_string()))?;
    let expected: Vec<&str> = AGENTS_HEADER.split(',').collect();
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(file_error(path, "header does not match the agents schema"));
    }
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| file_error(path, e.to_string()))?;
        let get = |i: usize| record.get(i).unwrap_or("");
        rows.push(AgentRow {
            question_id: get(0).to_string(),
            replication: parse_field(path, get(1), "replication")?,
            condition: parse_condition(path, get(2))?,
            agent: parse_field(path, get(3), "agent")?,
            initial_error: parse_field(path, get(4), "initial_error")?,
            revision: parse_field(path, get(5), "revision")?,
            social_signal: parse_field(path, get(6), "social_signal")?,
        });
    }
    Ok(rows)
}

/// Aggregated report contents, ready to serialize.
#[derive(Debug, Clone, Default)]
pub struct Report {
    /// (question, condition, round, mean error, ci_low, ci_high)
    pub error_curves: Vec<(String, Condition, usize, f64, f64, f64)>,
    /// (question, condition, round, polarization, ci_low, ci_high)
    pub polarization_curves: Vec<(String, Condition, usize, f64, f64, f64)>,
    /// (question, condition, mean per-replication coefficient, ci_low,
    /// ci_high, pooled coefficient when agent data was available)
    pub revision_summary: Vec<(String, Condition, f64, f64, f64, Option<f64>)>,
    /// (question, condition, adjusted initial error, adjusted revision)
    pub adjusted_scatter: Vec<(String, Condition, f64, f64)>,
    /// (question, control value, treatment value, percent change) per
    /// decomposition term, at the final round.
    pub dpt_comparison: Vec<DptComparisonRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DptComparisonRow {
    pub question_id: String,
    pub collective_control: f64,
    pub collective_treatment: f64,
    pub collective_change_pct: f64,
    pub individual_control: f64,
    pub individual_treatment: f64,
    pub individual_change_pct: f64,
    pub diversity_control: f64,
    pub diversity_treatment: f64,
    pub diversity_change_pct: f64,
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn pct_change(control: f64, treatment: f64) -> f64 {
    if control == 0.0 {
        0.0
    } else {
        (treatment - control) / control * 100.0
    }
}

fn bootstrap(
    values: &[f64],
    opts: &ReportOptions,
    stream: u64,
) -> Result<(f64, f64), HarnessError> {
    if values.len() == 1 {
        return Ok((values[0], values[0]));
    }
    Ok(stats::bootstrap_ci(
        values,
        Statistic::Mean,
        opts.resamples,
        opts.level,
        seed::derive(opts.seed, stream),
    )?)
}

/// Least-squares residuals of `y` on `x`; the "adjusted" values of the
/// scatter panel.
fn residuals(y: &[f64], x: &[f64]) -> Vec<f64> {
    let n = y.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(&a, &b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|&a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return y.iter().map(|&b| b - my).collect();
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    y.iter().zip(x).map(|(&b, &a)| b - (intercept + slope * a)).collect()
}

/// Build the aggregate report from already-loaded rows.
pub fn build_report(
    rows: &[ResultRow],
    agent_rows: &[AgentRow],
    opts: &ReportOptions,
) -> Result<Report, HarnessError> {
    let mut report = Report::default();
    let questions: Vec<String> = {
        let mut seen = Vec::new();
        for r in rows {
            if !seen.contains(&r.question_id) {
                seen.push(r.question_id.clone());
            }
        }
        seen
    };
    let rounds: BTreeSet<usize> = rows.iter().map(|r| r.round).collect();
    let final_round = rounds.iter().max().copied().unwrap_or(0);

    let mut stream = 0u64;
    for qid in &questions {
        for condition in [Condition::Control, Condition::Treatment] {
            for &round in &rounds {
                let errs: Vec<f64> = rows
                    .iter()
                    .filter(|r| {
                        r.question_id == *qid && r.condition == condition && r.round == round
                    })
                    .map(|r| r.mean_error)
                    .collect();
                if errs.is_empty() {
                    continue;
                }
                let (lo, hi) = bootstrap(&errs, opts, stream)?;
                stream += 1;
                report.error_curves.push((qid.clone(), condition, round, mean(&errs), lo, hi));

                let pols: Vec<f64> = rows
                    .iter()
                    .filter(|r| {
                        r.question_id == *qid && r.condition == condition && r.round == round
                    })
                    .filter_map(|r| r.polarization)
                    .collect();
                if !pols.is_empty() {
                    let (lo, hi) = bootstrap(&pols, opts, stream)?;
                    stream += 1;
                    report
                        .polarization_curves
                        .push((qid.clone(), condition, round, mean(&pols), lo, hi));
                }
            }

            let rcs: Vec<f64> = rows
                .iter()
                .filter(|r| {
                    r.question_id == *qid && r.condition == condition && r.round == final_round
                })
                .filter_map(|r| r.revision_coefficient)
                .collect();
            if !rcs.is_empty() {
                let (lo, hi) = bootstrap(&rcs, opts, stream)?;
                stream += 1;
                let pooled = pooled_revision_coefficients(agent_rows)
                    .into_iter()
                    .find(|(q, c, _)| q == qid && *c == condition)
                    .and_then(|(_, _, rc)| rc);
                report.revision_summary.push((qid.clone(), condition, mean(&rcs), lo, hi, pooled));
            }
        }

        // Decomposition comparison at the final round.
        let term_means = |condition: Condition, pick: fn(&ResultRow) -> f64| -> Option<f64> {
            let vals: Vec<f64> = rows
                .iter()
                .filter(|r| {
                    r.question_id == *qid && r.condition == condition && r.round == final_round
                })
                .map(pick)
                .collect();
            if vals.is_empty() {
                None
            } else {
                Some(mean(&vals))
            }
        };
        let terms: Option<[f64; 6]> = (|| {
            Some([
                term_means(Condition::Control, |r| r.collective_sqe)?,
                term_means(Condition::Treatment, |r| r.collective_sqe)?,
                term_means(Condition::Control, |r| r.individual_sqe)?,
                term_means(Condition::Treatment, |r| r.individual_sqe)?,
                term_means(Condition::Control, |r| r.predictive_diversity)?,
                term_means(Condition::Treatment, |r| r.predictive_diversity)?,
            ])
        })();
        if let Some([cc, ct, ic, it, dc, dt]) = terms {
            report.dpt_comparison.push(DptComparisonRow {
                question_id: qid.clone(),
                collective_control: cc,
                collective_treatment: ct,
                collective_change_pct: pct_change(cc, ct),
                individual_control: ic,
                individual_treatment: it,
                individual_change_pct: pct_change(ic, it),
                diversity_control: dc,
                diversity_treatment: dt,
                diversity_change_pct: pct_change(dc, dt),
            });
        }
    }

    // Pooled row across questions.
    if report.dpt_comparison.len() > 1 {
        let col = |pick: fn(&DptComparisonRow) -> f64| -> f64 {
            mean(&report.dpt_comparison.iter().map(pick).collect::<Vec<f64>>())
        };
        let cc = col(|r| r.collective_control);
        let ct = col(|r| r.collective_treatment);
        let ic = col(|r| r.individual_control);
        let it = col(|r| r.individual_treatment);
        let dc = col(|r| r.diversity_control);
        let dt = col(|r| r.diversity_treatment);
        report.dpt_comparison.push(DptComparisonRow {
            question_id: "all".into(),
            collective_control: cc,
            collective_treatment: ct,
            collective_change_pct: pct_change(cc, ct),
            individual_control: ic,
            individual_treatment: it,
            individual_change_pct: pct_change(ic, it),
            diversity_control: dc,
            diversity_treatment: dt,
            diversity_change_pct: pct_change(dc, dt),
        });
    }

    // Adjusted scatter pairs from agent-level rows, pooled per question and
    // condition across replications.
    for qid in &questions {
        for condition in [Condition::Control, Condition::Treatment] {
            let subset: Vec<&AgentRow> = agent_rows
                .iter()
                .filter(|r| r.question_id == *qid && r.condition == condition)
                .collect();
            if subset.is_empty() {
                continue;
            }
            let e: Vec<f64> = subset.iter().map(|r| r.initial_error).collect();
            let d: Vec<f64> = subset.iter().map(|r| r.revision).collect();
            let s: Vec<f64> = subset.iter().map(|r| r.social_signal).collect();
            let e_adj = residuals(&e, &s);
            let d_adj = residuals(&d, &s);
            for (ea, da) in e_adj.into_iter().zip(d_adj) {
                report.adjusted_scatter.push((qid.clone(), condition, ea, da));
            }
        }
    }

    Ok(report)
}

/// Load result files (plus sibling `agents.csv` files when present), build
/// the report and write its five CSVs into `out_dir`.
pub fn write_report(
    result_files: &[PathBuf],
    out_dir: &Path,
    opts: &ReportOptions,
) -> Result<Report, HarnessError> {
    let mut rows = Vec::new();
    let mut agent_rows = Vec::new();
    for path in result_files {
        rows.extend(read_results_csv(path)?);
        let sibling = path.with_file_name("agents.csv");
        if sibling.exists() {
            agent_rows.extend(read_agents_csv(&sibling)?);
        }
    }
    if rows.is_empty() {
        return Err(HarnessError::Config("no result rows to report on".into()));
    }
    let report = build_report(&rows, &agent_rows, opts)?;
    fs::create_dir_all(out_dir)?;

    let mut wtr = csv::Writer::from_path(out_dir.join("panel_a.csv"))
        .map_err(|e| file_error(out_dir, e.to_string()))?;
    wtr.write_record(["question_id", "condition", "round", "mean_error", "ci_low", "ci_high"])?;
    for (q, c, round, m, lo, hi) in &report.error_curves {
        wtr.write_record([
            q.as_str(),
            c.label(),
            &round.to_string(),
            &m.to_string(),
            &lo.to_string(),
            &hi.to_string(),
        ])?;
    }
    wtr.flush()?;

    let mut wtr = csv::Writer::from_path(out_dir.join("panel_b.csv"))
        .map_err(|e| file_error(out_dir, e.to_string()))?;
    wtr.write_record(["question_id", "condition", "round", "polarization", "ci_low", "ci_high"])?;
    for (q, c, round, m, lo, hi) in &report.polarization_curves {
        wtr.write_record([
            q.as_str(),
            c.label(),
            &round.to_string(),
            &m.to_string(),
            &lo.to_string(),
            &hi.to_string(),
        ])?;
    }
    wtr.flush()?;

    let mut wtr = csv::Writer::from_path(out_dir.join("panel_c.csv"))
        .map_err(|e| file_error(out_dir, e.to_string()))?;
    wtr.write_record([
        "question_id",
        "condition",
        "mean_revision_coefficient",
        "ci_low",
        "ci_high",
        "pooled_revision_coefficient",
    ])?;
    for (q, c, m, lo, hi, pooled) in &report.revision_summary {
        wtr.write_record([
            q.as_str(),
            c.label(),
            &m.to_string(),
            &lo.to_string(),
            &hi.to_string(),
            &pooled.map(|v| v.to_string()).unwrap_or_default(),
        ])?;
    }
    wtr.flush()?;

    let mut wtr = csv::Writer::from_path(out_dir.join("panel_d.csv"))
        .map_err(|e| file_error(out_dir, e.to_string()))?;
    wtr.write_record(["question_id", "condition", "adjusted_error", "adjusted_revision"])?;
    for (q, c, e, d) in &report.adjusted_scatter {
        wtr.write_record([q.as_str(), c.label(), &e.to_string(), &d.to_string()])?;
    }
    wtr.flush()?;

    let mut wtr = csv::Writer::from_path(out_dir.join("dpt_comparison.csv"))
        .map_err(|e| file_error(out_dir, e.to_string()))?;
    wtr.write_record([
        "question_id",
        "collective_control",
        "collective_treatment",
        "collective_change_pct",
        "individual_control",
        "individual_treatment",
        "individual_change_pct",
        "diversity_control",
        "diversity_treatment",
        "diversity_change_pct",
    ])?;
    for r in &report.dpt_comparison {
        wtr.write_record([
            r.question_id.as_str(),
            &r.collective_control.to_string(),
            &r.collective_treatment.to_string(),
            &r.collective_change_pct.to_string(),
            &r.individual_control.to_string(),
            &r.individual_treatment.to_string(),
            &r.individual_change_pct.to_string(),
            &r.diversity_control.to_string(),
            &r.diversity_treatment.to_string(),
            &r.diversity_change_pct.to_string(),
        ])?;
    }
    wtr.flush()?;

    Ok(report)
}

/// Partial correlation of the adjusted scatter for one question and
/// condition; equals the pooled revision coefficient by construction.
pub fn scatter_correlation(report: &Report, question: &str, condition: Condition) -> Option<f64> {
    let pairs: Vec<(f64, f64)> = report
        .adjusted_scatter
        .iter()
        .filter(|(q, c, _, _)| q == question && *c == condition)
        .map(|(_, _, e, d)| (*e, *d))
        .collect();
    if pairs.len() < 3 {
        return None;
    }
    let e: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let d: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    stats::pearson(&e, &d).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calib::SyntheticSpec;
    use crate::harness::{
        run_experiment, write_outputs, DatasetSource, ExperimentConfig,
    };
    use crate::metrics::test_oracles::partial_correlation_by_residuals;

    fn run_small() -> (ExperimentConfig, crate::harness::ExperimentOutput) {
        let cfg = ExperimentConfig {
            dataset: DatasetSource::Synthetic(SyntheticSpec {
                n_questions: 2,
                n_respondents: 24,
                ..Default::default()
            }),
            replications: 3,
            ..Default::default()
        };
        let out = run_experiment(&cfg).unwrap();
        (cfg, out)
    }

    fn quick_opts() -> ReportOptions {
        ReportOptions { resamples: 1000, ..Default::default() }
    }

    #[test]
    fn panel_a_shape_contract() {
        let (_, out) = run_small();
        let report = build_report(&out.rows, &out.agent_rows, &quick_opts()).unwrap();
        // rounds x conditions rows per question
        for qid in &out.question_ids {
            let count = report.error_curves.iter().filter(|(q, ..)| q == qid).count();
            assert_eq!(count, 3 * 2);
        }
    }

    #[test]
    fn matched_null_report_has_zero_deltas() {
        let mut cfg = ExperimentConfig {
            dataset: DatasetSource::Synthetic(SyntheticSpec {
                n_questions: 1,
                n_respondents: 20,
                ..Default::default()
            }),
            replications: 2,
            ..Default::default()
        };
        cfg.treatment = cfg.control;
        let out = run_experiment(&cfg).unwrap();
        let report = build_report(&out.rows, &out.agent_rows, &quick_opts()).unwrap();
        for r in &report.dpt_comparison {
            assert_eq!(r.collective_change_pct, 0.0);
            assert_eq!(r.individual_change_pct, 0.0);
            assert_eq!(r.diversity_change_pct, 0.0);
        }
    }

    #[test]
    fn files_round_trip_and_report_writes() {
        let (cfg, out) = run_small();
        let dir = tempfile::tempdir().unwrap();
        write_outputs(&out, &cfg, dir.path()).unwrap();
        let rows = read_results_csv(&dir.path().join("results.csv")).unwrap();
        assert_eq!(rows, out.rows);
        let agents = read_agents_csv(&dir.path().join("agents.csv")).unwrap();
        assert_eq!(agents, out.agent_rows);

        let report_dir = dir.path().join("report");
        let report = write_report(
            &[dir.path().join("results.csv")],
            &report_dir,
            &quick_opts(),
        )
        .unwrap();
        for file in ["panel_a.csv", "panel_b.csv", "panel_c.csv", "panel_d.csv", "dpt_comparison.csv"] {
            assert!(report_dir.join(file).exists(), "{file} missing");
        }
        assert!(!report.error_curves.is_empty());
        assert!(!report.adjusted_scatter.is_empty());
    }

    #[test]
    fn schema_mismatch_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "a,b,c\n1,2,3\n").unwrap();
        assert!(matches!(read_results_csv(&path), Err(HarnessError::ResultFile { .. })));
    }

    #[test]
    fn pooled_coefficient_matches_scatter_correlation() {
        let (_, out) = run_small();
        let report = build_report(&out.rows, &out.agent_rows, &quick_opts()).unwrap();
        for (qid, condition, _, _, _, pooled) in &report.revision_summary {
            let Some(pooled) = pooled else { continue };
            let scatter = scatter_correlation(&report, qid, *condition).unwrap();
            assert!(
                (pooled - scatter).abs() < 1e-9,
                "pooled {pooled} vs scatter {scatter}"
            );
            // and both agree with the residual-regression oracle
            let subset: Vec<&AgentRow> = out
                .agent_rows
                .iter()
                .filter(|r| r.question_id == *qid && r.condition == *condition)
                .collect();
            let e: Vec<f64> = subset.iter().map(|r| r.initial_error).collect();
            let d: Vec<f64> = subset.iter().map(|r| r.revision).collect();
            let s: Vec<f64> = subset.iter().map(|r| r.social_signal).collect();
            let oracle = partial_correlation_by_residuals(&e, &d, &s);
            assert!((pooled - oracle).abs() < 1e-9);
        }
    }
}
