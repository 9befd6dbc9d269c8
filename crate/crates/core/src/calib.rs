//! Calibration data: CSV ingestion, synthesis of missing per-agent fields
//! (baseline self-weight, evidence quality), and fully synthetic datasets.
//!
//! The on-disk schema is one CSV per dataset with header
//! `dataset_id,question_id,user_id,true_value,initial_estimate,alpha0,party`;
//! `alpha0` and `party` may be empty. Questions keep their file order, so a
//! loaded dataset written back out reproduces the original byte-for-byte.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::seed;

#[derive(Debug, Error)]
pub enum CalibError {
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("missing required column `{0}`")]
    Schema(String),
    #[error("record {record}: {msg}")]
    Parse { record: u64, msg: String },
    #[error("question `{id}` has {count} respondent(s); at least 2 are required")]
    EmptyQuestion { id: String, count: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("invalid synthesis parameters: {0}")]
    InvalidParams(String),
    #[error("invalid synthetic dataset spec: {0}")]
    InvalidSpec(String),
}

/// Party label carried by a respondent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Party {
    D,
    R,
}

impl Party {
    pub fn as_str(&self) -> &'static str {
        match self {
            Party::D => "D",
            Party::R => "R",
        }
    }
}

/// One estimation task: a question with a known true value.
#[derive(Debug, Clone, PartialEq)]
pub struct Question {
    pub question_id: String,
    pub dataset_id: String,
    pub true_value: f64,
}

/// One user's baseline answer to one question.
#[derive(Debug, Clone, PartialEq)]
pub struct Respondent {
    pub user_id: String,
    pub question_id: String,
    pub initial_estimate: f64,
    pub alpha0: Option<f64>,
    pub party: Option<Party>,
}

/// Fully calibrated per-agent inputs for one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentProfile {
    pub initial_estimate: f64,
    pub alpha0: f64,
    pub party: Option<Party>,
    pub evidence_quality: f64,
}

/// A dataset in memory: questions in file order, each with its respondents
/// in file order.
pub type Dataset = Vec<(Question, Vec<Respondent>)>;

const COLUMNS: [&str; 7] =
    ["dataset_id", "question_id", "user_id", "true_value", "initial_estimate", "alpha0", "party"];

/// Load a calibration dataset from CSV.
pub fn load_dataset(path: &Path) -> Result<Dataset, CalibError> {
    let file = File::open(path)?;
    load_dataset_from_reader(file)
}

pub fn load_dataset_from_reader<R: io::Read>(reader: R) -> Result<Dataset, CalibError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let mut index = [0usize; 7];
    for (slot, name) in index.iter_mut().zip(COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CalibError::Schema(name.to_string()))?;
    }
    let [di, qi, ui, ti, ei, ai, pi] = index;

    let mut dataset: Dataset = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        let record_no = row as u64 + 2; // 1-based, counting the header
        let field = |i: usize| record.get(i).unwrap_or("").trim().to_string();
        let parse_f64 = |i: usize, what: &str| -> Result<f64, CalibError> {
            let raw = field(i);
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CalibError::Parse {
                    record: record_no,
                    msg: format!("{what} `{raw}` is not a finite number"),
                })
        };

        let question_id = field(qi);
        let true_value = parse_f64(ti, "true_value")?;
        let initial_estimate = parse_f64(ei, "initial_estimate")?;
        let alpha0 = if field(ai).is_empty() {
            None
        } else {
            let v = parse_f64(ai, "alpha0")?;
            if !(0.0..=1.0).contains(&v) {
                return Err(CalibError::Parse {
                    record: record_no,
                    msg: format!("alpha0 {v} outside [0,1]"),
                });
            }
            Some(v)
        };
        let party = match field(pi).as_str() {
            "" => None,
            "D" => Some(Party::D),
            "R" => Some(Party::R),
            other => {
                return Err(CalibError::Parse {
                    record: record_no,
                    msg: format!("party `{other}` is not one of D, R or empty"),
                })
            }
        };

        let respondent =
            Respondent { user_id: field(ui), question_id: question_id.clone(), initial_estimate, alpha0, party };

        match dataset.iter_mut().find(|(q, _)| q.question_id == question_id) {
            Some((q, rs)) => {
                if q.true_value != true_value || q.dataset_id != field(di) {
                    return Err(CalibError::Parse {
                        record: record_no,
                        msg: format!("question `{question_id}` has conflicting metadata"),
                    });
                }
                rs.push(respondent);
            }
            None => {
                let q = Question { question_id, dataset_id: field(di), true_value };
                dataset.push((q, vec![respondent]));
            }
        }
    }

    for (q, rs) in &dataset {
        if rs.len() < 2 {
            return Err(CalibError::EmptyQuestion { id: q.question_id.clone(), count: rs.len() });
        }
    }
    Ok(dataset)
}

/// Write a dataset in the ingestion schema. Numbers use the shortest
/// representation that parses back to the same value, so a load/write/load
/// cycle is lossless.
pub fn write_dataset<W: Write>(dataset: &Dataset, mut w: W) -> io::Result<()> {
    writeln!(w, "{}", COLUMNS.join(","))?;
    for (q, rs) in dataset {
        for r in rs {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                q.dataset_id,
                q.question_id,
                r.user_id,
                q.true_value,
                r.initial_estimate,
                r.alpha0.map(|v| v.to_string()).unwrap_or_default(),
                r.party.map(|p| p.as_str().to_string()).unwrap_or_default(),
            )?;
        }
    }
    Ok(())
}

pub fn write_dataset_to_path(dataset: &Dataset, path: &Path) -> Result<(), CalibError> {
    let mut file = File::create(path)?;
    write_dataset(dataset, &mut file)?;
    Ok(())
}

/// Parameters of the stochastic linear relation used to synthesize
/// baseline self-weights from initial errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaSynthesis {
    /// Intercept of the relation.
    pub a0: f64,
    /// Magnitude of the negative slope on the rescaled error.
    pub a1: f64,
    /// Standard deviation of the Gaussian noise.
    pub sigma: f64,
}

impl Default for AlphaSynthesis {
    fn default() -> Self {
        AlphaSynthesis { a0: 0.6, a1: 0.2, sigma: 0.15 }
    }
}

/// Rescale errors onto [0,1] by the per-question maximum, so slope
/// parameters mean the same thing across questions of any scale.
fn rescale_errors(errors: &[f64]) -> Result<Vec<f64>, CalibError> {
    if errors.is_empty() {
        return Err(CalibError::DegenerateInput("no errors provided".into()));
    }
    if errors.iter().any(|e| !e.is_finite() || *e < 0.0) {
        return Err(CalibError::InvalidParams("errors must be finite and non-negative".into()));
    }
    let max = errors.iter().cloned().fold(0.0f64, f64::max);
    if max == 0.0 {
        return Ok(vec![0.0; errors.len()]);
    }
    Ok(errors.iter().map(|e| e / max).collect())
}

/// Synthesize baseline self-weights that anti-correlate with initial
/// error: `clip(a0 - a1 * rescaled_error + N(0, sigma), 0, 1)`.
pub fn synthesize_alpha0(
    initial_errors: &[f64],
    params: AlphaSynthesis,
    seed_value: u64,
) -> Result<Vec<f64>, CalibError> {
    if !(params.a0.is_finite() && params.a1.is_finite() && params.sigma.is_finite()) {
        return Err(CalibError::InvalidParams("alpha synthesis parameters must be finite".into()));
    }
    if params.a1 <= 0.0 {
        return Err(CalibError::InvalidParams(format!("a1 must be > 0, got {}", params.a1)));
    }
    if params.sigma < 0.0 {
        return Err(CalibError::InvalidParams(format!("sigma must be >= 0, got {}", params.sigma)));
    }
    let rescaled = rescale_errors(initial_errors)?;
    let spread = rescaled.iter().any(|&e| e != rescaled[0]);
    if !spread && params.sigma == 0.0 {
        return Err(CalibError::DegenerateInput(
            "all errors identical and sigma = 0; downstream correlation undefined".into(),
        ));
    }
    let mut rng = seed::rng(seed_value);
    let noise = Normal::new(0.0, params.sigma).expect("sigma validated");
    Ok(rescaled
        .iter()
        .map(|e| {
            let eps = if params.sigma > 0.0 { noise.sample(&mut rng) } else { 0.0 };
            (params.a0 - params.a1 * e + eps).clamp(0.0, 1.0)
        })
        .collect())
}

/// Synthesize evidence-quality scores that anti-correlate with initial
/// error: `clip((1 - rescaled_error) + N(0, noise_sigma), 0, 1)`.
pub fn synthesize_evidence(
    initial_errors: &[f64],
    noise_sigma: f64,
    seed_value: u64,
) -> Result<Vec<f64>, CalibError> {
    if !noise_sigma.is_finite() || noise_sigma < 0.0 {
        return Err(CalibError::InvalidParams(format!(
            "noise sigma must be finite and >= 0, got {noise_sigma}"
        )));
    }
    let rescaled = rescale_errors(initial_errors)?;
    let mut rng = seed::rng(seed_value);
    let noise = Normal::new(0.0, noise_sigma).expect("sigma validated");
    Ok(rescaled
        .iter()
        .map(|e| {
            let eps = if noise_sigma > 0.0 { noise.sample(&mut rng) } else { 0.0 };
            ((1.0 - e) + eps).clamp(0.0, 1.0)
        })
        .collect())
}

/// Shape of a generated synthetic dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub n_questions: usize,
    /// Respondents per question.
    pub n_respondents: usize,
    /// Range the per-question true values are drawn from.
    pub truth_range: (f64, f64),
    /// Log-scale dispersion of estimates around the truth.
    pub estimate_dispersion: f64,
    /// Probabilities of the D and R labels; the remainder is unlabeled.
    /// `None` produces a party-free dataset.
    pub party_split: Option<(f64, f64)>,
    /// When present, respondents carry a synthesized baseline self-weight.
    pub alpha_params: Option<AlphaSynthesis>,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n_questions: 4,
            n_respondents: 200,
            truth_range: (1_000.0, 1_000_000.0),
            estimate_dispersion: 0.6,
            party_split: Some((0.5, 0.5)),
            alpha_params: Some(AlphaSynthesis::default()),
        }
    }
}

impl SyntheticSpec {
    fn check(&self) -> Result<(), CalibError> {
        if self.n_questions == 0 {
            return Err(CalibError::InvalidSpec("need at least one question".into()));
        }
        if self.n_respondents < 2 {
            return Err(CalibError::InvalidSpec("need at least 2 respondents per question".into()));
        }
        let (lo, hi) = self.truth_range;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(CalibError::InvalidSpec(format!("bad truth range [{lo}, {hi}]")));
        }
        if !(self.estimate_dispersion.is_finite() && self.estimate_dispersion > 0.0) {
            return Err(CalibError::InvalidSpec("estimate dispersion must be > 0".into()));
        }
        if let Some((d, r)) = self.party_split {
            if !(0.0..=1.0).contains(&d) || !(0.0..=1.0).contains(&r) || d + r > 1.0 + 1e-12 {
                return Err(CalibError::InvalidSpec(format!("bad party split ({d}, {r})")));
            }
        }
        Ok(())
    }
}

/// Generate a synthetic dataset with right-skewed estimate distributions
/// around each truth. Deterministic in `(spec, seed)`.
pub fn generate_synthetic_dataset(
    spec: &SyntheticSpec,
    seed_value: u64,
) -> Result<Dataset, CalibError> {
    spec.check()?;
    let mut dataset = Vec::with_capacity(spec.n_questions);
    for qi in 0..spec.n_questions {
        let q_seed = seed::derive(seed_value, qi as u64);
        let mut rng = seed::rng(q_seed);
        let (lo, hi) = spec.truth_range;
        let truth = if lo == hi { lo } else { rng.random_range(lo..hi) };
        // Multiplicative log-normal spread, anchored to the truth's own
        // magnitude so any sign of truth works.
        let magnitude = truth.abs().max(1.0);
        let log_noise = Normal::new(0.0, spec.estimate_dispersion).expect("dispersion validated");
        let estimates: Vec<f64> = (0..spec.n_respondents)
            .map(|_| truth + magnitude * (log_noise.sample(&mut rng).exp() - 1.0))
            .collect();
        let parties: Vec<Option<Party>> = (0..spec.n_respondents)
            .map(|_| match spec.party_split {
                None => None,
                Some((d, r)) => {
                    let x: f64 = rng.random();
                    if x < d {
                        Some(Party::D)
                    } else if x < d + r {
                        Some(Party::R)
                    } else {
                        None
                    }
                }
            })
            .collect();
        let alpha0: Option<Vec<f64>> = match spec.alpha_params {
            None => None,
            Some(params) => {
                let sd = {
                    let n = estimates.len() as f64;
                    let mean = estimates.iter().sum::<f64>() / n;
                    (estimates.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0))
                        .sqrt()
                };
                let errors: Vec<f64> =
                    estimates.iter().map(|x| (x - truth).abs() / sd).collect();
                Some(synthesize_alpha0(&errors, params, seed::derive(q_seed, seed::ALPHA_STREAM))?)
            }
        };

        let question_id = format!("q{qi}");
        let question = Question {
            question_id: question_id.clone(),
            dataset_id: "synthetic".into(),
            true_value: truth,
        };
        let respondents: Vec<Respondent> = (0..spec.n_respondents)
            .map(|ui| Respondent {
                user_id: format!("u{ui}"),
                question_id: question_id.clone(),
                initial_estimate: estimates[ui],
                alpha0: alpha0.as_ref().map(|a| a[ui]),
                party: parties[ui],
            })
            .collect();
        dataset.push((question, respondents));
    }
    Ok(dataset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::test_oracles::plain_pearson;

    fn sample_csv() -> &'static str {
        "dataset_id,question_id,user_id,true_value,initial_estimate,alpha0,party\n\
         bk19,q1,u42,11300000,22000000,0.7,R\n\
         bk19,q1,u43,11300000,9000000,,\n\
         bk19,q2,u42,250,300,0.5,D\n\
         bk19,q2,u44,250,200,,R\n"
    }

    #[test]
    fn loads_rows_into_questions() {
        let ds = load_dataset_from_reader(sample_csv().as_bytes()).unwrap();
        assert_eq!(ds.len(), 2);
        let (q1, r1) = &ds[0];
        assert_eq!(q1.question_id, "q1");
        assert_eq!(q1.true_value, 1.13e7);
        assert_eq!(r1[0].initial_estimate, 2.2e7);
        assert_eq!(r1[0].alpha0, Some(0.7));
        assert_eq!(r1[0].party, Some(Party::R));
        assert_eq!(r1[1].alpha0, None);
        assert_eq!(r1[1].party, None);
    }

    #[test]
    fn schema_and_parse_errors() {
        let missing = "dataset_id,question_id,user_id,true_value,initial_estimate,alpha0\n";
        assert!(matches!(
            load_dataset_from_reader(missing.as_bytes()),
            Err(CalibError::Schema(col)) if col == "party"
        ));
        let bad_number = "dataset_id,question_id,user_id,true_value,initial_estimate,alpha0,party\n\
                          d,q,u,10,abc,,\nd,q,v,10,11,,\n";
        assert!(matches!(
            load_dataset_from_reader(bad_number.as_bytes()),
            Err(CalibError::Parse { record: 2, .. })
        ));
        let bad_party = "dataset_id,question_id,user_id,true_value,initial_estimate,alpha0,party\n\
                         d,q,u,10,11,,X\nd,q,v,10,11,,\n";
        assert!(matches!(load_dataset_from_reader(bad_party.as_bytes()), Err(CalibError::Parse { .. })));
        let bad_alpha = "dataset_id,question_id,user_id,true_value,initial_estimate,alpha0,party\n\
                         d,q,u,10,11,1.2,\nd,q,v,10,11,,\n";
        assert!(matches!(load_dataset_from_reader(bad_alpha.as_bytes()), Err(CalibError::Parse { .. })));
    }

    #[test]
    fn questions_need_two_respondents() {
        let single = "dataset_id,question_id,user_id,true_value,initial_estimate,alpha0,party\n\
                      d,q,u,10,11,,\n";
        assert!(matches!(
            load_dataset_from_reader(single.as_bytes()),
            Err(CalibError::EmptyQuestion { count: 1, .. })
        ));
    }

    #[test]
    fn dataset_scale_counts() {
        // 4 questions, 1799 rows in total: counts survive the round trip.
        let mut csv = String::from(
            "dataset_id,question_id,user_id,true_value,initial_estimate,alpha0,party\n",
        );
        let sizes = [450, 450, 450, 449];
        for (qi, &size) in sizes.iter().enumerate() {
            for ui in 0..size {
                csv.push_str(&format!("bk,q{qi},u{ui},100,{},0.5,D\n", 90 + ui));
            }
        }
        let ds = load_dataset_from_reader(csv.as_bytes()).unwrap();
        assert_eq!(ds.len(), 4);
        assert_eq!(ds.iter().map(|(_, rs)| rs.len()).sum::<usize>(), 1799);
    }

    #[test]
    fn round_trip_is_lossless() {
        let spec = SyntheticSpec { n_questions: 3, n_respondents: 20, ..Default::default() };
        let ds = generate_synthetic_dataset(&spec, 42).unwrap();
        let mut buf = Vec::new();
        write_dataset(&ds, &mut buf).unwrap();
        let reloaded = load_dataset_from_reader(buf.as_slice()).unwrap();
        assert_eq!(ds, reloaded);
    }

    #[test]
    fn alpha_synthesis_endpoint_values() {
        let params = AlphaSynthesis { a0: 0.6, a1: 0.2, sigma: 0.0 };
        let got = synthesize_alpha0(&[0.0, 4.0], params, 1).unwrap();
        assert!((got[0] - 0.6).abs() < 1e-12);
        assert!((got[1] - 0.4).abs() < 1e-12);
    }

    #[test]
    fn alpha_synthesis_noiseless_is_perfectly_anticorrelated() {
        let params = AlphaSynthesis { a0: 0.6, a1: 0.2, sigma: 0.0 };
        let errors = [0.1, 0.9, 0.4, 1.7, 0.05];
        let alphas = synthesize_alpha0(&errors, params, 9).unwrap();
        let r = plain_pearson(&alphas, &errors);
        assert!((r + 1.0).abs() < 1e-9, "r = {r}");
    }

    #[test]
    fn alpha_synthesis_default_correlation_band() {
        // Default parameters land in the expected anti-correlation band on
        // realistic right-skewed errors for most seeds.
        let spec = SyntheticSpec { n_questions: 1, n_respondents: 200, ..Default::default() };
        let ds = generate_synthetic_dataset(&spec, 5).unwrap();
        let (q, rs) = &ds[0];
        let estimates: Vec<f64> = rs.iter().map(|r| r.initial_estimate).collect();
        let ctx = crate::metrics::QuestionContext::from_estimates(q.true_value, &estimates).unwrap();
        let errors: Vec<f64> =
            estimates.iter().map(|&x| crate::metrics::individual_error(x, &ctx)).collect();
        let mut hits = 0;
        for s in 0..100u64 {
            let alphas = synthesize_alpha0(&errors, AlphaSynthesis::default(), s).unwrap();
            let r = plain_pearson(&alphas, &errors);
            if (-0.35..=-0.05).contains(&r) {
                hits += 1;
            }
        }
        assert!(hits >= 95, "only {hits}/100 seeds inside the band");
    }

    #[test]
    fn alpha_synthesis_rejects_degenerate_input() {
        let params = AlphaSynthesis { a0: 0.6, a1: 0.2, sigma: 0.0 };
        assert!(matches!(
            synthesize_alpha0(&[2.0, 2.0, 2.0], params, 0),
            Err(CalibError::DegenerateInput(_))
        ));
        // With noise the same input is fine.
        let noisy = AlphaSynthesis { sigma: 0.1, ..params };
        assert!(synthesize_alpha0(&[2.0, 2.0, 2.0], noisy, 0).is_ok());
    }

    #[test]
    fn evidence_synthesis_noiseless_values() {
        let got = synthesize_evidence(&[0.0, 2.0, 4.0], 0.0, 3).unwrap();
        assert_eq!(got, vec![1.0, 0.5, 0.0]);
        let errors = [0.3, 1.2, 0.8, 2.0];
        let d = synthesize_evidence(&errors, 0.0, 3).unwrap();
        let r = plain_pearson(&d, &errors);
        assert!((r + 1.0).abs() < 1e-9);
    }

    #[test]
    fn evidence_synthesis_noisy_correlation_band() {
        let spec = SyntheticSpec { n_questions: 1, n_respondents: 200, ..Default::default() };
        let ds = generate_synthetic_dataset(&spec, 12).unwrap();
        let (q, rs) = &ds[0];
        let estimates: Vec<f64> = rs.iter().map(|r| r.initial_estimate).collect();
        let ctx = crate::metrics::QuestionContext::from_estimates(q.true_value, &estimates).unwrap();
        let errors: Vec<f64> =
            estimates.iter().map(|&x| crate::metrics::individual_error(x, &ctx)).collect();
        for s in 0..20u64 {
            let d = synthesize_evidence(&errors, 0.1, s).unwrap();
            let r = plain_pearson(&d, &errors);
            assert!((-0.99..=-0.6).contains(&r), "seed {s}: r = {r}");
        }
    }

    #[test]
    fn synthesizers_stay_in_unit_interval() {
        let mut rng = crate::seed::rng(77);
        for trial in 0..50u64 {
            let n = rng.random_range(2..100);
            let errors: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..10.0)).collect();
            let alphas =
                synthesize_alpha0(&errors, AlphaSynthesis::default(), trial).unwrap();
            let evidence = synthesize_evidence(&errors, 0.1, trial).unwrap();
            for v in alphas.iter().chain(&evidence) {
                assert!((0.0..=1.0).contains(v));
            }
        }
    }

    #[test]
    fn synthetic_dataset_contracts() {
        let spec = SyntheticSpec { n_questions: 4, n_respondents: 200, ..Default::default() };
        let ds = generate_synthetic_dataset(&spec, 7).unwrap();
        assert_eq!(ds.len(), 4);
        for (_, rs) in &ds {
            assert_eq!(rs.len(), 200);
            assert!(rs.iter().all(|r| r.party.is_some()));
            assert!(rs.iter().any(|r| r.party == Some(Party::D)));
            assert!(rs.iter().any(|r| r.party == Some(Party::R)));
            assert!(rs.iter().all(|r| r.alpha0.is_some()));
        }

        let party_free = SyntheticSpec { party_split: None, alpha_params: None, ..spec };
        let ds = generate_synthetic_dataset(&party_free, 7).unwrap();
        for (_, rs) in &ds {
            assert!(rs.iter().all(|r| r.party.is_none() && r.alpha0.is_none()));
        }
    }

    #[test]
    fn synthetic_dataset_is_deterministic() {
        let spec = SyntheticSpec::default();
        let a = generate_synthetic_dataset(&spec, 99).unwrap();
        let b = generate_synthetic_dataset(&spec, 99).unwrap();
        let mut buf_a = Vec::new();
        let mut buf_b = Vec::new();
        write_dataset(&a, &mut buf_a).unwrap();
        write_dataset(&b, &mut buf_b).unwrap();
        assert_eq!(buf_a, buf_b);
    }

    #[test]
    fn synthetic_spec_validation() {
        let bad = SyntheticSpec { n_respondents: 1, ..Default::default() };
        assert!(matches!(generate_synthetic_dataset(&bad, 0), Err(CalibError::InvalidSpec(_))));
        let bad = SyntheticSpec { estimate_dispersion: 0.0, ..Default::default() };
        assert!(matches!(generate_synthetic_dataset(&bad, 0), Err(CalibError::InvalidSpec(_))));
        let bad = SyntheticSpec { party_split: Some((0.7, 0.7)), ..Default::default() };
        assert!(matches!(generate_synthetic_dataset(&bad, 0), Err(CalibError::InvalidSpec(_))));
    }
}
