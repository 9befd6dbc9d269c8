//! Experiment configuration, the key = value config-file format, and the
//! run manifest.
//!
//! The config file mirrors [`ExperimentConfig`] field for field; every key
//! is optional and defaults apply. The manifest written next to each run's
//! results is the same format with every value resolved, plus the seed
//! derivation tree, so a run can be reproduced from its manifest alone.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::calib::{AlphaSynthesis, SyntheticSpec};
use crate::dynamics::{
    default_control_coefficients, default_treatment_coefficients, ConditionCoefficients,
};
use crate::graph::NetworkKind;
use crate::seed;

use super::HarnessError;

/// Where the calibration data comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum DatasetSource {
    Path(PathBuf),
    Synthetic(SyntheticSpec),
}

/// Everything a run needs; one value per field, no hidden state.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dataset: DatasetSource,
    pub network: NetworkKind,
    pub replications: usize,
    pub rounds: usize,
    pub control: ConditionCoefficients,
    pub treatment: ConditionCoefficients,
    /// Fraction of treatment-arm agents that actually receive the
    /// treatment coefficients.
    pub treatment_fraction: f64,
    pub homophily_enabled: bool,
    /// Fresh topology per replication when true; a fixed per-question
    /// topology (agents still re-assigned) when false.
    pub regenerate_topology: bool,
    pub alpha_synthesis: AlphaSynthesis,
    pub evidence_noise_sigma: f64,
    pub master_seed: u64,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dataset: DatasetSource::Synthetic(SyntheticSpec::default()),
            network: NetworkKind::Egalitarian { degree: 4 },
            replications: 100,
            rounds: 3,
            control: default_control_coefficients(),
            treatment: default_treatment_coefficients(),
            treatment_fraction: 1.0,
            homophily_enabled: true,
            regenerate_topology: true,
            alpha_synthesis: AlphaSynthesis::default(),
            evidence_noise_sigma: 0.1,
            master_seed: 42,
            output_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.replications < 1 {
            return Err(HarnessError::Config("replications must be >= 1".into()));
        }
        if self.rounds < 2 {
            return Err(HarnessError::Config("rounds must be >= 2".into()));
        }
        if !(0.0..=1.0).contains(&self.treatment_fraction) {
            return Err(HarnessError::Config(format!(
                "treatment_fraction {} must lie in [0,1]",
                self.treatment_fraction
            )));
        }
        if !(self.evidence_noise_sigma.is_finite() && self.evidence_noise_sigma >= 0.0) {
            return Err(HarnessError::Config("evidence_sigma must be >= 0".into()));
        }
        Ok(())
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool, HarnessError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(HarnessError::Config(format!("{key}: expected true/false, got `{other}`"))),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, HarnessError> {
    value
        .parse::<T>()
        .map_err(|_| HarnessError::Config(format!("{key}: cannot parse `{value}`")))
}

fn parse_opt_prob(key: &str, value: &str) -> Result<Option<f64>, HarnessError> {
    if value == "none" {
        return Ok(None);
    }
    Ok(Some(parse_num::<f64>(key, value)?))
}

/// Parse config-file text into a config, starting from the defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, HarnessError> {
    let mut map: HashMap<String, String> = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(HarnessError::Config(format!(
                "line {}: expected `key = value`, got `{raw}`",
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    config_from_map(map)
}

fn config_from_map(mut map: HashMap<String, String>) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = ExperimentConfig::default();
    

    if let Some(v) = map.remove("dataset") {
        cfg.dataset = if v == "synthetic" {
            DatasetSource::Synthetic(SyntheticSpec::default())
        } else {
            DatasetSource::Path(PathBuf::from(v))
        };
    }

    // Synthetic-spec keys only apply to a synthetic source.
    {
        let mut spec = match &cfg.dataset {
            DatasetSource::Synthetic(s) => s.clone(),
            DatasetSource::Path(_) => SyntheticSpec::default(),
        };
        if let Some(v) = map.remove("synthetic_questions") {
            spec.n_questions = parse_num("synthetic_questions", &v)?;
        }
        if let Some(v) = map.remove("synthetic_respondents") {
            spec.n_respondents = parse_num("synthetic_respondents", &v)?;
        }
        if let Some(v) = map.remove("synthetic_truth_lo") {
            spec.truth_range.0 = parse_num("synthetic_truth_lo", &v)?;
        }
        if let Some(v) = map.remove("synthetic_truth_hi") {
            spec.truth_range.1 = parse_num("synthetic_truth_hi", &v)?;
        }
        if let Some(v) = map.remove("synthetic_dispersion") {
            spec.estimate_dispersion = parse_num("synthetic_dispersion", &v)?;
        }
        let d = map.remove("synthetic_party_d");
        let r = map.remove("synthetic_party_r");
        if d.is_some() || r.is_some() {
            let dv = d.map(|v| parse_opt_prob("synthetic_party_d", &v)).transpose()?.flatten();
            let rv = r.map(|v| parse_opt_prob("synthetic_party_r", &v)).transpose()?.flatten();
            spec.party_split = match (dv, rv) {
                (None, None) => None,
                (a, b) => Some((a.unwrap_or(0.0), b.unwrap_or(0.0))),
            };
        }
        if let Some(v) = map.remove("synthetic_alpha0") {
            spec.alpha_params = if parse_bool("synthetic_alpha0", &v)? {
                Some(cfg.alpha_synthesis)
            } else {
                None
            };
        }
        if let DatasetSource::Synthetic(s) = &mut cfg.dataset {
            *s = spec;
        }
    }

    if let Some(v) = map.remove("network") {
        cfg.network = match v.as_str() {
            "egalitarian" => NetworkKind::Egalitarian { degree: 4 },
            "ba" => NetworkKind::BarabasiAlbert { m: 2, p: 0.5 },
            "ws" => NetworkKind::WattsStrogatz { k: 4, p: 0.5 },
            "star" => NetworkKind::Star,
            other => {
                return Err(HarnessError::Config(format!(
                    "network: `{other}` is not one of egalitarian, ba, ws, star"
                )))
            }
        };
    }
    if let Some(v) = map.remove("degree") {
        if let NetworkKind::Egalitarian { degree } = &mut cfg.network {
            *degree = parse_num("degree", &v)?;
        }
    }
    if let Some(v) = map.remove("ba_m") {
        if let NetworkKind::BarabasiAlbert { m, .. } = &mut cfg.network {
            *m = parse_num("ba_m", &v)?;
        }
    }
    if let Some(v) = map.remove("ba_p") {
        if let NetworkKind::BarabasiAlbert { p, .. } = &mut cfg.network {
            *p = parse_num("ba_p", &v)?;
        }
    }
    if let Some(v) = map.remove("ws_k") {
        if let NetworkKind::WattsStrogatz { k, .. } = &mut cfg.network {
            *k = parse_num("ws_k", &v)?;
        }
    }
    if let Some(v) = map.remove("ws_p") {
        if let NetworkKind::WattsStrogatz { p, .. } = &mut cfg.network {
            *p = parse_num("ws_p", &v)?;
        }
    }

    if let Some(v) = map.remove("replications") {
        cfg.replications = parse_num("replications", &v)?;
    }
    if let Some(v) = map.remove("rounds") {
        cfg.rounds = parse_num("rounds", &v)?;
    }
    if let Some(v) = map.remove("treatment_fraction") {
        cfg.treatment_fraction = parse_num("treatment_fraction", &v)?;
    }
    if let Some(v) = map.remove("homophily") {
        cfg.homophily_enabled = parse_bool("homophily", &v)?;
    }
    if let Some(v) = map.remove("regenerate_topology") {
        cfg.regenerate_topology = parse_bool("regenerate_topology", &v)?;
    }

    let mut coeff = |prefix: &str, base: ConditionCoefficients| -> Result<ConditionCoefficients, HarnessError> {
        let mut w = [
            base.evidence_intercept(),
            base.evidence_slope(),
            base.homophily_intercept(),
            base.homophily_slope(),
        ];
        let names = ["evidence_intercept", "evidence_slope", "homophily_intercept", "homophily_slope"];
        for (slot, name) in w.iter_mut().zip(names) {
            let key = format!("{prefix}_{name}");
            if let Some(v) = map.remove(&key) {
                *slot = parse_num(&key, &v)?;
            }
        }
        ConditionCoefficients::new(w[0], w[1], w[2], w[3])
            .map_err(|e| HarnessError::Config(format!("{prefix} coefficients: {e}")))
    };
    cfg.control = coeff("control", cfg.control)?;
    cfg.treatment = coeff("treatment", cfg.treatment)?;

    if let Some(v) = map.remove("alpha_a0") {
        cfg.alpha_synthesis.a0 = parse_num("alpha_a0", &v)?;
    }
    if let Some(v) = map.remove("alpha_a1") {
        cfg.alpha_synthesis.a1 = parse_num("alpha_a1", &v)?;
    }
    if let Some(v) = map.remove("alpha_sigma") {
        cfg.alpha_synthesis.sigma = parse_num("alpha_sigma", &v)?;
    }
    if let Some(v) = map.remove("evidence_sigma") {
        cfg.evidence_noise_sigma = parse_num("evidence_sigma", &v)?;
    }
    if let Some(v) = map.remove("master_seed") {
        cfg.master_seed = parse_num("master_seed", &v)?;
    }
    if let Some(v) = map.remove("output_dir") {
        cfg.output_dir = PathBuf::from(v);
    }

    if let Some(key) = map.keys().next() {
        return Err(HarnessError::Config(format!("unknown config key `{key}`")));
    }
    // Keep the spec's alpha parameters in sync with the top-level ones.
    if let DatasetSource::Synthetic(spec) = &mut cfg.dataset {
        if spec.alpha_params.is_some() {
            spec.alpha_params = Some(cfg.alpha_synthesis);
        }
    }
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, HarnessError> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

/// Render a config in the config-file format, fully resolved.
pub fn config_to_string(cfg: &ExperimentConfig) -> String {
    let mut s = String::new();
    match &cfg.dataset {
        DatasetSource::Path(p) => {
            let _ = writeln!(s, "dataset = {}", p.display());
        }
        DatasetSource::Synthetic(spec) => {
            let _ = writeln!(s, "dataset = synthetic");
            let _ = writeln!(s, "synthetic_questions = {}", spec.n_questions);
            let _ = writeln!(s, "synthetic_respondents = {}", spec.n_respondents);
            let _ = writeln!(s, "synthetic_truth_lo = {}", spec.truth_range.0);
            let _ = writeln!(s, "synthetic_truth_hi = {}", spec.truth_range.1);
            let _ = writeln!(s, "synthetic_dispersion = {}", spec.estimate_dispersion);
            match spec.party_split {
                Some((d, r)) => {
                    let _ = writeln!(s, "synthetic_party_d = {d}");
                    let _ = writeln!(s, "synthetic_party_r = {r}");
                }
                None => {
                    let _ = writeln!(s, "synthetic_party_d = none");
                    let _ = writeln!(s, "synthetic_party_r = none");
                }
            }
            let _ = writeln!(s, "synthetic_alpha0 = {}", spec.alpha_params.is_some());
        }
    }
    match cfg.network {
        NetworkKind::Egalitarian { degree } => {
            let _ = writeln!(s, "network = egalitarian");
            let _ = writeln!(s, "degree = {degree}");
        }
        NetworkKind::BarabasiAlbert { m, p } => {
            let _ = writeln!(s, "network = ba");
            let _ = writeln!(s, "ba_m = {m}");
            let _ = writeln!(s, "ba_p = {p}");
        }
        NetworkKind::WattsStrogatz { k, p } => {
            let _ = writeln!(s, "network = ws");
            let _ = writeln!(s, "ws_k = {k}");
            let _ = writeln!(s, "ws_p = {p}");
        }
        NetworkKind::Star => {
            let _ = writeln!(s, "network = star");
        }
    }
    let _ = writeln!(s, "replications = {}", cfg.replications);
    let _ = writeln!(s, "rounds = {}", cfg.rounds);
    let _ = writeln!(s, "treatment_fraction = {}", cfg.treatment_fraction);
    let _ = writeln!(s, "homophily = {}", cfg.homophily_enabled);
    let _ = writeln!(s, "regenerate_topology = {}", cfg.regenerate_topology);
    for (prefix, c) in [("control", &cfg.control), ("treatment", &cfg.treatment)] {
        let _ = writeln!(s, "{prefix}_evidence_intercept = {}", c.evidence_intercept());
        let _ = writeln!(s, "{prefix}_evidence_slope = {}", c.evidence_slope());
        let _ = writeln!(s, "{prefix}_homophily_intercept = {}", c.homophily_intercept());
        let _ = writeln!(s, "{prefix}_homophily_slope = {}", c.homophily_slope());
    }
    let _ = writeln!(s, "alpha_a0 = {}", cfg.alpha_synthesis.a0);
    let _ = writeln!(s, "alpha_a1 = {}", cfg.alpha_synthesis.a1);
    let _ = writeln!(s, "alpha_sigma = {}", cfg.alpha_synthesis.sigma);
    let _ = writeln!(s, "evidence_sigma = {}", cfg.evidence_noise_sigma);
    let _ = writeln!(s, "master_seed = {}", cfg.master_seed);
    let _ = writeln!(s, "output_dir = {}", cfg.output_dir.display());
    s
}

/// Render the run manifest: the resolved config plus the seed tree.
pub fn manifest(cfg: &ExperimentConfig, question_ids: &[String]) -> String {
    let mut s = String::from("# resolved configuration\n");
    s.push_str(&config_to_string(cfg));
    s.push_str("\n# seed derivation tree\n");
    s.push_str("# master -> question(index) -> replication(index)\n");
    s.push_str("#   -> network / assignment / alpha / evidence / subset streams\n");
    let _ = writeln!(s, "seed_master = {}", cfg.master_seed);
    for (qi, qid) in question_ids.iter().enumerate() {
        let q_seed = seed::derive(cfg.master_seed, qi as u64);
        let _ = writeln!(s, "seed_question_{qid} = {q_seed}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_text() {
        let cfg = ExperimentConfig::default();
        let text = config_to_string(&cfg);
        let parsed = parse_config(&text).unwrap();
        assert_eq!(cfg, parsed);
    }

    #[test]
    fn custom_config_round_trips() {
        let text = "\
            dataset = synthetic\n\
            synthetic_questions = 2\n\
            synthetic_respondents = 50\n\
            synthetic_party_d = none\n\
            synthetic_party_r = none\n\
            synthetic_alpha0 = false\n\
            network = ws\n\
            ws_k = 6\n\
            ws_p = 0.25\n\
            replications = 7\n\
            rounds = 4\n\
            treatment_fraction = 0.5\n\
            homophily = false\n\
            control_evidence_slope = 0.05\n\
            master_seed = 7\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.network, NetworkKind::WattsStrogatz { k: 6, p: 0.25 });
        assert_eq!(cfg.replications, 7);
        assert_eq!(cfg.rounds, 4);
        assert!(!cfg.homophily_enabled);
        assert_eq!(cfg.control.evidence_slope(), 0.05);
        match &cfg.dataset {
            DatasetSource::Synthetic(spec) => {
                assert_eq!(spec.n_questions, 2);
                assert_eq!(spec.party_split, None);
                assert_eq!(spec.alpha_params, None);
            }
            _ => panic!("expected synthetic"),
        }
        let reparsed = parse_config(&config_to_string(&cfg)).unwrap();
        assert_eq!(cfg, reparsed);
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let cfg = parse_config("# hello\n\nreplications = 3 # trailing\n").unwrap();
        assert_eq!(cfg.replications, 3);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(parse_config("bogus = 1\n"), Err(HarnessError::Config(_))));
        assert!(matches!(parse_config("replications 3\n"), Err(HarnessError::Config(_))));
    }

    #[test]
    fn validation_catches_bad_values() {
        let cfg = ExperimentConfig { rounds: 1, ..Default::default() };
        assert!(cfg.validate().is_err());
        let cfg = ExperimentConfig { treatment_fraction: 1.5, ..Default::default() };
        assert!(cfg.validate().is_err());
        let cfg = ExperimentConfig { replications: 0, ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
