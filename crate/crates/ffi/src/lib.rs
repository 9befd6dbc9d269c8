//! C ABI for the simulator.
//!
//! Conventions:
//! - Fallible calls return [`IhsimStatus`]; `IHSIM_STATUS_OK` is 0.
//! - Constructors return an opaque handle, or null on failure.
//! - After any failure, [`ihsim_last_error`] returns a malloc'd message for
//!   the calling thread; free it with [`ihsim_string_free`].
//! - Handles are freed exactly once with their matching `_free` function.
//! - Absent optional metrics are reported as NaN plus a `has_*` flag.
//!
//! The header `include/ihsim.h` is regenerated by the build script.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::ptr;

use ihsim::calib::{AlphaSynthesis, SyntheticSpec};
use ihsim::dynamics::{Condition, ConditionCoefficients};
use ihsim::graph::{self, NetworkKind};
use ihsim::harness::{self, DatasetSource, ExperimentConfig, ResultRow};
use ihsim::metrics::{self, QuestionContext};
use ihsim::stats::{self, PairedSample, Statistic};

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into();
    let cstring = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(cstring));
}

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IhsimStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    RunFailed = 3,
    IoFailed = 4,
}

/// Network family selector for the C API.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IhsimNetworkKind {
    /// `param1` = degree.
    Egalitarian = 0,
    /// `param1` = edges per new node, `param2` = preferential probability.
    BarabasiAlbert = 1,
    /// `param1` = ring degree (even), `param2` = rewiring probability.
    WattsStrogatz = 2,
    Star = 3,
}

fn kind_from_c(kind: IhsimNetworkKind, param1: f64, param2: f64) -> Result<NetworkKind, String> {
    let as_count = |v: f64, what: &str| -> Result<usize, String> {
        if v.is_finite() && v >= 0.0 && v.fract() == 0.0 {
            Ok(v as usize)
        } else {
            Err(format!("{what} must be a non-negative integer, got {v}"))
        }
    };
    Ok(match kind {
        IhsimNetworkKind::Egalitarian => {
            NetworkKind::Egalitarian { degree: as_count(param1, "degree")? }
        }
        IhsimNetworkKind::BarabasiAlbert => {
            NetworkKind::BarabasiAlbert { m: as_count(param1, "m")?, p: param2 }
        }
        IhsimNetworkKind::WattsStrogatz => {
            NetworkKind::WattsStrogatz { k: as_count(param1, "k")?, p: param2 }
        }
        IhsimNetworkKind::Star => NetworkKind::Star,
    })
}

/// Numeric view of one result row. Optional metrics are NaN when the
/// matching `has_*` flag is false.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct IhsimRowData {
    pub replication: usize,
    /// 0 = control, 1 = treatment.
    pub condition: i32,
    pub round: usize,
    pub mean_error: f64,
    pub collective_sqe: f64,
    pub individual_sqe: f64,
    pub predictive_diversity: f64,
    pub polarization: f64,
    pub revision_coefficient: f64,
    pub has_polarization: bool,
    pub has_revision_coefficient: bool,
}

/// Opaque experiment configuration handle.
pub struct IhsimConfig {
    inner: ExperimentConfig,
}

/// Opaque generated-network handle.
pub struct IhsimNetwork {
    inner: graph::Network,
}

/// Opaque result-set handle.
pub struct IhsimResults {
    rows: Vec<ResultRow>,
}

unsafe fn cstr_arg(ptr: *const c_char, what: &str) -> Result<String, IhsimStatus> {
    if ptr.is_null() {
        set_error(format!("{what} is null"));
        return Err(IhsimStatus::NullPointer);
    }
    match unsafe { CStr::from_ptr(ptr) }.to_str() {
        Ok(s) => Ok(s.to_string()),
        Err(_) => {
            set_error(format!("{what} is not valid UTF-8"));
            Err(IhsimStatus::InvalidArgument)
        }
    }
}

macro_rules! deref_or {
    ($ptr:expr, $what:literal) => {{
        let Some(r) = (unsafe { $ptr.as_ref() }) else {
            set_error(concat!($what, " is null"));
            return IhsimStatus::NullPointer;
        };
        r
    }};
}

macro_rules! deref_mut_or {
    ($ptr:expr, $what:literal) => {{
        let Some(r) = (unsafe { $ptr.as_mut() }) else {
            set_error(concat!($what, " is null"));
            return IhsimStatus::NullPointer;
        };
        r
    }};
}

macro_rules! out_or {
    ($ptr:expr, $what:literal) => {{
        if $ptr.is_null() {
            set_error(concat!($what, " is null"));
            return IhsimStatus::NullPointer;
        }
        $ptr
    }};
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn ihsim_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

/// Message of the calling thread's most recent failure, or null. The
/// caller owns the returned string and must release it with
/// [`ihsim_string_free`].
#[no_mangle]
pub extern "C" fn ihsim_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must have been returned by a function of this library and not yet
/// freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ihsim_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

// --- configuration ---------------------------------------------------------

/// New configuration with the library defaults (synthetic party-labeled
/// dataset, egalitarian d=4, 100 replications, 3 rounds, seed 42).
#[no_mangle]
pub extern "C" fn ihsim_config_new() -> *mut IhsimConfig {
    Box::into_raw(Box::new(IhsimConfig { inner: ExperimentConfig::default() }))
}

/// Parse a config file (key = value lines) into a new handle; null on
/// error.
///
/// # Safety
/// `path` must be a valid NUL-terminated string or null.
#[no_mangle]
pub unsafe extern "C" fn ihsim_config_from_file(path: *const c_char) -> *mut IhsimConfig {
    let Ok(path) = (unsafe { cstr_arg(path, "path") }) else {
        return ptr::null_mut();
    };
    match harness::load_config(&PathBuf::from(path)) {
        Ok(inner) => Box::into_raw(Box::new(IhsimConfig { inner })),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `config` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn ihsim_config_free(config: *mut IhsimConfig) {
    if !config.is_null() {
        drop(unsafe { Box::from_raw(config) });
    }
}

/// # Safety
/// `config` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn ihsim_config_set_seed(config: *mut IhsimConfig, seed: u64) -> IhsimStatus {
    let cfg = deref_mut_or!(config, "config");
    cfg.inner.master_seed = seed;
    IhsimStatus::Ok
}

/// # Safety
/// `config` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn ihsim_config_set_replications(
    config: *mut IhsimConfig,
    replications: usize,
) -> IhsimStatus {
    let cfg = deref_mut_or!(config, "config");
    if replications == 0 {
        set_error("replications must be >= 1");
        return IhsimStatus::InvalidArgument;
    }
    cfg.inner.replications = replications;
    IhsimStatus::Ok
}

/// # Safety
/// `config` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn ihsim_config_set_rounds(
    config: *mut IhsimConfig,
    rounds: usize,
) -> IhsimStatus {
    let cfg = deref_mut_or!(config, "config");
    if rounds < 2 {
        set_error("rounds must be >= 2");
        return IhsimStatus::InvalidArgument;
    }
    cfg.inner.rounds = rounds;
    IhsimStatus::Ok
}

/// # Safety
/// `config` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn ihsim_config_set_treatment_fraction(
    config: *mut IhsimConfig,
    fraction: f64,
) -> IhsimStatus {
    let cfg = deref_mut_or!(config, "config");
    if !(0.0..=1.0).contains(&fraction) {
        set_error(format!("treatment fraction {fraction} must lie in [0,1]"));
        return IhsimStatus::InvalidArgument;
    }
    cfg.inner.treatment_fraction = fraction;
    IhsimStatus::Ok
}

/// # Safety
/// `config` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn ihsim_config_set_homophily(
    config: *mut IhsimConfig,
    enabled: bool,
) -> IhsimStatus {
    let cfg = deref_mut_or!(config, "config");
    cfg.inner.homophily_enabled = enabled;
    IhsimStatus::Ok
}

/// # Safety
/// `config` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn ihsim_config_set_network(
    config: *mut IhsimConfig,
    kind: IhsimNetworkKind,
    param1: f64,
    param2: f64,
) -> IhsimStatus {
    let cfg = deref_mut_or!(config, "config");
    match kind_from_c(kind, param1, param2) {
        Ok(k) => {
            cfg.inner.network = k;
            IhsimStatus::Ok
        }
        Err(msg) => {
            set_error(msg);
            IhsimStatus::InvalidArgument
        }
    }
}

/// Point the configuration at a dataset CSV.
///
/// # Safety
/// `config` must be a live handle; `path` a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ihsim_config_set_dataset_path(
    config: *mut IhsimConfig,
    path: *const c_char,
) -> IhsimStatus {
    let cfg = deref_mut_or!(config, "config");
    match unsafe { cstr_arg(path, "path") } {
        Ok(p) => {
            cfg.inner.dataset = DatasetSource::Path(PathBuf::from(p));
            IhsimStatus::Ok
        }
        Err(status) => status,
    }
}

/// Use a synthetic dataset of `questions` x `respondents`, with or without
/// party labels.
///
/// # Safety
/// `config` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn ihsim_config_set_synthetic(
    config: *mut IhsimConfig,
    questions: usize,
    respondents: usize,
    party_labels: bool,
) -> IhsimStatus {
    let cfg = deref_mut_or!(config, "config");
    if questions == 0 || respondents < 2 {
        set_error("need at least 1 question and 2 respondents");
        return IhsimStatus::InvalidArgument;
    }
    cfg.inner.dataset = DatasetSource::Synthetic(SyntheticSpec {
        n_questions: questions,
        n_respondents: respondents,
        party_split: if party_labels { Some((0.5, 0.5)) } else { None },
        ..SyntheticSpec::default()
    });
    if !party_labels {
        cfg.inner.homophily_enabled = false;
    }
    IhsimStatus::Ok
}

/// Set one arm's modulation coefficients: evidence intercept/slope, then
/// homophily intercept/slope.
///
/// # Safety
/// `config` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn ihsim_config_set_coefficients(
    config: *mut IhsimConfig,
    treatment_arm: bool,
    evidence_intercept: f64,
    evidence_slope: f64,
    homophily_intercept: f64,
    homophily_slope: f64,
) -> IhsimStatus {
    let cfg = deref_mut_or!(config, "config");
    match ConditionCoefficients::new(
        evidence_intercept,
        evidence_slope,
        homophily_intercept,
        homophily_slope,
    ) {
        Ok(coeffs) => {
            if treatment_arm {
                cfg.inner.treatment = coeffs;
            } else {
                cfg.inner.control = coeffs;
            }
            IhsimStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            IhsimStatus::InvalidArgument
        }
    }
}

// --- running ----------------------------------------------------------------

/// Run the experiment and write `results.csv`, `agents.csv` and
/// `manifest.txt` into `out_dir`.
///
/// # Safety
/// `config` must be a live handle; `out_dir` a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ihsim_run_to_dir(
    config: *const IhsimConfig,
    out_dir: *const c_char,
) -> IhsimStatus {
    let cfg = deref_or!(config, "config");
    let dir = match unsafe { cstr_arg(out_dir, "out_dir") } {
        Ok(d) => PathBuf::from(d),
        Err(status) => return status,
    };
    let output = match harness::run_experiment(&cfg.inner) {
        Ok(o) => o,
        Err(e) => {
            set_error(e.to_string());
            return IhsimStatus::RunFailed;
        }
    };
    match harness::write_outputs(&output, &cfg.inner, &dir) {
        Ok(()) => IhsimStatus::Ok,
        Err(e) => {
            set_error(e.to_string());
            IhsimStatus::IoFailed
        }
    }
}

/// Run the experiment and keep the rows in memory; null on error.
///
/// # Safety
/// `config` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn ihsim_run(config: *const IhsimConfig) -> *mut IhsimResults {
    let Some(cfg) = (unsafe { config.as_ref() }) else {
        set_error("config is null");
        return ptr::null_mut();
    };
    match harness::run_experiment(&cfg.inner) {
        Ok(output) => Box::into_raw(Box::new(IhsimResults { rows: output.rows })),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `results` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn ihsim_results_free(results: *mut IhsimResults) {
    if !results.is_null() {
        drop(unsafe { Box::from_raw(results) });
    }
}

/// # Safety
/// `results` must be a live results handle.
#[no_mangle]
pub unsafe extern "C" fn ihsim_results_row_count(results: *const IhsimResults) -> usize {
    unsafe { results.as_ref() }.map_or(0, |r| r.rows.len())
}

/// Copy row `index` into `out`.
///
/// # Safety
/// `results` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ihsim_results_row(
    results: *const IhsimResults,
    index: usize,
    out: *mut IhsimRowData,
) -> IhsimStatus {
    let res = deref_or!(results, "results");
    let out = out_or!(out, "out");
    let Some(row) = res.rows.get(index) else {
        set_error(format!("row index {index} out of range ({} rows)", res.rows.len()));
        return IhsimStatus::InvalidArgument;
    };
    let data = IhsimRowData {
        replication: row.replication,
        condition: match row.condition {
            Condition::Control => 0,
            Condition::Treatment => 1,
        },
        round: row.round,
        mean_error: row.mean_error,
        collective_sqe: row.collective_sqe,
        individual_sqe: row.individual_sqe,
        predictive_diversity: row.predictive_diversity,
        polarization: row.polarization.unwrap_or(f64::NAN),
        revision_coefficient: row.revision_coefficient.unwrap_or(f64::NAN),
        has_polarization: row.polarization.is_some(),
        has_revision_coefficient: row.revision_coefficient.is_some(),
    };
    unsafe { out.write(data) };
    IhsimStatus::Ok
}

/// Question id of row `index` as a new string (release with
/// [`ihsim_string_free`]); null on error.
///
/// # Safety
/// `results` must be a live results handle.
#[no_mangle]
pub unsafe extern "C" fn ihsim_results_question_id(
    results: *const IhsimResults,
    index: usize,
) -> *mut c_char {
    let Some(res) = (unsafe { results.as_ref() }) else {
        set_error("results is null");
        return ptr::null_mut();
    };
    let Some(row) = res.rows.get(index) else {
        set_error(format!("row index {index} out of range"));
        return ptr::null_mut();
    };
    CString::new(row.question_id.clone())
        .map_or(ptr::null_mut(), CString::into_raw)
}

// --- networks ---------------------------------------------------------------

/// Generate a connected network; null on error.
#[no_mangle]
pub extern "C" fn ihsim_network_generate(
    kind: IhsimNetworkKind,
    param1: f64,
    param2: f64,
    node_count: usize,
    seed: u64,
) -> *mut IhsimNetwork {
    let kind = match kind_from_c(kind, param1, param2) {
        Ok(k) => k,
        Err(msg) => {
            set_error(msg);
            return ptr::null_mut();
        }
    };
    match graph::generate_network(kind, node_count, seed) {
        Ok(inner) => Box::into_raw(Box::new(IhsimNetwork { inner })),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `network` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn ihsim_network_free(network: *mut IhsimNetwork) {
    if !network.is_null() {
        drop(unsafe { Box::from_raw(network) });
    }
}

/// # Safety
/// `network` must be a live network handle.
#[no_mangle]
pub unsafe extern "C" fn ihsim_network_node_count(network: *const IhsimNetwork) -> usize {
    unsafe { network.as_ref() }.map_or(0, |n| n.inner.node_count())
}

/// # Safety
/// `network` must be a live network handle.
#[no_mangle]
pub unsafe extern "C" fn ihsim_network_edge_count(network: *const IhsimNetwork) -> usize {
    unsafe { network.as_ref() }.map_or(0, |n| n.inner.edge_count())
}

/// Degree of `node`, or -1 when the handle or index is invalid.
///
/// # Safety
/// `network` must be a live network handle.
#[no_mangle]
pub unsafe extern "C" fn ihsim_network_degree(
    network: *const IhsimNetwork,
    node: usize,
) -> isize {
    match unsafe { network.as_ref() } {
        Some(n) if node < n.inner.node_count() => n.inner.degree(node) as isize,
        _ => -1,
    }
}

/// Write the edge list (`u v` per line, 0-based) to `path`.
///
/// # Safety
/// `network` must be a live handle; `path` a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ihsim_network_write_edge_list(
    network: *const IhsimNetwork,
    path: *const c_char,
) -> IhsimStatus {
    let net = deref_or!(network, "network");
    let path = match unsafe { cstr_arg(path, "path") } {
        Ok(p) => PathBuf::from(p),
        Err(status) => return status,
    };
    let file = match std::fs::File::create(&path) {
        Ok(f) => f,
        Err(e) => {
            set_error(e.to_string());
            return IhsimStatus::IoFailed;
        }
    };
    match net.inner.write_edge_list(file) {
        Ok(()) => IhsimStatus::Ok,
        Err(e) => {
            set_error(e.to_string());
            IhsimStatus::IoFailed
        }
    }
}

// --- datasets ----------------------------------------------------------------

/// Generate a synthetic calibration dataset and write it as CSV.
///
/// # Safety
/// `path` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ihsim_generate_dataset_csv(
    questions: usize,
    respondents: usize,
    dispersion: f64,
    party_labels: bool,
    with_alpha0: bool,
    seed: u64,
    path: *const c_char,
) -> IhsimStatus {
    let path = match unsafe { cstr_arg(path, "path") } {
        Ok(p) => PathBuf::from(p),
        Err(status) => return status,
    };
    let spec = SyntheticSpec {
        n_questions: questions,
        n_respondents: respondents,
        estimate_dispersion: dispersion,
        party_split: if party_labels { Some((0.5, 0.5)) } else { None },
        alpha_params: if with_alpha0 { Some(AlphaSynthesis::default()) } else { None },
        ..SyntheticSpec::default()
    };
    let dataset = match ihsim::calib::generate_synthetic_dataset(&spec, seed) {
        Ok(d) => d,
        Err(e) => {
            set_error(e.to_string());
            return IhsimStatus::InvalidArgument;
        }
    };
    match ihsim::calib::write_dataset_to_path(&dataset, &path) {
        Ok(()) => IhsimStatus::Ok,
        Err(e) => {
            set_error(e.to_string());
            IhsimStatus::IoFailed
        }
    }
}

// --- numeric kernels ----------------------------------------------------------

unsafe fn slice_arg<'a>(
    ptr: *const f64,
    len: usize,
    what: &str,
) -> Result<&'a [f64], IhsimStatus> {
    if ptr.is_null() {
        set_error(format!("{what} is null"));
        return Err(IhsimStatus::NullPointer);
    }
    Ok(unsafe { std::slice::from_raw_parts(ptr, len) })
}

/// One weighted-averaging update.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ihsim_degroot_step(
    own: f64,
    neighbor_mean: f64,
    alpha: f64,
    out: *mut f64,
) -> IhsimStatus {
    let out = out_or!(out, "out");
    if !(0.0..=1.0).contains(&alpha) {
        set_error(format!("alpha {alpha} must lie in [0,1]"));
        return IhsimStatus::InvalidArgument;
    }
    unsafe { out.write(ihsim::dynamics::degroot_step(own, neighbor_mean, alpha)) };
    IhsimStatus::Ok
}

/// Modulated, clipped self-weight. Pass `has_homophily = false` to zero
/// the homophily term.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ihsim_modulate_self_weight(
    alpha0: f64,
    own_evidence: f64,
    neighbor_mean_evidence: f64,
    has_homophily: bool,
    homophily_fraction: f64,
    evidence_intercept: f64,
    evidence_slope: f64,
    homophily_intercept: f64,
    homophily_slope: f64,
    out: *mut f64,
) -> IhsimStatus {
    let out = out_or!(out, "out");
    let coeffs = match ConditionCoefficients::new(
        evidence_intercept,
        evidence_slope,
        homophily_intercept,
        homophily_slope,
    ) {
        Ok(c) => c,
        Err(e) => {
            set_error(e.to_string());
            return IhsimStatus::InvalidArgument;
        }
    };
    let h = if has_homophily { Some(homophily_fraction) } else { None };
    unsafe {
        out.write(ihsim::dynamics::modulate_self_weight(
            alpha0,
            own_evidence,
            neighbor_mean_evidence,
            h,
            &coeffs,
        ))
    };
    IhsimStatus::Ok
}

/// Normalized distance of one estimate from the truth.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ihsim_individual_error(
    estimate: f64,
    true_value: f64,
    baseline_sd: f64,
    out: *mut f64,
) -> IhsimStatus {
    let out = out_or!(out, "out");
    let ctx = match QuestionContext::new(true_value, baseline_sd) {
        Ok(c) => c,
        Err(e) => {
            set_error(e.to_string());
            return IhsimStatus::InvalidArgument;
        }
    };
    unsafe { out.write(metrics::individual_error(estimate, &ctx)) };
    IhsimStatus::Ok
}

/// Mean normalized cross-party distance.
///
/// # Safety
/// Array pointers must reference at least the stated lengths; `out` must
/// be valid.
#[no_mangle]
pub unsafe extern "C" fn ihsim_polarization(
    dem: *const f64,
    dem_len: usize,
    rep: *const f64,
    rep_len: usize,
    true_value: f64,
    baseline_sd: f64,
    out: *mut f64,
) -> IhsimStatus {
    let out = out_or!(out, "out");
    let dem = match unsafe { slice_arg(dem, dem_len, "dem") } {
        Ok(s) => s,
        Err(e) => return e,
    };
    let rep = match unsafe { slice_arg(rep, rep_len, "rep") } {
        Ok(s) => s,
        Err(e) => return e,
    };
    let ctx = match QuestionContext::new(true_value, baseline_sd) {
        Ok(c) => c,
        Err(e) => {
            set_error(e.to_string());
            return IhsimStatus::InvalidArgument;
        }
    };
    match metrics::polarization(dem, rep, &ctx) {
        Ok(v) => {
            unsafe { out.write(v) };
            IhsimStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            IhsimStatus::InvalidArgument
        }
    }
}

/// Partial correlation of initial errors and revisions, controlling for
/// social signals.
///
/// # Safety
/// The three arrays must each hold `len` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ihsim_revision_coefficient(
    initial_errors: *const f64,
    revisions: *const f64,
    social_signals: *const f64,
    len: usize,
    out: *mut f64,
) -> IhsimStatus {
    let out = out_or!(out, "out");
    let e = match unsafe { slice_arg(initial_errors, len, "initial_errors") } {
        Ok(s) => s,
        Err(err) => return err,
    };
    let d = match unsafe { slice_arg(revisions, len, "revisions") } {
        Ok(s) => s,
        Err(err) => return err,
    };
    let s = match unsafe { slice_arg(social_signals, len, "social_signals") } {
        Ok(x) => x,
        Err(err) => return err,
    };
    match metrics::revision_coefficient(e, d, s) {
        Ok(v) => {
            unsafe { out.write(v) };
            IhsimStatus::Ok
        }
        Err(err) => {
            set_error(err.to_string());
            IhsimStatus::InvalidArgument
        }
    }
}

/// Collective squared error, mean individual squared error and predictive
/// diversity of a set of estimates.
///
/// # Safety
/// `estimates` must hold `len` values; the three out pointers must be
/// valid.
#[no_mangle]
pub unsafe extern "C" fn ihsim_dpt_decompose(
    estimates: *const f64,
    len: usize,
    true_value: f64,
    collective_sqe: *mut f64,
    individual_sqe: *mut f64,
    predictive_diversity: *mut f64,
) -> IhsimStatus {
    let collective_sqe = out_or!(collective_sqe, "collective_sqe");
    let individual_sqe = out_or!(individual_sqe, "individual_sqe");
    let predictive_diversity = out_or!(predictive_diversity, "predictive_diversity");
    let estimates = match unsafe { slice_arg(estimates, len, "estimates") } {
        Ok(s) => s,
        Err(e) => return e,
    };
    if estimates.is_empty() {
        set_error("estimates must be non-empty");
        return IhsimStatus::InvalidArgument;
    }
    let d = metrics::dpt_decompose(estimates, true_value);
    unsafe {
        collective_sqe.write(d.collective_sqe);
        individual_sqe.write(d.individual_sqe);
        predictive_diversity.write(d.predictive_diversity);
    }
    IhsimStatus::Ok
}

/// Product-moment correlation.
///
/// # Safety
/// `x` and `y` must each hold `len` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ihsim_pearson(
    x: *const f64,
    y: *const f64,
    len: usize,
    out: *mut f64,
) -> IhsimStatus {
    let out = out_or!(out, "out");
    let x = match unsafe { slice_arg(x, len, "x") } {
        Ok(s) => s,
        Err(e) => return e,
    };
    let y = match unsafe { slice_arg(y, len, "y") } {
        Ok(s) => s,
        Err(e) => return e,
    };
    match stats::pearson(x, y) {
        Ok(r) => {
            unsafe { out.write(r) };
            IhsimStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            IhsimStatus::InvalidArgument
        }
    }
}

/// Two-sided paired permutation test of mean(treatment - control).
///
/// # Safety
/// `control` and `treatment` must each hold `n_pairs` values; the out
/// pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ihsim_paired_permutation_test(
    control: *const f64,
    treatment: *const f64,
    n_pairs: usize,
    n_resamples: usize,
    seed: u64,
    mean_difference: *mut f64,
    p_value: *mut f64,
) -> IhsimStatus {
    let mean_difference = out_or!(mean_difference, "mean_difference");
    let p_value = out_or!(p_value, "p_value");
    let control = match unsafe { slice_arg(control, n_pairs, "control") } {
        Ok(s) => s.to_vec(),
        Err(e) => return e,
    };
    let treatment = match unsafe { slice_arg(treatment, n_pairs, "treatment") } {
        Ok(s) => s.to_vec(),
        Err(e) => return e,
    };
    let labels = (0..n_pairs).map(|i| i.to_string()).collect();
    let sample = match PairedSample::new(control, treatment, labels) {
        Ok(s) => s,
        Err(e) => {
            set_error(e.to_string());
            return IhsimStatus::InvalidArgument;
        }
    };
    match stats::paired_permutation_test(&sample, n_resamples, seed) {
        Ok(result) => {
            unsafe {
                mean_difference.write(result.mean_difference);
                p_value.write(result.p_value);
            }
            IhsimStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            IhsimStatus::InvalidArgument
        }
    }
}

/// Percentile bootstrap interval for the mean.
///
/// # Safety
/// `values` must hold `len` values; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ihsim_bootstrap_mean_ci(
    values: *const f64,
    len: usize,
    n_resamples: usize,
    level: f64,
    seed: u64,
    ci_low: *mut f64,
    ci_high: *mut f64,
) -> IhsimStatus {
    let ci_low = out_or!(ci_low, "ci_low");
    let ci_high = out_or!(ci_high, "ci_high");
    let values = match unsafe { slice_arg(values, len, "values") } {
        Ok(s) => s,
        Err(e) => return e,
    };
    match stats::bootstrap_ci(values, Statistic::Mean, n_resamples, level, seed) {
        Ok((lo, hi)) => {
            unsafe {
                ci_low.write(lo);
                ci_high.write(hi);
            }
            IhsimStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            IhsimStatus::InvalidArgument
        }
    }
}
