//! Exercises the C ABI exactly as a foreign caller would: through the
//! exported symbols, raw pointers and status codes.

use std::ffi::{CStr, CString};
use std::ptr;

use ihsim_ffi::*;

fn last_error() -> String {
    let ptr = ihsim_last_error();
    assert!(!ptr.is_null(), "expected an error message");
    let msg = unsafe { CStr::from_ptr(ptr) }.to_string_lossy().into_owned();
    unsafe { ihsim_string_free(ptr) };
    msg
}

#[test]
fn version_is_a_static_string() {
    let v = unsafe { CStr::from_ptr(ihsim_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn config_lifecycle_and_validation() {
    let cfg = ihsim_config_new();
    assert!(!cfg.is_null());
    unsafe {
        assert_eq!(ihsim_config_set_seed(cfg, 7), IhsimStatus::Ok);
        assert_eq!(ihsim_config_set_replications(cfg, 3), IhsimStatus::Ok);
        assert_eq!(ihsim_config_set_replications(cfg, 0), IhsimStatus::InvalidArgument);
        assert!(last_error().contains("replications"));
        assert_eq!(ihsim_config_set_rounds(cfg, 1), IhsimStatus::InvalidArgument);
        assert_eq!(ihsim_config_set_treatment_fraction(cfg, 1.5), IhsimStatus::InvalidArgument);
        assert_eq!(ihsim_config_set_treatment_fraction(cfg, 0.5), IhsimStatus::Ok);
        assert_eq!(
            ihsim_config_set_network(cfg, IhsimNetworkKind::WattsStrogatz, 4.0, 0.25),
            IhsimStatus::Ok
        );
        assert_eq!(
            ihsim_config_set_network(cfg, IhsimNetworkKind::Egalitarian, 2.5, 0.0),
            IhsimStatus::InvalidArgument
        );
        // Sign constraints surface through the status code.
        assert_eq!(
            ihsim_config_set_coefficients(cfg, true, 0.0, -1.0, 0.0, 0.0),
            IhsimStatus::InvalidArgument
        );
        assert_eq!(
            ihsim_config_set_coefficients(cfg, true, 0.0, 0.4, 0.0, -0.1),
            IhsimStatus::Ok
        );
        ihsim_config_free(cfg);
    }

    // Null handles are reported, not dereferenced.
    unsafe {
        assert_eq!(ihsim_config_set_seed(ptr::null_mut(), 1), IhsimStatus::NullPointer);
    }
}

#[test]
fn run_to_dir_writes_the_output_files() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = ihsim_config_new();
    unsafe {
        assert_eq!(ihsim_config_set_synthetic(cfg, 1, 20, true), IhsimStatus::Ok);
        assert_eq!(ihsim_config_set_replications(cfg, 2), IhsimStatus::Ok);
        let dir = CString::new(tmp.path().join("out").to_str().unwrap()).unwrap();
        assert_eq!(ihsim_run_to_dir(cfg, dir.as_ptr()), IhsimStatus::Ok);
        ihsim_config_free(cfg);
    }
    for file in ["results.csv", "agents.csv", "manifest.txt"] {
        assert!(tmp.path().join("out").join(file).exists(), "{file} missing");
    }
}

#[test]
fn in_memory_run_matches_direct_library_call() {
    let cfg = ihsim_config_new();
    let rows = unsafe {
        assert_eq!(ihsim_config_set_synthetic(cfg, 2, 16, true), IhsimStatus::Ok);
        assert_eq!(ihsim_config_set_replications(cfg, 2), IhsimStatus::Ok);
        assert_eq!(ihsim_config_set_seed(cfg, 99), IhsimStatus::Ok);
        let results = ihsim_run(cfg);
        assert!(!results.is_null());
        let count = ihsim_results_row_count(results);
        assert_eq!(count, 2 * 2 * 2 * 3);
        let mut rows = Vec::new();
        for i in 0..count {
            let mut data = std::mem::MaybeUninit::<IhsimRowData>::uninit();
            assert_eq!(ihsim_results_row(results, i, data.as_mut_ptr()), IhsimStatus::Ok);
            rows.push(data.assume_init());
        }
        // Out-of-range access is rejected.
        let mut data = std::mem::MaybeUninit::<IhsimRowData>::uninit();
        assert_eq!(
            ihsim_results_row(results, count, data.as_mut_ptr()),
            IhsimStatus::InvalidArgument
        );
        let qid_ptr = ihsim_results_question_id(results, 0);
        assert!(!qid_ptr.is_null());
        assert_eq!(CStr::from_ptr(qid_ptr).to_str().unwrap(), "q0");
        ihsim_string_free(qid_ptr);
        ihsim_results_free(results);
        ihsim_config_free(cfg);
        rows
    };

    // Same experiment straight through the Rust API.
    let direct_cfg = ihsim::harness::ExperimentConfig {
        dataset: ihsim::harness::DatasetSource::Synthetic(ihsim::calib::SyntheticSpec {
            n_questions: 2,
            n_respondents: 16,
            ..Default::default()
        }),
        replications: 2,
        master_seed: 99,
        ..Default::default()
    };
    let direct = ihsim::harness::run_experiment(&direct_cfg).unwrap();
    assert_eq!(rows.len(), direct.rows.len());
    for (ffi_row, lib_row) in rows.iter().zip(&direct.rows) {
        assert_eq!(ffi_row.replication, lib_row.replication);
        assert_eq!(ffi_row.round, lib_row.round);
        assert_eq!(ffi_row.mean_error, lib_row.mean_error);
        assert_eq!(ffi_row.has_polarization, lib_row.polarization.is_some());
        if let Some(p) = lib_row.polarization {
            assert_eq!(ffi_row.polarization, p);
        }
    }
}

#[test]
fn network_handle_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let net = ihsim_network_generate(IhsimNetworkKind::Egalitarian, 4.0, 0.0, 10, 7);
    assert!(!net.is_null());
    unsafe {
        assert_eq!(ihsim_network_node_count(net), 10);
        assert_eq!(ihsim_network_edge_count(net), 20);
        for node in 0..10 {
            assert_eq!(ihsim_network_degree(net, node), 4);
        }
        assert_eq!(ihsim_network_degree(net, 10), -1);
        let path = CString::new(tmp.path().join("net.edges").to_str().unwrap()).unwrap();
        assert_eq!(ihsim_network_write_edge_list(net, path.as_ptr()), IhsimStatus::Ok);
        ihsim_network_free(net);
    }
    let text = std::fs::read_to_string(tmp.path().join("net.edges")).unwrap();
    assert_eq!(text.lines().count(), 20);

    // Invalid parameters produce null + message.
    let bad = ihsim_network_generate(IhsimNetworkKind::Egalitarian, 12.0, 0.0, 10, 7);
    assert!(bad.is_null());
    assert!(last_error().contains("degree"));
}

#[test]
fn numeric_kernels_match_library_values() {
    unsafe {
        let mut out = 0.0f64;
        assert_eq!(ihsim_degroot_step(10.0, 20.0, 0.5, &mut out), IhsimStatus::Ok);
        assert_eq!(out, 15.0);
        assert_eq!(ihsim_degroot_step(10.0, 20.0, 1.5, &mut out), IhsimStatus::InvalidArgument);

        assert_eq!(
            ihsim_modulate_self_weight(0.5, 0.8, 0.3, false, 0.0, 0.0, 0.3, 0.0, 0.0, &mut out),
            IhsimStatus::Ok
        );
        assert!((out - 0.65).abs() < 1e-12);

        assert_eq!(ihsim_individual_error(12.0, 10.0, 2.0, &mut out), IhsimStatus::Ok);
        assert_eq!(out, 1.0);
        assert_eq!(ihsim_individual_error(12.0, 10.0, 0.0, &mut out), IhsimStatus::InvalidArgument);

        let dem = [0.0f64];
        let rep = [1.0f64, 3.0];
        assert_eq!(
            ihsim_polarization(dem.as_ptr(), 1, rep.as_ptr(), 2, 0.0, 1.0, &mut out),
            IhsimStatus::Ok
        );
        assert_eq!(out, 2.0);

        let e = [1.0f64, 2.0, 3.0, 4.0];
        let d = [2.0f64, 1.0, 4.0, 3.0];
        let s = [1.0f64, -1.0, -1.0, 1.0];
        assert_eq!(
            ihsim_revision_coefficient(e.as_ptr(), d.as_ptr(), s.as_ptr(), 4, &mut out),
            IhsimStatus::Ok
        );
        let expected = ihsim::metrics::revision_coefficient(&e, &d, &s).unwrap();
        assert_eq!(out, expected);

        let estimates = [1.0f64, 2.0, 3.0];
        let (mut c, mut i, mut p) = (0.0f64, 0.0f64, 0.0f64);
        assert_eq!(
            ihsim_dpt_decompose(estimates.as_ptr(), 3, 2.0, &mut c, &mut i, &mut p),
            IhsimStatus::Ok
        );
        assert!((c - 0.0).abs() < 1e-12);
        assert!((i - 2.0 / 3.0).abs() < 1e-12);
        assert!((p - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(
            ihsim_dpt_decompose(ptr::null(), 3, 2.0, &mut c, &mut i, &mut p),
            IhsimStatus::NullPointer
        );

        let x = [1.0f64, 2.0, 3.0];
        let y = [1.0f64, 3.0, 2.0];
        assert_eq!(ihsim_pearson(x.as_ptr(), y.as_ptr(), 3, &mut out), IhsimStatus::Ok);
        assert!((out - 0.5).abs() < 1e-12);

        let control = [1.0f64, 2.0, 3.0, 4.0];
        let treatment = [1.0f64, 2.0, 3.0, 4.0];
        let (mut diff, mut pval) = (0.0f64, 0.0f64);
        assert_eq!(
            ihsim_paired_permutation_test(
                control.as_ptr(),
                treatment.as_ptr(),
                4,
                1000,
                5,
                &mut diff,
                &mut pval
            ),
            IhsimStatus::Ok
        );
        assert_eq!(diff, 0.0);
        assert_eq!(pval, 1.0);

        let values = [3.0f64; 8];
        let (mut lo, mut hi) = (0.0f64, 0.0f64);
        assert_eq!(
            ihsim_bootstrap_mean_ci(values.as_ptr(), 8, 1000, 0.95, 1, &mut lo, &mut hi),
            IhsimStatus::Ok
        );
        assert_eq!((lo, hi), (3.0, 3.0));
    }
}

#[test]
fn dataset_generation_through_the_abi() {
    let tmp = tempfile::tempdir().unwrap();
    let path = CString::new(tmp.path().join("ds.csv").to_str().unwrap()).unwrap();
    unsafe {
        assert_eq!(
            ihsim_generate_dataset_csv(2, 10, 0.6, true, true, 3, path.as_ptr()),
            IhsimStatus::Ok
        );
        // Invalid spec is rejected with a message.
        assert_eq!(
            ihsim_generate_dataset_csv(2, 1, 0.6, true, true, 3, path.as_ptr()),
            IhsimStatus::InvalidArgument
        );
        assert!(last_error().contains("2 respondents"));
    }
    let text = std::fs::read_to_string(tmp.path().join("ds.csv")).unwrap();
    assert_eq!(text.lines().count(), 21);
}

#[test]
fn generated_header_exists_and_names_the_surface() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/ihsim.h");
    let text = std::fs::read_to_string(&header).expect("cbindgen header present");
    for symbol in [
        "IhsimStatus",
        "IhsimConfig",
        "IhsimNetwork",
        "IhsimResults",
        "IhsimRowData",
        "ihsim_run_to_dir",
        "ihsim_results_row",
        "ihsim_network_generate",
        "ihsim_revision_coefficient",
        "ihsim_dpt_decompose",
        "ihsim_last_error",
    ] {
        assert!(text.contains(symbol), "header missing {symbol}");
    }
}
