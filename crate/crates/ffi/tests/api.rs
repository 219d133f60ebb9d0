// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

use std::ffi::{CStr, CString};
use std::ptr;

use qdm_cphase_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(qdm_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn config_from(json: &str) -> Result<*mut QdmConfig, QdmStatus> {
    let text = CString::new(json).unwrap();
    let mut cfg = ptr::null_mut();
    match unsafe { qdm_config_from_json(text.as_ptr(), &mut cfg) } {
        QdmStatus::Ok => Ok(cfg),
        s => Err(s),
    }
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(qdm_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn tau_conversion_in_both_modes() {
    let mut tau = 0.0;
    unsafe {
        assert_eq!(
            qdm_energy_to_angular_frequency(2.0, QdmUnitMode::Physical, &mut tau),
            QdmStatus::Ok
        );
        assert!((tau - 3.038534895992255).abs() < 1e-12);
        assert_eq!(
            qdm_energy_to_angular_frequency(2.0, QdmUnitMode::HbarUnity, &mut tau),
            QdmStatus::Ok
        );
    }
    assert_eq!(tau, 2.0);

    let cfg = config_from(r#"{"unit_mode": "hbar_unity"}"#).unwrap();
    unsafe {
        assert_eq!(qdm_config_tau_rad_per_ps(cfg, &mut tau), QdmStatus::Ok);
        assert_eq!(tau, 2.0);
        assert_eq!(qdm_config_set_unit_mode(cfg, QdmUnitMode::Physical), QdmStatus::Ok);
        qdm_config_tau_rad_per_ps(cfg, &mut tau);
        assert!((tau - 3.038534895992255).abs() < 1e-12);
        qdm_config_free(cfg);
    }
}

#[test]
fn bad_json_reports_config_error_with_message() {
    assert_eq!(
        config_from(r#"{"gamma2_per_ns": -1}"#).unwrap_err(),
        QdmStatus::ConfigError
    );
    assert!(last_error().contains("gamma2"), "{}", last_error());
    assert_eq!(config_from("{not json").unwrap_err(), QdmStatus::ConfigError);
    let invalid = [0xffu8, 0xfe, 0];
    let mut cfg = ptr::null_mut();
    let s = unsafe { qdm_config_from_json(invalid.as_ptr().cast(), &mut cfg) };
    assert_eq!(s, QdmStatus::InvalidUtf8);
    assert!(cfg.is_null());
}

#[test]
fn null_pointers_are_rejected() {
    let mut x = 0.0;
    unsafe {
        assert_eq!(qdm_config_default(ptr::null_mut()), QdmStatus::NullPointer);
        assert_eq!(qdm_config_tau_rad_per_ps(ptr::null(), &mut x), QdmStatus::NullPointer);
        assert_eq!(qdm_report_fidelity(ptr::null(), &mut x), QdmStatus::NullPointer);
        assert_eq!(
            qdm_config_from_json(ptr::null(), ptr::null_mut()),
            QdmStatus::NullPointer
        );
        qdm_config_free(ptr::null_mut());
        qdm_report_free(ptr::null_mut());
        qdm_string_free(ptr::null_mut());
    }
    assert!(last_error().contains("null"));
}

#[test]
fn invalid_gamma2_leaves_config_unchanged() {
    let mut cfg = ptr::null_mut();
    unsafe {
        assert_eq!(qdm_config_default(&mut cfg), QdmStatus::Ok);
        assert_eq!(qdm_config_set_gamma2_per_ns(cfg, -2.0), QdmStatus::ConfigError);
        let mut json = ptr::null_mut();
        assert_eq!(qdm_config_to_json(cfg, &mut json), QdmStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        qdm_string_free(json);
        assert!(text.contains("\"gamma2_per_ps\": 0.001"), "{text}");
        qdm_config_free(cfg);
    }
}

#[test]
fn default_pulse_peaks() {
    let mut cfg = ptr::null_mut();
    let (mut o1, mut o2) = (0.0, 0.0);
    unsafe {
        qdm_config_default(&mut cfg);
        assert_eq!(qdm_config_pulses(cfg, 0.0, &mut o1, &mut o2), QdmStatus::Ok);
        qdm_config_free(cfg);
    }
    assert!((o1 - 4.4311346272637895).abs() < 1e-14);
    assert!((o2 - 3.5449077018110318).abs() < 1e-14);
}

#[test]
fn final_populations_of_an_idle_run() {
    let cfg = config_from(
        r#"{"tau_mev": 0, "gamma1_per_ns": 0, "gamma2_per_ns": 0, "t_end_ps": -50,
            "pulse1": {"amplitude": 0}, "pulse2": {"amplitude": 0}}"#,
    )
    .unwrap();
    let mut pops = [0.0; QDM_DIM];
    unsafe {
        assert_eq!(
            qdm_final_populations(cfg, pops.as_mut_ptr(), 3),
            QdmStatus::BufferTooSmall
        );
        assert_eq!(qdm_final_populations(cfg, pops.as_mut_ptr(), pops.len()), QdmStatus::Ok);
        qdm_config_free(cfg);
    }
    assert_eq!(pops, [0.25, 0.25, 0.25, 0.25, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
}

#[test]
fn integration_failure_maps_to_status() {
    let cfg = config_from(r#"{"integrator": "rk45_adaptive", "adaptive_tol": 1e-300, "t_end_ps": -55}"#).unwrap();
    let mut pops = [0.0; QDM_DIM];
    let s = unsafe { qdm_final_populations(cfg, pops.as_mut_ptr(), pops.len()) };
    unsafe { qdm_config_free(cfg) };
    assert_eq!(s, QdmStatus::IntegrationError);
    assert!(!last_error().is_empty());
}

#[test]
fn gate_report_matches_the_library() {
    let json = r#"{"t_start_ps": -30, "t_end_ps": 30}"#;
    let cfg = config_from(json).unwrap();
    let mut report = ptr::null_mut();
    unsafe {
        assert_eq!(qdm_gate_report(cfg, &mut report), QdmStatus::Ok);
        qdm_config_free(cfg);
    }
    let direct = qdm_cphase::metrics::gate_report(&qdm_cphase::cli::parse_config(json).unwrap()).unwrap();

    let (mut f, mut tg) = (0.0, 0.0);
    unsafe {
        assert_eq!(qdm_report_fidelity(report, &mut f), QdmStatus::Ok);
        assert_eq!(qdm_report_gate_time_ps(report, &mut tg), QdmStatus::Ok);
    }
    assert_eq!(f, direct.fidelity);
    assert_eq!(tg, direct.gate_time_ps);

    for k in 0..QDM_PHASE_ENTRIES {
        let (mut p, mut re, mut im) = (0.0, 0.0, 0.0);
        let s = unsafe { qdm_report_phase_entry(report, k, &mut p, &mut re, &mut im) };
        assert_eq!(s, QdmStatus::Ok);
        let e = &direct.phase_table.entries[k];
        assert_eq!((p, re, im), (e.population, e.overlap.re, e.overlap.im));
    }
    let (mut p, mut re, mut im) = (0.0, 0.0, 0.0);
    let s = unsafe { qdm_report_phase_entry(report, QDM_PHASE_ENTRIES, &mut p, &mut re, &mut im) };
    assert_eq!(s, QdmStatus::IndexOutOfRange);

    let mut text = ptr::null_mut();
    unsafe {
        assert_eq!(qdm_report_to_json(report, &mut text), QdmStatus::Ok);
        let parsed: qdm_cphase::metrics::GateReport =
            serde_json::from_str(CStr::from_ptr(text).to_str().unwrap()).unwrap();
        assert_eq!(parsed, direct);
        qdm_string_free(text);
        qdm_report_free(report);
    }
}
