// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

//! C ABI for the gate simulator.
//!
//! Configurations and reports are opaque handles created and released by
//! this library. Every fallible call returns a [`QdmStatus`]; on failure the
//! message is available from [`qdm_last_error_message`] on the same thread.
//! Strings returned through out-pointers are released with
//! [`qdm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qdm_cphase::cli::parse_config;
use qdm_cphase::dynamics::{evolve_observed, SimConfig};
use qdm_cphase::metrics::{gate_report, GateReport};
use qdm_cphase::pulses::{energy_to_angular_frequency, UnitMode};
use qdm_cphase::statespace::DIM;
use qdm_cphase::Error;

/// Number of states in the simulated basis.
pub const QDM_DIM: usize = 10;
const _: () = assert!(QDM_DIM == DIM);
/// Entries in a phase table.
pub const QDM_PHASE_ENTRIES: usize = 4;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QdmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Bad configuration value or JSON.
    ConfigError = 3,
    /// The integrator could not complete the run.
    IntegrationError = 4,
    DomainError = 5,
    IndexOutOfRange = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QdmUnitMode {
    /// meV converted with ħ = 0.6582119569 meV·ps.
    Physical = 0,
    /// meV values used directly as rad/ps.
    HbarUnity = 1,
}

impl From<QdmUnitMode> for UnitMode {
    fn from(m: QdmUnitMode) -> Self {
        match m {
            QdmUnitMode::Physical => UnitMode::Physical,
            QdmUnitMode::HbarUnity => UnitMode::HbarUnity,
        }
    }
}

/// Opaque simulation configuration.
pub struct QdmConfig(SimConfig);

/// Opaque gate report.
pub struct QdmReport(GateReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> QdmStatus {
    match e {
        Error::Config { .. } | Error::Json(_) | Error::Io { .. } => QdmStatus::ConfigError,
        Error::Integration { .. } => QdmStatus::IntegrationError,
        Error::Domain(_) => QdmStatus::DomainError,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (QdmStatus, String)>) -> QdmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QdmStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QdmStatus::Panic
        }
    }
}

fn fail(e: Error) -> (QdmStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (QdmStatus, String) {
    (QdmStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (QdmStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn deref_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (QdmStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), (QdmStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn new_handle<T>(out: *mut *mut T, value: T) -> Result<(), (QdmStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qdm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread ("" if none). Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qdm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn qdm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Default configuration: τ = 2 meV, γ₁ = γ₂ = 1 ns⁻¹, window [−60, 60] ps.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qdm_config_default(out: *mut *mut QdmConfig) -> QdmStatus {
    guard(|| new_handle(out, QdmConfig(SimConfig::default())))
}

/// Parses a JSON configuration (file schema or run manifest).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qdm_config_from_json(json: *const c_char, out: *mut *mut QdmConfig) -> QdmStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| (QdmStatus::InvalidUtf8, e.to_string()))?;
        let cfg = parse_config(text).map_err(fail)?;
        new_handle(out, QdmConfig(cfg))
    })
}

/// The resolved configuration as JSON (internal units).
///
/// # Safety
/// `config` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qdm_config_to_json(config: *const QdmConfig, out: *mut *mut c_char) -> QdmStatus {
    guard(|| {
        let cfg = deref(config, "config")?;
        let text = serde_json::to_string_pretty(&cfg.0).map_err(|e| fail(e.into()))?;
        write_out(out, into_c_string(text), "out")
    })
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qdm_config_set_unit_mode(config: *mut QdmConfig, mode: QdmUnitMode) -> QdmStatus {
    guard(|| {
        deref_mut(config, "config")?.0.unit_mode = mode.into();
        Ok(())
    })
}

/// Sets γ₂ in ns⁻¹. An invalid value leaves the configuration unchanged.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qdm_config_set_gamma2_per_ns(config: *mut QdmConfig, gamma2_per_ns: f64) -> QdmStatus {
    guard(|| {
        let cfg = deref_mut(config, "config")?;
        let updated = SimConfig {
            gamma2_per_ps: gamma2_per_ns * 1e-3,
            ..cfg.0.clone()
        };
        updated.validate().map_err(fail)?;
        cfg.0 = updated;
        Ok(())
    })
}

/// τ in rad/ps under the configuration's unit mode.
///
/// # Safety
/// `config` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qdm_config_tau_rad_per_ps(config: *const QdmConfig, out: *mut f64) -> QdmStatus {
    guard(|| write_out(out, deref(config, "config")?.0.tau(), "out"))
}

/// Drive envelopes Ω₁(t), Ω₂(t) in rad/ps.
///
/// # Safety
/// `config` must be a live handle; `omega1` and `omega2` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qdm_config_pulses(
    config: *const QdmConfig,
    t_ps: f64,
    omega1: *mut f64,
    omega2: *mut f64,
) -> QdmStatus {
    guard(|| {
        let cfg = &deref(config, "config")?.0;
        write_out(omega1, cfg.pulse1.value(t_ps), "omega1")?;
        write_out(omega2, cfg.pulse2.value(t_ps), "omega2")
    })
}

/// # Safety
/// `config` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn qdm_config_free(config: *mut QdmConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Evolves the configured initial state and writes the final populations
/// (basis order G_uu, G_ud, G_du, G_dd, T1_u, T1_d, I1_u, I1_d, T2, I2).
///
/// # Safety
/// `config` must be a live handle; `populations` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qdm_final_populations(
    config: *const QdmConfig,
    populations: *mut f64,
    len: usize,
) -> QdmStatus {
    guard(|| {
        let cfg = &deref(config, "config")?.0;
        if populations.is_null() {
            return Err(null("populations"));
        }
        if len < DIM {
            return Err((QdmStatus::BufferTooSmall, format!("need {DIM} slots, got {len}")));
        }
        let summary = evolve_observed(cfg, |_| {}).map_err(fail)?;
        let out = std::slice::from_raw_parts_mut(populations, DIM);
        out.copy_from_slice(&summary.final_state.populations());
        Ok(())
    })
}

/// Full gate characterization (main run plus phase-table runs).
///
/// # Safety
/// `config` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qdm_gate_report(config: *const QdmConfig, out: *mut *mut QdmReport) -> QdmStatus {
    guard(|| {
        let cfg = &deref(config, "config")?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        let report = gate_report(cfg).map_err(fail)?;
        new_handle(out, QdmReport(report))
    })
}

/// # Safety
/// `report` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qdm_report_fidelity(report: *const QdmReport, out: *mut f64) -> QdmStatus {
    guard(|| write_out(out, deref(report, "report")?.0.fidelity, "out"))
}

/// # Safety
/// `report` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qdm_report_gate_time_ps(report: *const QdmReport, out: *mut f64) -> QdmStatus {
    guard(|| write_out(out, deref(report, "report")?.0.gate_time_ps, "out"))
}

/// Phase-table entry `index` (0 = G_uu … 3 = G_dd): population and the
/// complex overlap.
///
/// # Safety
/// `report` must be a live handle; the three out-pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qdm_report_phase_entry(
    report: *const QdmReport,
    index: usize,
    population: *mut f64,
    overlap_re: *mut f64,
    overlap_im: *mut f64,
) -> QdmStatus {
    guard(|| {
        let r = &deref(report, "report")?.0;
        let e = r.phase_table.entries.get(index).ok_or_else(|| {
            (
                QdmStatus::IndexOutOfRange,
                format!("phase entry {index} out of range 0..{QDM_PHASE_ENTRIES}"),
            )
        })?;
        write_out(population, e.population, "population")?;
        write_out(overlap_re, e.overlap.re, "overlap_re")?;
        write_out(overlap_im, e.overlap.im, "overlap_im")
    })
}

/// # Safety
/// `report` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qdm_report_to_json(report: *const QdmReport, out: *mut *mut c_char) -> QdmStatus {
    guard(|| {
        let r = deref(report, "report")?;
        let text = serde_json::to_string_pretty(&r.0).map_err(|e| fail(e.into()))?;
        write_out(out, into_c_string(text), "out")
    })
}

/// # Safety
/// `report` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn qdm_report_free(report: *mut QdmReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Converts an energy in meV to rad/ps.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qdm_energy_to_angular_frequency(mev: f64, mode: QdmUnitMode, out: *mut f64) -> QdmStatus {
    guard(|| write_out(out, energy_to_angular_frequency(mev, mode.into()), "out"))
}
