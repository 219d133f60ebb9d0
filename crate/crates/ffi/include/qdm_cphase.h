/* Copyright 2026 The qdm-cphase Authors
 * SPDX-License-Identifier: Apache-2.0 */

#ifndef QDM_CPHASE_H
#define QDM_CPHASE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Number of states in the simulated basis.
#define QDM_DIM 10

// Entries in a phase table.
#define QDM_PHASE_ENTRIES 4

typedef enum QdmStatus {
  QDM_STATUS_OK = 0,
  QDM_STATUS_NULL_POINTER = 1,
  QDM_STATUS_INVALID_UTF8 = 2,
  // Bad configuration value or JSON.
  QDM_STATUS_CONFIG_ERROR = 3,
  // The integrator could not complete the run.
  QDM_STATUS_INTEGRATION_ERROR = 4,
  QDM_STATUS_DOMAIN_ERROR = 5,
  QDM_STATUS_INDEX_OUT_OF_RANGE = 6,
  QDM_STATUS_BUFFER_TOO_SMALL = 7,
  QDM_STATUS_PANIC = 8,
} QdmStatus;

typedef enum QdmUnitMode {
  // meV converted with ħ = 0.6582119569 meV·ps.
  QDM_UNIT_MODE_PHYSICAL = 0,
  // meV values used directly as rad/ps.
  QDM_UNIT_MODE_HBAR_UNITY = 1,
} QdmUnitMode;

// Opaque simulation configuration.
typedef struct QdmConfig QdmConfig;

// Opaque gate report.
typedef struct QdmReport QdmReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, a static NUL-terminated string.
const char *qdm_version(void);

// Message for the last failed call on this thread ("" if none). Valid
// until the next failing call on the same thread.
const char *qdm_last_error_message(void);

// # Safety
// `s` must be null or a string returned by this library, freed once.
void qdm_string_free(char *s);

// Default configuration: τ = 2 meV, γ₁ = γ₂ = 1 ns⁻¹, window [−60, 60] ps.
//
// # Safety
// `out` must be valid for writes.
enum QdmStatus qdm_config_default(struct QdmConfig **out);

// Parses a JSON configuration (file schema or run manifest).
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be valid for writes.
enum QdmStatus qdm_config_from_json(const char *json, struct QdmConfig **out);

// The resolved configuration as JSON (internal units).
//
// # Safety
// `config` must be a live handle; `out` must be valid for writes.
enum QdmStatus qdm_config_to_json(const struct QdmConfig *config, char **out);

// # Safety
// `config` must be a live handle.
enum QdmStatus qdm_config_set_unit_mode(struct QdmConfig *config, enum QdmUnitMode mode);

// Sets γ₂ in ns⁻¹. An invalid value leaves the configuration unchanged.
//
// # Safety
// `config` must be a live handle.
enum QdmStatus qdm_config_set_gamma2_per_ns(struct QdmConfig *config, double gamma2_per_ns);

// τ in rad/ps under the configuration's unit mode.
//
// # Safety
// `config` must be a live handle; `out` must be valid for writes.
enum QdmStatus qdm_config_tau_rad_per_ps(const struct QdmConfig *config, double *out);

// Drive envelopes Ω₁(t), Ω₂(t) in rad/ps.
//
// # Safety
// `config` must be a live handle; `omega1` and `omega2` valid for writes.
enum QdmStatus qdm_config_pulses(const struct QdmConfig *config,
                                 double t_ps,
                                 double *omega1,
                                 double *omega2);

// # Safety
// `config` must be null or a handle from this library, freed once.
void qdm_config_free(struct QdmConfig *config);

// Evolves the configured initial state and writes the final populations
// (basis order G_uu, G_ud, G_du, G_dd, T1_u, T1_d, I1_u, I1_d, T2, I2).
//
// # Safety
// `config` must be a live handle; `populations` must hold `len` doubles.
enum QdmStatus qdm_final_populations(const struct QdmConfig *config,
                                     double *populations,
                                     size_t len);

// Full gate characterization (main run plus phase-table runs).
//
// # Safety
// `config` must be a live handle; `out` must be valid for writes.
enum QdmStatus qdm_gate_report(const struct QdmConfig *config, struct QdmReport **out);

// # Safety
// `report` must be a live handle; `out` must be valid for writes.
enum QdmStatus qdm_report_fidelity(const struct QdmReport *report, double *out);

// # Safety
// `report` must be a live handle; `out` must be valid for writes.
enum QdmStatus qdm_report_gate_time_ps(const struct QdmReport *report, double *out);

// Phase-table entry `index` (0 = G_uu … 3 = G_dd): population and the
// complex overlap.
//
// # Safety
// `report` must be a live handle; the three out-pointers valid for writes.
enum QdmStatus qdm_report_phase_entry(const struct QdmReport *report,
                                      size_t index,
                                      double *population,
                                      double *overlap_re,
                                      double *overlap_im);

// # Safety
// `report` must be a live handle; `out` must be valid for writes.
enum QdmStatus qdm_report_to_json(const struct QdmReport *report, char **out);

// # Safety
// `report` must be null or a handle from this library, freed once.
void qdm_report_free(struct QdmReport *report);

// Converts an energy in meV to rad/ps.
//
// # Safety
// `out` must be valid for writes.
enum QdmStatus qdm_energy_to_angular_frequency(double mev, enum QdmUnitMode mode, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QDM_CPHASE_H */
