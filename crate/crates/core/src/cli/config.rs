// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

//! JSON configuration files and run manifests.
//!
//! Configuration files quote rates in ns⁻¹ and τ in meV; every field is
//! optional. A run manifest is accepted wherever a configuration is, so any
//! output can be regenerated from the manifest written beside it.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{DecayAttachment, InitialState, IntegratorKind, SimConfig};
use crate::pulses::{PulseKind, PulseShape, UnitMode};
use crate::sweep::{SweepOutput, SweepParameter, SweepSpec, SweepValue};
use crate::{Error, Result};

pub const TOOL_VERSION: &str = concat!("qdm-cphase ", env!("CARGO_PKG_VERSION"));

/// Optional overrides for one pulse. Unset fields keep the default drive
/// for that dot, rebuilt for the file's `t0_ps`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseFile {
    pub kind: Option<PulseKind>,
    pub amplitude: Option<f64>,
    pub width_param: Option<f64>,
    pub center: Option<f64>,
    pub t0: Option<f64>,
}

impl PulseFile {
    fn resolve(&self, default: PulseShape) -> PulseShape {
        PulseShape {
            kind: self.kind.unwrap_or(default.kind),
            amplitude: self.amplitude.unwrap_or(default.amplitude),
            width_param: self.width_param.unwrap_or(default.width_param),
            center: self.center.unwrap_or(default.center),
            t0: self.t0.unwrap_or(default.t0),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub tau_mev: Option<f64>,
    pub unit_mode: Option<UnitMode>,
    pub gamma1_per_ns: Option<f64>,
    pub gamma2_per_ns: Option<f64>,
    pub gamma_ind_per_ns: Option<f64>,
    pub gamma2_attachment: Option<DecayAttachment>,
    pub t0_ps: Option<f64>,
    pub pulse1: Option<PulseFile>,
    pub pulse2: Option<PulseFile>,
    pub t_start_ps: Option<f64>,
    pub t_end_ps: Option<f64>,
    pub dt_ps: Option<f64>,
    pub integrator: Option<IntegratorKind>,
    pub adaptive_tol: Option<f64>,
    pub sample_stride: Option<usize>,
    pub initial_state: Option<InitialState>,
    pub staircase_ps: Option<f64>,
}

impl ConfigFile {
    /// Fills defaults, converts units and validates.
    pub fn resolve(&self) -> Result<SimConfig> {
        let d = SimConfig::default();
        let t0 = self.t0_ps.unwrap_or(1.0);
        if !(t0 > 0.0) || !t0.is_finite() {
            return Err(Error::config("t0_ps", format!("must be > 0, got {t0}")));
        }
        let per_ns = |v: Option<f64>, fallback: f64| v.map_or(fallback, |x| x * 1e-3);
        let cfg = SimConfig {
            tau_mev: self.tau_mev.unwrap_or(d.tau_mev),
            unit_mode: self.unit_mode.unwrap_or(d.unit_mode),
            gamma1_per_ps: per_ns(self.gamma1_per_ns, d.gamma1_per_ps),
            gamma2_per_ps: per_ns(self.gamma2_per_ns, d.gamma2_per_ps),
            gamma_ind_per_ps: per_ns(self.gamma_ind_per_ns, d.gamma_ind_per_ps),
            gamma2_attachment: self.gamma2_attachment.unwrap_or(d.gamma2_attachment),
            pulse1: self
                .pulse1
                .clone()
                .unwrap_or_default()
                .resolve(PulseShape::default_dot1(t0)),
            pulse2: self
                .pulse2
                .clone()
                .unwrap_or_default()
                .resolve(PulseShape::default_dot2(t0)),
            t_start_ps: self.t_start_ps.unwrap_or(d.t_start_ps),
            t_end_ps: self.t_end_ps.unwrap_or(d.t_end_ps),
            dt_ps: self.dt_ps.unwrap_or(d.dt_ps),
            integrator: self.integrator.unwrap_or(d.integrator),
            adaptive_tol: self.adaptive_tol.unwrap_or(d.adaptive_tol),
            sample_stride: self.sample_stride.unwrap_or(d.sample_stride),
            initial_state: self.initial_state.clone().unwrap_or(d.initial_state),
            staircase_ps: self.staircase_ps,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Written beside every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Fully resolved configuration, internal units (rates in ps⁻¹).
    pub config_echo: SimConfig,
    pub tau_rad_per_ps: f64,
    pub tool_version: String,
    pub command: String,
    pub output_paths: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepEcho>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEcho {
    pub parameter: SweepParameter,
    pub values: Vec<SweepValue>,
    pub outputs: Vec<SweepOutput>,
}

impl RunManifest {
    pub fn new(config: &SimConfig, command: &str, outputs: &[PathBuf]) -> Self {
        Self {
            config_echo: config.clone(),
            tau_rad_per_ps: config.tau(),
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            output_paths: outputs.iter().map(|p| p.display().to_string()).collect(),
            sweep: None,
        }
    }

    /// `<output>.manifest.json`
    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }

    pub fn write_beside(&self, output: &Path) -> Result<PathBuf> {
        let path = Self::path_for(output);
        write_json(&path, self)?;
        Ok(path)
    }
}

/// Sweep file: a base configuration in file schema plus the scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    #[serde(default)]
    pub base: ConfigFile,
    pub parameter: String,
    pub values: Vec<SweepValue>,
    #[serde(default)]
    pub outputs: Option<Vec<SweepOutput>>,
}

impl SweepFile {
    pub fn resolve(&self) -> Result<SweepSpec> {
        let spec = SweepSpec {
            base: self.base.resolve()?,
            parameter: self.parameter.parse()?,
            values: self.values.clone(),
            outputs: self.outputs.clone().unwrap_or_else(|| SweepOutput::DEFAULT.to_vec()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn json_error(what: &str, e: serde_json::Error) -> Error {
    Error::config(what, e.to_string())
}

fn is_manifest(value: &serde_json::Value) -> bool {
    value.get("config_echo").is_some()
}

/// Parses configuration text (file schema or run manifest).
pub fn parse_config(text: &str) -> Result<SimConfig> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| json_error("config", e))?;
    let cfg = if is_manifest(&value) {
        let m: RunManifest = serde_json::from_value(value).map_err(|e| json_error("config_echo", e))?;
        m.config_echo
    } else {
        let file: ConfigFile = serde_json::from_value(value).map_err(|e| json_error("config", e))?;
        return file.resolve();
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<SimConfig> {
    parse_config(&read(path)?)
}

/// Parses a sweep file, or the manifest of an earlier sweep.
pub fn parse_sweep_spec(text: &str) -> Result<SweepSpec> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| json_error("sweep", e))?;
    if is_manifest(&value) {
        let m: RunManifest = serde_json::from_value(value).map_err(|e| json_error("config_echo", e))?;
        let echo = m
            .sweep
            .ok_or_else(|| Error::config("sweep", "manifest does not describe a sweep"))?;
        let spec = SweepSpec {
            base: m.config_echo,
            parameter: echo.parameter,
            values: echo.values,
            outputs: echo.outputs,
        };
        spec.validate()?;
        return Ok(spec);
    }
    let file: SweepFile = serde_json::from_value(value).map_err(|e| json_error("sweep", e))?;
    file.resolve()
}

pub fn load_sweep_spec(path: &Path) -> Result<SweepSpec> {
    parse_sweep_spec(&read(path)?)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
