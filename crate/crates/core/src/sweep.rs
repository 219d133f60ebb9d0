// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

//! One-parameter scans. Points run independently (and in parallel); the
//! result list always follows the input order.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::SimConfig;
use crate::metrics::{gate_report, GateReport};
use crate::pulses::UnitMode;
use crate::{Error, Result};

/// A scannable configuration field. Rates are given in ns⁻¹ and τ in meV,
/// as in configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParameter {
    Gamma1,
    Gamma2,
    GammaInd,
    Tau,
    UnitMode,
    Pulse1Amplitude,
    Pulse1Width,
    Pulse1Center,
    Pulse2Amplitude,
    Pulse2Width,
    Pulse2Center,
    Dt,
}

impl SweepParameter {
    const NAMES: [(SweepParameter, &'static str, &'static [&'static str]); 12] = [
        (SweepParameter::Gamma1, "gamma1_per_ns", &["gamma1"]),
        (SweepParameter::Gamma2, "gamma2_per_ns", &["gamma2"]),
        (SweepParameter::GammaInd, "gamma_ind_per_ns", &["gamma_ind"]),
        (SweepParameter::Tau, "tau_mev", &["tau"]),
        (SweepParameter::UnitMode, "unit_mode", &[]),
        (SweepParameter::Pulse1Amplitude, "pulse1.amplitude", &[]),
        (SweepParameter::Pulse1Width, "pulse1.width_param", &[]),
        (SweepParameter::Pulse1Center, "pulse1.center", &[]),
        (SweepParameter::Pulse2Amplitude, "pulse2.amplitude", &[]),
        (SweepParameter::Pulse2Width, "pulse2.width_param", &[]),
        (SweepParameter::Pulse2Center, "pulse2.center", &[]),
        (SweepParameter::Dt, "dt_ps", &["dt"]),
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES
            .iter()
            .find(|(p, _, _)| *p == self)
            .map(|(_, n, _)| *n)
            .unwrap()
    }

    /// Sets this field of `base` to `value`.
    pub fn apply(self, base: &SimConfig, value: &SweepValue) -> Result<SimConfig> {
        let mut cfg = base.clone();
        if self == SweepParameter::UnitMode {
            let mode = match value {
                SweepValue::Label(s) => s.parse::<UnitMode>()?,
                SweepValue::Number(x) => {
                    return Err(Error::config("values", format!("unit_mode takes labels, got {x}")))
                }
            };
            cfg.unit_mode = mode;
            return Ok(cfg);
        }
        let x = match value {
            SweepValue::Number(x) => *x,
            SweepValue::Label(s) => {
                return Err(Error::config(
                    "values",
                    format!("{} takes numbers, got `{s}`", self.name()),
                ))
            }
        };
        match self {
            SweepParameter::Gamma1 => cfg.gamma1_per_ps = x * 1e-3,
            SweepParameter::Gamma2 => cfg.gamma2_per_ps = x * 1e-3,
            SweepParameter::GammaInd => cfg.gamma_ind_per_ps = x * 1e-3,
            SweepParameter::Tau => cfg.tau_mev = x,
            SweepParameter::Pulse1Amplitude => cfg.pulse1.amplitude = x,
            SweepParameter::Pulse1Width => cfg.pulse1.width_param = x,
            SweepParameter::Pulse1Center => cfg.pulse1.center = x,
            SweepParameter::Pulse2Amplitude => cfg.pulse2.amplitude = x,
            SweepParameter::Pulse2Width => cfg.pulse2.width_param = x,
            SweepParameter::Pulse2Center => cfg.pulse2.center = x,
            SweepParameter::Dt => cfg.dt_ps = x,
            SweepParameter::UnitMode => unreachable!(),
        }
        Ok(cfg)
    }
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::NAMES
            .iter()
            .find(|(_, name, aliases)| *name == s || aliases.contains(&s))
            .map(|(p, _, _)| *p)
            .ok_or_else(|| Error::config("parameter", format!("`{s}` is not a sweepable numeric field")))
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for SweepParameter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for SweepParameter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SweepValue {
    Number(f64),
    Label(String),
}

impl fmt::Display for SweepValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepValue::Number(x) => write!(f, "{x}"),
            SweepValue::Label(s) => f.write_str(s),
        }
    }
}

/// Per-point quantities written to sweep tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepOutput {
    Fidelity,
    TraceDevMax,
    MinEig,
    GateTimePs,
    TauRadPerPs,
}

impl SweepOutput {
    pub const DEFAULT: [SweepOutput; 3] = [SweepOutput::Fidelity, SweepOutput::TraceDevMax, SweepOutput::MinEig];

    pub fn column(self) -> &'static str {
        match self {
            SweepOutput::Fidelity => "fidelity",
            SweepOutput::TraceDevMax => "trace_dev_max",
            SweepOutput::MinEig => "min_eig",
            SweepOutput::GateTimePs => "gate_time_ps",
            SweepOutput::TauRadPerPs => "tau_rad_per_ps",
        }
    }

    pub fn extract(self, r: &GateReport) -> f64 {
        match self {
            SweepOutput::Fidelity => r.fidelity,
            SweepOutput::TraceDevMax => r.trace_dev_max,
            SweepOutput::MinEig => r.min_eig,
            SweepOutput::GateTimePs => r.gate_time_ps,
            SweepOutput::TauRadPerPs => r.tau_rad_per_ps,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SimConfig,
    pub parameter: SweepParameter,
    pub values: Vec<SweepValue>,
    pub outputs: Vec<SweepOutput>,
}

impl SweepSpec {
    pub fn new(base: SimConfig, parameter: SweepParameter, values: Vec<SweepValue>) -> Self {
        Self {
            base,
            parameter,
            values,
            outputs: SweepOutput::DEFAULT.to_vec(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::config("values", "sweep needs at least one value"));
        }
        self.base.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: SweepValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<GateReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SweepPoint {
    pub fn succeeded(&self) -> bool {
        self.report.is_some()
    }
}

/// One gate characterization per value. A failing point is recorded with
/// its error message and the sweep carries on.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepPoint>> {
    spec.validate()?;
    Ok(spec
        .values
        .par_iter()
        .map(|value| {
            let outcome = spec
                .parameter
                .apply(&spec.base, value)
                .and_then(|cfg| gate_report(&cfg));
            match outcome {
                Ok(report) => SweepPoint {
                    value: value.clone(),
                    report: Some(report),
                    error: None,
                },
                Err(e) => SweepPoint {
                    value: value.clone(),
                    report: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect())
}
