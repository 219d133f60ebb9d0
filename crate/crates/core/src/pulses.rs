// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

//! Rabi-frequency envelopes and unit handling.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// ħ in meV·ps (CODATA 2018).
pub const HBAR_MEV_PS: f64 = 0.6582119569;

/// Absolute tolerance of [`pulse_area`].
pub const AREA_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseKind {
    Gaussian,
    Constant,
}

/// A real, nonnegative Rabi envelope Ω(t) in rad/ps.
///
/// Gaussian: `amplitude · exp(−(width_param·(t − center))² / t0²)`.
/// Constant: `amplitude` for every t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseShape {
    pub kind: PulseKind,
    /// rad/ps
    pub amplitude: f64,
    /// Dimensionless factor multiplying `t` in the exponent.
    pub width_param: f64,
    /// ps
    pub center: f64,
    /// ps
    pub t0: f64,
}

impl PulseShape {
    pub fn gaussian(amplitude: f64, width_param: f64, center: f64, t0: f64) -> Self {
        Self {
            kind: PulseKind::Gaussian,
            amplitude,
            width_param,
            center,
            t0,
        }
    }

    pub fn constant(amplitude: f64) -> Self {
        Self {
            kind: PulseKind::Constant,
            amplitude,
            width_param: 1.0,
            center: 0.0,
            t0: 1.0,
        }
    }

    pub fn off() -> Self {
        Self::constant(0.0)
    }

    /// The slow dot-1 drive: peak `5√π/(2 t0)`, exponent factor 0.05.
    pub fn default_dot1(t0: f64) -> Self {
        Self::gaussian(5.0 * PI.sqrt() / (2.0 * t0), 0.05, 0.0, t0)
    }

    /// The fast dot-2 drive: peak `2√π/t0`, exponent factor 2, area π.
    pub fn default_dot2(t0: f64) -> Self {
        Self::gaussian(2.0 * PI.sqrt() / t0, 2.0, 0.0, t0)
    }

    /// Checks the shape invariants, naming `field` in the error.
    pub fn validate(&self, field: &str) -> Result<()> {
        let bad = |what: &str, v: f64| Err(Error::config(format!("{field}.{what}"), format!("invalid value {v}")));
        if !(self.amplitude >= 0.0) || !self.amplitude.is_finite() {
            return bad("amplitude", self.amplitude);
        }
        if !(self.t0 > 0.0) || !self.t0.is_finite() {
            return bad("t0", self.t0);
        }
        if !self.center.is_finite() {
            return bad("center", self.center);
        }
        if self.kind == PulseKind::Gaussian && (!(self.width_param > 0.0) || !self.width_param.is_finite()) {
            return bad("width_param", self.width_param);
        }
        Ok(())
    }

    pub fn value(&self, t: f64) -> f64 {
        pulse_value(self, t)
    }

    /// ∫ Ω dt over the real line; infinite for a nonzero constant pulse.
    pub fn total_area(&self) -> f64 {
        match self.kind {
            PulseKind::Gaussian => self.amplitude * self.t0 * PI.sqrt() / self.width_param,
            PulseKind::Constant if self.amplitude == 0.0 => 0.0,
            PulseKind::Constant => f64::INFINITY,
        }
    }
}

/// How energies quoted in meV become angular frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitMode {
    /// Divide by ħ = 0.6582119569 meV·ps.
    #[default]
    Physical,
    /// Read the meV number directly as rad/ps (ħ = 1 bookkeeping).
    HbarUnity,
}

impl UnitMode {
    pub const BOTH: [UnitMode; 2] = [UnitMode::Physical, UnitMode::HbarUnity];

    pub fn as_str(self) -> &'static str {
        match self {
            UnitMode::Physical => "physical",
            UnitMode::HbarUnity => "hbar_unity",
        }
    }
}

impl std::str::FromStr for UnitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "physical" => Ok(UnitMode::Physical),
            "hbar_unity" => Ok(UnitMode::HbarUnity),
            _ => Err(Error::config(
                "unit_mode",
                format!("expected `physical` or `hbar_unity`, got `{s}`"),
            )),
        }
    }
}

pub fn pulse_value(p: &PulseShape, t: f64) -> f64 {
    match p.kind {
        PulseKind::Constant => p.amplitude,
        PulseKind::Gaussian => {
            let x = p.width_param * (t - p.center) / p.t0;
            p.amplitude * (-x * x).exp()
        }
    }
}

/// ∫ Ω(t) dt over `[t_start, t_end]` by adaptive Simpson quadrature.
pub fn pulse_area(p: &PulseShape, t_start: f64, t_end: f64) -> f64 {
    if t_start == t_end {
        return 0.0;
    }
    if t_start > t_end {
        return -pulse_area(p, t_end, t_start);
    }
    if p.kind == PulseKind::Constant {
        return p.amplitude * (t_end - t_start);
    }
    // Seed with a fixed panel count so a narrow pulse inside a wide window
    // cannot slip between the first Simpson nodes.
    let panels = 64;
    let h = (t_end - t_start) / panels as f64;
    let f = |t: f64| pulse_value(p, t);
    (0..panels)
        .map(|k| {
            let a = t_start + k as f64 * h;
            let b = if k + 1 == panels { t_end } else { a + h };
            let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
            let whole = simpson(a, b, fa, fm, fb);
            adaptive_simpson(&f, a, b, fa, fm, fb, whole, AREA_TOLERANCE / panels as f64, 48)
        })
        .sum()
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

pub fn energy_to_angular_frequency(value_mev: f64, mode: UnitMode) -> f64 {
    match mode {
        UnitMode::Physical => value_mev / HBAR_MEV_PS,
        UnitMode::HbarUnity => value_mev,
    }
}
