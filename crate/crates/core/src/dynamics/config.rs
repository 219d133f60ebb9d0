// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::pulses::{energy_to_angular_frequency, PulseShape, UnitMode};
use crate::statespace::{BasisState, DensityMatrix, StateVector, DIM};
use crate::{Error, Result};

/// Where the γ₂ decay channel is attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayAttachment {
    /// γ₂ drives `|G_ud⟩⟨T2|`.
    #[default]
    Trion,
    /// γ₂ drives `|G_du⟩⟨I1_u| + |G_dd⟩⟨I1_d|` instead.
    Indirect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegratorKind {
    /// Classic fourth-order Runge–Kutta with fixed step `dt`.
    #[default]
    Rk4Fixed,
    /// Dormand–Prince 5(4) with step control against `adaptive_tol`.
    Rk45Adaptive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    /// A single basis state.
    Basis(BasisState),
    /// Ten complex amplitudes, each written `[re, im]`.
    Pure(StateVector),
    /// A full 10×10 density matrix, row-major `[re, im]` entries.
    Density(DensityMatrix),
}

impl InitialState {
    /// ½(|↑,↑⟩ + |↑,↓⟩ + |↓,↑⟩ + |↓,↓⟩)
    pub fn equal_superposition() -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); DIM];
        for g in BasisState::GROUND {
            amps[g.index()] = C64::new(0.5, 0.0);
        }
        InitialState::Pure(StateVector::new(amps))
    }

    pub fn pure_state(&self) -> Option<StateVector> {
        match self {
            InitialState::Basis(b) => Some(b.ket_vector()),
            InitialState::Pure(psi) => Some(psi.clone()),
            InitialState::Density(_) => None,
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            InitialState::Density(rho) => rho.clone(),
            other => DensityMatrix::from_pure(&other.pure_state().expect("pure variant")),
        }
    }

    fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::config("initial_state", m));
        match self {
            InitialState::Basis(_) => Ok(()),
            InitialState::Pure(psi) => {
                if psi.dim() != DIM {
                    return err(format!("expected {DIM} amplitudes, got {}", psi.dim()));
                }
                if !psi.is_normalized() {
                    return err(format!("state norm is {}, expected 1", psi.norm()));
                }
                Ok(())
            }
            InitialState::Density(rho) => {
                if rho.dim() != DIM {
                    return err(format!("expected a {DIM}x{DIM} matrix, got {0}x{0}", rho.dim()));
                }
                if (rho.trace().re - 1.0).abs() > 1e-9 || rho.trace().im.abs() > 1e-9 {
                    return err(format!("trace is {}, expected 1", rho.trace()));
                }
                if rho.matrix().hermiticity_error() > 1e-12 {
                    return err("density matrix is not Hermitian".into());
                }
                Ok(())
            }
        }
    }
}

impl Default for InitialState {
    fn default() -> Self {
        Self::equal_superposition()
    }
}

/// Piecewise-constant approximation of the drive: each stair of width `width`
/// (counted from `t_start`) holds the pulses at the stair midpoint. A last
/// partial stair uses its own midpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Staircase {
    pub t_start: f64,
    pub t_end: f64,
    pub width: f64,
}

impl Staircase {
    pub fn count(&self) -> usize {
        let n = (self.t_end - self.t_start) / self.width;
        let whole = (n + 1e-9).floor();
        if n - whole > 1e-9 {
            whole as usize + 1
        } else {
            whole as usize
        }
    }

    /// `(start, end, midpoint)` of stair `k`.
    pub fn stair(&self, k: usize) -> (f64, f64, f64) {
        let a = self.t_start + k as f64 * self.width;
        let b = if k + 1 >= self.count() {
            self.t_end
        } else {
            self.t_start + (k + 1) as f64 * self.width
        };
        (a, b, 0.5 * (a + b))
    }

    pub fn index_at(&self, t: f64) -> usize {
        let k = ((t - self.t_start) / self.width + 1e-9).floor().max(0.0) as usize;
        k.min(self.count().saturating_sub(1))
    }
}

/// Resolved simulation parameters, internal units: ps, rad/ps, ps⁻¹.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    /// Hole tunneling coupling as quoted: meV, interpreted through `unit_mode`.
    pub tau_mev: f64,
    pub unit_mode: UnitMode,
    pub gamma1_per_ps: f64,
    pub gamma2_per_ps: f64,
    pub gamma_ind_per_ps: f64,
    pub gamma2_attachment: DecayAttachment,
    pub pulse1: PulseShape,
    pub pulse2: PulseShape,
    pub t_start_ps: f64,
    pub t_end_ps: f64,
    pub dt_ps: f64,
    pub integrator: IntegratorKind,
    pub adaptive_tol: f64,
    pub sample_stride: usize,
    pub initial_state: InitialState,
    /// Hold the drive piecewise constant on stairs of this width.
    #[serde(default)]
    pub staircase_ps: Option<f64>,
}

impl Default for SimConfig {
    /// τ = 2 meV, γ₁ = γ₂ = 1 ns⁻¹, t₀ = 1 ps, window [−60, 60] ps.
    fn default() -> Self {
        let t0 = 1.0;
        Self {
            tau_mev: 2.0,
            unit_mode: UnitMode::Physical,
            gamma1_per_ps: 1e-3,
            gamma2_per_ps: 1e-3,
            gamma_ind_per_ps: 0.0,
            gamma2_attachment: DecayAttachment::Trion,
            pulse1: PulseShape::default_dot1(t0),
            pulse2: PulseShape::default_dot2(t0),
            t_start_ps: -60.0,
            t_end_ps: 60.0,
            dt_ps: 1e-3,
            integrator: IntegratorKind::Rk4Fixed,
            adaptive_tol: 1e-10,
            sample_stride: 100,
            initial_state: InitialState::default(),
            staircase_ps: None,
        }
    }
}

impl SimConfig {
    /// τ in rad/ps.
    pub fn tau(&self) -> f64 {
        energy_to_angular_frequency(self.tau_mev, self.unit_mode)
    }

    /// Sets τ directly in rad/ps (switches to ħ = 1 bookkeeping).
    pub fn with_tau_rad_per_ps(mut self, tau: f64) -> Self {
        self.tau_mev = tau;
        self.unit_mode = UnitMode::HbarUnity;
        self
    }

    pub fn with_unit_mode(mut self, mode: UnitMode) -> Self {
        self.unit_mode = mode;
        self
    }

    /// No drive, no tunneling, no decay.
    pub fn without_couplings(mut self) -> Self {
        self.tau_mev = 0.0;
        self.gamma1_per_ps = 0.0;
        self.gamma2_per_ps = 0.0;
        self.gamma_ind_per_ps = 0.0;
        self.pulse1 = PulseShape::off();
        self.pulse2 = PulseShape::off();
        self
    }

    pub fn closed_system(mut self) -> Self {
        self.gamma1_per_ps = 0.0;
        self.gamma2_per_ps = 0.0;
        self.gamma_ind_per_ps = 0.0;
        self
    }

    pub fn staircase(&self) -> Option<Staircase> {
        self.staircase_ps.map(|width| Staircase {
            t_start: self.t_start_ps,
            t_end: self.t_end_ps,
            width,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |field: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(field, format!("must be finite, got {v}")))
            }
        };
        finite("tau", self.tau_mev)?;
        for (field, rate) in [
            ("gamma1", self.gamma1_per_ps),
            ("gamma2", self.gamma2_per_ps),
            ("gamma_ind", self.gamma_ind_per_ps),
        ] {
            finite(field, rate)?;
            if rate < 0.0 {
                return Err(Error::config(
                    field,
                    format!("decay rate must be >= 0, got {rate} ps^-1"),
                ));
            }
        }
        self.pulse1.validate("pulse1")?;
        self.pulse2.validate("pulse2")?;
        finite("t_start", self.t_start_ps)?;
        finite("t_end", self.t_end_ps)?;
        if !(self.t_start_ps < self.t_end_ps) {
            return Err(Error::config(
                "t_end",
                format!("window end {} must exceed start {}", self.t_end_ps, self.t_start_ps),
            ));
        }
        if !(self.dt_ps > 0.0) || !self.dt_ps.is_finite() {
            return Err(Error::config("dt", format!("step must be > 0, got {}", self.dt_ps)));
        }
        if !(self.adaptive_tol > 0.0) || !self.adaptive_tol.is_finite() {
            return Err(Error::config(
                "adaptive_tol",
                format!("must be > 0, got {}", self.adaptive_tol),
            ));
        }
        if self.sample_stride == 0 {
            return Err(Error::config("sample_stride", "must be >= 1"));
        }
        if let Some(w) = self.staircase_ps {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::config("staircase", format!("stair width must be > 0, got {w}")));
            }
            if self.integrator == IntegratorKind::Rk4Fixed {
                let ratio = w / self.dt_ps;
                if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) || ratio.round() < 1.0 {
                    return Err(Error::config(
                        "staircase",
                        format!("stair width {w} must be an integer multiple of dt {}", self.dt_ps),
                    ));
                }
            }
        }
        self.initial_state.validate()
    }
}
