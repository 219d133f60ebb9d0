// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

//! Reference solutions used to check the integrators.
//!
//! - [`dark_state`]: the zero-energy state of the dot-1 ladder `G ↔ T1 ↔ I1`
//! - [`three_level_rabi`]: closed-form dynamics of `G_ud ↔ T2 ↔ I2` under a
//!   constant drive
//! - [`damped_two_level`]: isolated radiative decay
//! - [`expm_propagate`]: brute-force propagation through the exponential of
//!   the 100×100 Lindbladian superoperator

mod expm;
mod superop;

pub use expm::{connected_blocks, expm, expm_blockwise, BlockPropagator};
pub use superop::{
    expm_propagate, lindbladian_superoperator, staircase_propagate, unvec_columns, vec_columns, StaircaseSuperoperator,
};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::statespace::{ComplexMatrix, StateVector};
use crate::{Error, Result};

/// Dark state `(τ, −Ω₁)/√(τ² + Ω₁²)` in the `{|↓,s⟩, |↓↑,⇓s⟩}` subspace.
pub fn dark_state(omega1: f64, tau: f64) -> Result<StateVector> {
    let norm = omega1.hypot(tau);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::Domain(format!(
            "dark state undefined for omega1 = {omega1}, tau = {tau}"
        )));
    }
    Ok(StateVector::from_real(&[tau / norm, -omega1 / norm]))
}

/// Dot-1 sector Hamiltonian in the ordered basis `(G, T1, I1)`.
pub fn dot1_sector_hamiltonian(omega1: f64, tau: f64) -> ComplexMatrix {
    ladder_hamiltonian(omega1, tau)
}

/// `Ω(|e⟩⟨g| + h.c.) + τ(|t⟩⟨e| + h.c.)` in the ordered basis `(g, e, t)`.
pub fn ladder_hamiltonian(omega: f64, tau: f64) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(3);
    h[(0, 1)] = C64::new(omega, 0.0);
    h[(1, 0)] = C64::new(omega, 0.0);
    h[(1, 2)] = C64::new(tau, 0.0);
    h[(2, 1)] = C64::new(tau, 0.0);
    h
}

/// Embeds a two-component dark state as `(g, 0, i)`.
pub fn embed_dark_state(d: &StateVector) -> StateVector {
    StateVector::new(vec![d[0], C64::new(0.0, 0.0), d[1]])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeLevelParams {
    /// rad/ps
    pub tau: f64,
    /// Constant drive, rad/ps.
    pub omega: f64,
    /// ps
    pub t: f64,
}

impl ThreeLevelParams {
    /// √(τ² + Ω²)
    pub fn frequency(&self) -> f64 {
        self.tau.hypot(self.omega)
    }

    /// First time at which `t·√(τ² + Ω²) = π`.
    pub fn resonance_time(tau: f64, omega: f64) -> Result<f64> {
        let w = tau.hypot(omega);
        if w == 0.0 {
            return Err(Error::Domain("resonance time needs tau² + omega² > 0".into()));
        }
        Ok(std::f64::consts::PI / w)
    }
}

/// Amplitudes `(g, e, t)` at time `t` starting from `g`:
///
/// ```text
/// g = (τ² + Ω² cos ωt) / ω²
/// e = −i (Ω/ω) sin ωt
/// t = τΩ (cos ωt − 1) / ω²,      ω² = τ² + Ω²
/// ```
///
/// The third amplitude carries the same 1/ω² as the first, which is what
/// makes the vector unit-norm.
pub fn three_level_rabi(p: ThreeLevelParams) -> StateVector {
    let w2 = p.tau * p.tau + p.omega * p.omega;
    if w2 == 0.0 {
        return StateVector::basis(3, 0);
    }
    let w = w2.sqrt();
    let (s, c) = (w * p.t).sin_cos();
    StateVector::new(vec![
        C64::new((p.tau * p.tau + p.omega * p.omega * c) / w2, 0.0),
        C64::new(0.0, -p.omega / w * s),
        C64::new(p.tau * p.omega * (c - 1.0) / w2, 0.0),
    ])
}

/// Excited-state population `exp(−γt)` of an isolated decaying level.
pub fn damped_two_level(gamma: f64, t: f64) -> f64 {
    (-gamma * t).exp()
}
