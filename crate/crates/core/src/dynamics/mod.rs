// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

//! Master-equation dynamics: H(t) = H₁(t) + H₂(t) plus radiative decay,
//! integrated as one continuous evolution over the gate window.

mod config;
mod hamiltonian;
mod integrate;
mod lindblad;

pub use crate::statespace::DensityMatrix;
pub use config::{DecayAttachment, InitialState, IntegratorKind, SimConfig, Staircase};
pub use hamiltonian::{assemble_hamiltonian, Coupling, CouplingSet};
pub use integrate::{
    convergence_check, evolve, evolve_observed, ConvergenceReport, EvolveSummary, Sample, TimeSeries,
    MIN_ADAPTIVE_STEP_PS,
};
pub use lindblad::{lindblad_rhs, LindbladGenerator};
