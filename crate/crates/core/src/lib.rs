// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

//! Open-system simulator for an all-optical controlled-phase gate in a
//! vertically stacked quantum-dot molecule.
//!
//! The two electron spins (one per dot) are the qubits. A slow σ⁻ drive on
//! dot 1 adiabatically moves `|↓,s⟩` into an indirect exciton through hole
//! tunneling, a fast π-area pulse on dot 2 gives `|↑,↓⟩` a sign flip, and the
//! slow drive returns dot 1 to its ground state. The whole sequence is
//! integrated as one Lindblad evolution over a ten-level effective basis.
//!
//! Module map:
//!
//! - [`statespace`]: basis, dense complex algebra, transition and collapse operators
//! - [`pulses`]: Rabi envelopes, pulse areas, meV ↔ rad/ps conversion
//! - [`dynamics`]: configuration, Hamiltonian, Lindblad generator, integrators
//! - [`oracles`]: closed-form and matrix-exponential reference solutions
//! - [`metrics`]: ideal gate target, fidelity, phase table, gate time
//! - [`sweep`]: one-parameter scans over the configuration
//! - [`cli`]: config/spec loading, CSV/JSON emitters and command drivers
//!
//! Units: time in ps, angular frequencies and rates in rad/ps (ps⁻¹).

// `!(x > 0.0)` is how the validators reject NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
mod error;
pub mod metrics;
pub mod oracles;
pub mod pulses;
pub mod statespace;
pub mod sweep;

pub use error::{Error, Result};

pub use num_complex::Complex64 as C64;
