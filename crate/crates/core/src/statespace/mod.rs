// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

//! The ten-level effective Hilbert space of the quantum-dot molecule.
//!
//! Kets are written `|dot 1, dot 2⟩`; `↑`/`↓` are electron spins and
//! `⇑`/`⇓` heavy holes. Every state reachable from the spin ground states
//! under the two drives and hole tunneling is listed below; nothing else is
//! ever populated, so the basis is closed under the dynamics.
//!
//! | label  | index | ket          | role                                   |
//! |--------|-------|--------------|----------------------------------------|
//! | `G_uu` | 0     | `|↑,↑⟩`      | qubit ground state, never coupled      |
//! | `G_ud` | 1     | `|↑,↓⟩`      | qubit ground state, acquires the −1    |
//! | `G_du` | 2     | `|↓,↑⟩`      | qubit ground state                     |
//! | `G_dd` | 3     | `|↓,↓⟩`      | qubit ground state                     |
//! | `T1_u` | 4     | `|↓↑⇓,↑⟩`    | dot-1 trion, dot-2 spin up             |
//! | `T1_d` | 5     | `|↓↑⇓,↓⟩`    | dot-1 trion, dot-2 spin down           |
//! | `I1_u` | 6     | `|↓↑,⇓↑⟩`    | hole tunneled to dot 2                 |
//! | `I1_d` | 7     | `|↓↑,⇓↓⟩`    | hole tunneled to dot 2                 |
//! | `T2`   | 8     | `|↑,↓↑⇓⟩`    | dot-2 trion                            |
//! | `I2`   | 9     | `|↑⇓,↓↑⟩`    | hole tunneled back to dot 1            |
//!
//! The dot-2 trion built on top of `I1_d` would need two `⇓` holes in dot 2
//! and is Pauli blocked; it is absent from the basis.

mod density;
mod matrix;

pub use density::DensityMatrix;
pub use matrix::{ComplexMatrix, StateVector};

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{DecayAttachment, SimConfig};
use crate::{Error, Result};

/// Dimension of the effective Hilbert space.
pub const DIM: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisState {
    #[serde(rename = "G_uu")]
    GroundUpUp,
    #[serde(rename = "G_ud")]
    GroundUpDown,
    #[serde(rename = "G_du")]
    GroundDownUp,
    #[serde(rename = "G_dd")]
    GroundDownDown,
    #[serde(rename = "T1_u")]
    Trion1Up,
    #[serde(rename = "T1_d")]
    Trion1Down,
    #[serde(rename = "I1_u")]
    Indirect1Up,
    #[serde(rename = "I1_d")]
    Indirect1Down,
    #[serde(rename = "T2")]
    Trion2,
    #[serde(rename = "I2")]
    Indirect2,
}

use BasisState::*;

impl BasisState {
    pub const ALL: [BasisState; DIM] = [
        GroundUpUp,
        GroundUpDown,
        GroundDownUp,
        GroundDownDown,
        Trion1Up,
        Trion1Down,
        Indirect1Up,
        Indirect1Down,
        Trion2,
        Indirect2,
    ];

    /// The four spin-qubit states in computational order.
    pub const GROUND: [BasisState; 4] = [GroundUpUp, GroundUpDown, GroundDownUp, GroundDownDown];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    pub const fn label(self) -> &'static str {
        match self {
            GroundUpUp => "G_uu",
            GroundUpDown => "G_ud",
            GroundDownUp => "G_du",
            GroundDownDown => "G_dd",
            Trion1Up => "T1_u",
            Trion1Down => "T1_d",
            Indirect1Up => "I1_u",
            Indirect1Down => "I1_d",
            Trion2 => "T2",
            Indirect2 => "I2",
        }
    }

    pub const fn ket(self) -> &'static str {
        match self {
            GroundUpUp => "|↑,↑⟩",
            GroundUpDown => "|↑,↓⟩",
            GroundDownUp => "|↓,↑⟩",
            GroundDownDown => "|↓,↓⟩",
            Trion1Up => "|↓↑⇓,↑⟩",
            Trion1Down => "|↓↑⇓,↓⟩",
            Indirect1Up => "|↓↑,⇓↑⟩",
            Indirect1Down => "|↓↑,⇓↓⟩",
            Trion2 => "|↑,↓↑⇓⟩",
            Indirect2 => "|↑⇓,↓↑⟩",
        }
    }

    pub const fn is_ground(self) -> bool {
        (self as usize) < 4
    }

    pub fn ket_vector(self) -> StateVector {
        StateVector::basis(DIM, self.index())
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BasisState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|b| b.label() == s)
            .ok_or_else(|| Error::Domain(format!("unknown basis state `{s}`")))
    }
}

/// The basis in index order.
pub fn build_basis() -> Vec<BasisState> {
    BasisState::ALL.to_vec()
}

/// `|to⟩⟨from|`
pub fn transition_op(from: BasisState, to: BasisState) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(DIM);
    m[(to.index(), from.index())] = C64::new(1.0, 0.0);
    m
}

fn sum_of_transitions(pairs: &[(BasisState, BasisState)]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(DIM);
    for &(from, to) in pairs {
        m[(to.index(), from.index())] += C64::new(1.0, 0.0);
    }
    m
}

/// Jump operators available to the master equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayOperator {
    /// `|G_du⟩⟨T1_u| + |G_dd⟩⟨T1_d|`: radiative recombination in dot 1.
    Trion1,
    /// `|G_ud⟩⟨T2|`: radiative recombination in dot 2.
    Trion2,
    /// `|G_du⟩⟨I1_u| + |G_dd⟩⟨I1_d|`
    Indirect1,
    /// `|G_ud⟩⟨I2|`
    Indirect2,
}

impl DecayOperator {
    /// `(from, to)` pairs making up the jump operator.
    pub fn transitions(self) -> &'static [(BasisState, BasisState)] {
        match self {
            DecayOperator::Trion1 => &[(Trion1Up, GroundDownUp), (Trion1Down, GroundDownDown)],
            DecayOperator::Trion2 => &[(Trion2, GroundUpDown)],
            DecayOperator::Indirect1 => &[(Indirect1Up, GroundDownUp), (Indirect1Down, GroundDownDown)],
            DecayOperator::Indirect2 => &[(Indirect2, GroundUpDown)],
        }
    }

    pub fn matrix(self) -> ComplexMatrix {
        sum_of_transitions(self.transitions())
    }
}

/// One dissipative channel `L = √rate · c`.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseChannel {
    pub kind: DecayOperator,
    /// ps⁻¹
    pub rate: f64,
    pub operator: ComplexMatrix,
}

impl CollapseChannel {
    pub fn new(kind: DecayOperator, rate: f64) -> Self {
        Self {
            kind,
            rate,
            operator: kind.matrix(),
        }
    }

    /// `√rate · c`
    pub fn scaled_operator(&self) -> ComplexMatrix {
        self.operator.scale_real(self.rate.sqrt())
    }
}

/// Radiative channels for a configuration.
///
/// `c₁` (dot-1 trions) always carries γ₁. With the default trion attachment
/// γ₂ sits on `c₂` (the dot-2 trion); with the indirect attachment γ₂ moves
/// to the indirect dot-1 excitons and `c₂` is dropped. The indirect channels
/// carry γ_ind and are only present when γ_ind > 0.
pub fn collapse_ops(config: &SimConfig) -> Result<Vec<CollapseChannel>> {
    for (field, rate) in [
        ("gamma1", config.gamma1_per_ps),
        ("gamma2", config.gamma2_per_ps),
        ("gamma_ind", config.gamma_ind_per_ps),
    ] {
        if !(rate >= 0.0) || !rate.is_finite() {
            return Err(Error::config(
                field,
                format!("decay rate must be finite and >= 0, got {rate}"),
            ));
        }
    }
    let mut channels = vec![CollapseChannel::new(DecayOperator::Trion1, config.gamma1_per_ps)];
    match config.gamma2_attachment {
        DecayAttachment::Trion => {
            channels.push(CollapseChannel::new(DecayOperator::Trion2, config.gamma2_per_ps));
            if config.gamma_ind_per_ps > 0.0 {
                channels.push(CollapseChannel::new(DecayOperator::Indirect1, config.gamma_ind_per_ps));
                channels.push(CollapseChannel::new(DecayOperator::Indirect2, config.gamma_ind_per_ps));
            }
        }
        DecayAttachment::Indirect => {
            channels.push(CollapseChannel::new(DecayOperator::Indirect1, config.gamma2_per_ps));
            if config.gamma_ind_per_ps > 0.0 {
                channels.push(CollapseChannel::new(DecayOperator::Indirect2, config.gamma_ind_per_ps));
            }
        }
    }
    Ok(channels)
}
