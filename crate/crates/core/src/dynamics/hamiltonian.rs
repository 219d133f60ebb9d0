// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64 as C64;

use super::SimConfig;
use crate::statespace::{BasisState, ComplexMatrix, DIM};

use BasisState::*;

/// Which parameter scales a coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    /// Slow σ⁻ drive on dot 1, Ω₁(t).
    Omega1,
    /// Fast σ⁻ drive on dot 2, Ω₂(t).
    Omega2,
    /// Hole tunneling τ.
    Tau,
}

/// All off-diagonal couplings `(from, to, scale)`; each enters H as
/// `scale · (|to⟩⟨from| + |from⟩⟨to|)`.
///
/// The dot-1 sector is a Λ-free ladder `G → T1 → I1` for each dot-2 spin;
/// the dot-2 sector is `G_ud → T2 → I2`. `G_uu` appears nowhere.
pub struct CouplingSet;

impl CouplingSet {
    pub const ALL: [(BasisState, BasisState, Coupling); 6] = [
        (GroundDownUp, Trion1Up, Coupling::Omega1),
        (GroundDownDown, Trion1Down, Coupling::Omega1),
        (Trion1Up, Indirect1Up, Coupling::Tau),
        (Trion1Down, Indirect1Down, Coupling::Tau),
        (GroundUpDown, Trion2, Coupling::Omega2),
        (Trion2, Indirect2, Coupling::Tau),
    ];

    /// Numerical value of each coupling at `t` (rad/ps).
    pub fn strengths(config: &SimConfig, t: f64) -> [f64; 6] {
        let (o1, o2, tau) = (config.pulse1.value(t), config.pulse2.value(t), config.tau());
        Self::ALL.map(|(_, _, c)| match c {
            Coupling::Omega1 => o1,
            Coupling::Omega2 => o2,
            Coupling::Tau => tau,
        })
    }
}

/// H(t) = H₁(t) + H₂(t) in rad/ps (ħ = 1 inside the dynamics).
///
/// Both triangle entries are written from the same real number, so the
/// result is exactly Hermitian.
pub fn assemble_hamiltonian(t: f64, config: &SimConfig) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(DIM);
    let strengths = CouplingSet::strengths(config, t);
    for (&(from, to, _), &v) in CouplingSet::ALL.iter().zip(&strengths) {
        h[(to.index(), from.index())] += C64::new(v, 0.0);
        h[(from.index(), to.index())] += C64::new(v, 0.0);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulses::PulseShape;

    #[test]
    fn dot1_drive_entry_at_peak() {
        let h = assemble_hamiltonian(0.0, &SimConfig::default());
        let v = h[(Trion1Down.index(), GroundDownDown.index())];
        assert!((v.re - 4.4311346272637895).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn pulses_off_leaves_only_tunneling() {
        let cfg = SimConfig {
            pulse1: PulseShape::off(),
            pulse2: PulseShape::off(),
            ..SimConfig::default()
        };
        let h = assemble_hamiltonian(0.3, &cfg);
        let nonzero: Vec<(usize, usize)> = (0..DIM)
            .flat_map(|i| (0..DIM).map(move |j| (i, j)))
            .filter(|&(i, j)| h[(i, j)].norm() > 0.0)
            .collect();
        // three τ couplings, each with its conjugate
        assert_eq!(nonzero.len(), 6);
        assert!(nonzero.contains(&(Indirect1Up.index(), Trion1Up.index())));
        assert!(nonzero.contains(&(Trion2.index(), Indirect2.index())));
    }

    #[test]
    fn exactly_hermitian_and_ground_uu_decoupled() {
        let cfg = SimConfig::default();
        for &t in &[-60.0, -3.3, 0.0, 0.123, 17.0] {
            let h = assemble_hamiltonian(t, &cfg);
            assert!(h.is_hermitian());
            for k in 0..DIM {
                assert_eq!(h[(0, k)].norm(), 0.0);
                assert_eq!(h[(k, 0)].norm(), 0.0);
            }
        }
    }
}
