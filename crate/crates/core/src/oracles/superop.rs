// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

//! Liouville-space form of the master equation.
//!
//! ρ is vectorized by stacking columns: `vec(ρ)[i + j·n] = ρ[i, j]`, so that
//! `vec(AXB) = (Bᵀ ⊗ A) vec(X)`. With that convention
//!
//! ```text
//! 𝓛 = −i(I ⊗ H − Hᵀ ⊗ I) + Σ_k [ L̄_k ⊗ L_k − ½ I ⊗ L_k†L_k − ½ (L_k†L_k)ᵀ ⊗ I ]
//! ```

use num_complex::Complex64 as C64;

use super::expm::{connected_blocks, expm_blockwise, BlockPropagator};
use crate::dynamics::{assemble_hamiltonian, SimConfig, Staircase};
use crate::pulses::PulseShape;
use crate::statespace::{collapse_ops, CollapseChannel, ComplexMatrix, DensityMatrix};
use crate::{Error, Result};

pub fn vec_columns(m: &ComplexMatrix) -> Vec<C64> {
    let n = m.dim();
    let mut v = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            v.push(m[(i, j)]);
        }
    }
    v
}

pub fn unvec_columns(v: &[C64], n: usize) -> ComplexMatrix {
    assert_eq!(v.len(), n * n);
    ComplexMatrix::from_fn(n, |i, j| v[i + j * n])
}

/// The n²×n² generator 𝓛 for a constant Hamiltonian.
pub fn lindbladian_superoperator(h: &ComplexMatrix, channels: &[CollapseChannel]) -> ComplexMatrix {
    let n = h.dim();
    let id = ComplexMatrix::identity(n);
    let mut s = (&id.kron(h) - &h.transpose().kron(&id)).scale(C64::new(0.0, -1.0));
    for ch in channels.iter().filter(|c| c.rate > 0.0) {
        let l = ch.scaled_operator();
        let ldl = l.adjoint().matmul(&l);
        s = &s + &l.conj().kron(&l);
        s = &s - &id.kron(&ldl).scale_real(0.5);
        s = &s - &ldl.transpose().kron(&id).scale_real(0.5);
    }
    s
}

/// ρ(dt) = unvec(exp(𝓛·dt) vec(ρ₀)) for constant H.
pub fn expm_propagate(rho0: &DensityMatrix, h: &ComplexMatrix, channels: &[CollapseChannel], dt: f64) -> DensityMatrix {
    if dt == 0.0 {
        return rho0.clone();
    }
    let s = lindbladian_superoperator(h, channels).scale_real(dt);
    let v = expm_blockwise(&s).apply(&vec_columns(rho0.matrix()));
    DensityMatrix::from_matrix(unvec_columns(&v, rho0.dim()))
}

/// 𝓛(t) = 𝓛₀ + Ω₁(t)𝓛₁ + Ω₂(t)𝓛₂ for a configuration, split once so each
/// stair only recombines three fixed matrices.
pub struct StaircaseSuperoperator {
    config: SimConfig,
    base: ComplexMatrix,
    drive1: ComplexMatrix,
    drive2: ComplexMatrix,
    blocks: Vec<Vec<usize>>,
    /// Per block: the restrictions of base, drive1 and drive2.
    parts: Vec<[ComplexMatrix; 3]>,
}

impl StaircaseSuperoperator {
    pub fn new(config: &SimConfig) -> Result<Self> {
        let channels = collapse_ops(config)?;
        let undriven = SimConfig {
            pulse1: PulseShape::off(),
            pulse2: PulseShape::off(),
            ..config.clone()
        };
        let unit_drive = |p1: f64, p2: f64| SimConfig {
            tau_mev: 0.0,
            pulse1: PulseShape::constant(p1),
            pulse2: PulseShape::constant(p2),
            ..config.clone()
        };
        let base = lindbladian_superoperator(&assemble_hamiltonian(0.0, &undriven), &channels);
        let drive1 = lindbladian_superoperator(&assemble_hamiltonian(0.0, &unit_drive(1.0, 0.0)), &[]);
        let drive2 = lindbladian_superoperator(&assemble_hamiltonian(0.0, &unit_drive(0.0, 1.0)), &[]);
        let pattern = ComplexMatrix::from_fn(base.dim(), |i, j| {
            C64::new(base[(i, j)].norm() + drive1[(i, j)].norm() + drive2[(i, j)].norm(), 0.0)
        });
        let blocks = connected_blocks(&pattern);
        let parts = blocks
            .iter()
            .map(|idx| [&base, &drive1, &drive2].map(|m| ComplexMatrix::from_fn(idx.len(), |i, j| m[(idx[i], idx[j])])))
            .collect();
        Ok(Self {
            config: config.clone(),
            base,
            drive1,
            drive2,
            blocks,
            parts,
        })
    }

    /// Number of independent Liouville-space blocks.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn at(&self, t: f64) -> ComplexMatrix {
        let (o1, o2) = (self.config.pulse1.value(t), self.config.pulse2.value(t));
        let mut s = self.base.clone();
        s.axpy(C64::new(o1, 0.0), &self.drive1);
        s.axpy(C64::new(o2, 0.0), &self.drive2);
        s
    }

    /// exp(𝓛(t_hold)·dt)
    pub fn propagator(&self, t_hold: f64, dt: f64) -> BlockPropagator {
        let (o1, o2) = (self.config.pulse1.value(t_hold), self.config.pulse2.value(t_hold));
        let subs = self.blocks.iter().zip(&self.parts).map(|(idx, [b, d1, d2])| {
            let mut s = b.clone();
            s.axpy(C64::new(o1, 0.0), d1);
            s.axpy(C64::new(o2, 0.0), d2);
            (idx.clone(), s.scale_real(dt))
        });
        BlockPropagator::from_submatrices(self.base.dim(), subs)
    }
}

/// Propagates the configured initial state through the staircase drive one
/// stair at a time, calling `observer(t, ρ)` after every stair.
pub fn staircase_propagate(config: &SimConfig, mut observer: impl FnMut(f64, &DensityMatrix)) -> Result<DensityMatrix> {
    config.validate()?;
    let width = config
        .staircase_ps
        .ok_or_else(|| Error::config("staircase", "staircase propagation needs a stair width"))?;
    let stairs = Staircase {
        t_start: config.t_start_ps,
        t_end: config.t_end_ps,
        width,
    };
    let sup = StaircaseSuperoperator::new(config)?;
    let n = config.initial_state.density().dim();
    let mut v = vec_columns(config.initial_state.density().matrix());
    for k in 0..stairs.count() {
        let (a, b, mid) = stairs.stair(k);
        v = sup.propagator(mid, b - a).apply(&v);
        observer(b, &DensityMatrix::from_matrix(unvec_columns(&v, n)));
    }
    Ok(DensityMatrix::from_matrix(unvec_columns(&v, n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{damped_two_level, expm};
    use crate::statespace::{BasisState, DecayOperator, DIM};

    #[test]
    fn vectorization_identity() {
        let a = ComplexMatrix::from_fn(3, |i, j| C64::new(i as f64, j as f64));
        let x = ComplexMatrix::from_fn(3, |i, j| C64::new((i * j) as f64, 1.0));
        let b = ComplexMatrix::from_fn(3, |i, j| C64::new(1.0 + j as f64, -(i as f64)));
        let lhs = vec_columns(&a.matmul(&x).matmul(&b));
        assert_eq!(unvec_columns(&vec_columns(&x), 3), x);
        let prod = b.transpose().kron(&a);
        let vx = vec_columns(&x);
        for r in 0..9 {
            let val: C64 = (0..9).map(|c| prod[(r, c)] * vx[c]).sum();
            assert!((val - lhs[r]).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_time_is_identity() {
        let rho = DensityMatrix::basis_projector(BasisState::Trion1Up);
        let h = assemble_hamiltonian(0.0, &SimConfig::default());
        assert_eq!(expm_propagate(&rho, &h, &[], 0.0), rho);
    }

    #[test]
    fn pure_decay_matches_exponential_law() {
        let rho = DensityMatrix::basis_projector(BasisState::Trion2);
        let ch = [CollapseChannel::new(DecayOperator::Trion2, 0.001)];
        let out = expm_propagate(&rho, &ComplexMatrix::zeros(DIM), &ch, 1000.0);
        let expected = damped_two_level(0.001, 1000.0);
        assert!((out.population(BasisState::Trion2) - expected).abs() < 1e-14);
        assert!((out.population(BasisState::GroundUpDown) - (1.0 - expected)).abs() < 1e-14);
    }

    #[test]
    fn one_step_preserves_trace_and_hermiticity() {
        let cfg = SimConfig {
            gamma1_per_ps: 0.05,
            gamma2_per_ps: 0.02,
            ..SimConfig::default()
        };
        let h = assemble_hamiltonian(0.1, &cfg);
        let rho = cfg.initial_state.density();
        let out = expm_propagate(&rho, &h, &collapse_ops(&cfg).unwrap(), 0.7);
        assert!((out.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(out.matrix().hermiticity_error() < 1e-12);
    }

    #[test]
    fn split_generator_matches_direct_build() {
        let cfg = SimConfig::default();
        let sup = StaircaseSuperoperator::new(&cfg).unwrap();
        for &t in &[-30.0, 0.0, 0.4] {
            let direct = lindbladian_superoperator(&assemble_hamiltonian(t, &cfg), &collapse_ops(&cfg).unwrap());
            assert!(sup.at(t).max_abs_diff(&direct) < 1e-15);
            let dense = expm(&direct.scale_real(0.01));
            assert!(sup.propagator(t, 0.01).to_dense().max_abs_diff(&dense) < 1e-14);
        }
        // sectors {uu}, {ud,T2,I2}, {du,T1u,I1u}, {dd,T1d,I1d} pair up into 16 blocks
        assert_eq!(sup.block_count(), 16);
    }
}
