// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{BasisState, ComplexMatrix, StateVector};

/// Density matrix ρ. Trace and positivity are monitored by the integrators,
/// never silently corrected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn from_matrix(m: ComplexMatrix) -> Self {
        Self(m)
    }

    /// `|ψ⟩⟨ψ|`
    pub fn from_pure(psi: &StateVector) -> Self {
        Self(ComplexMatrix::outer(psi, psi))
    }

    pub fn basis_projector(state: BasisState) -> Self {
        Self::from_pure(&state.ket_vector())
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn matrix_mut(&mut self) -> &mut ComplexMatrix {
        &mut self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// ρ_{ab} = ⟨a|ρ|b⟩
    pub fn element(&self, a: BasisState, b: BasisState) -> C64 {
        self.0[(a.index(), b.index())]
    }

    pub fn population(&self, state: BasisState) -> f64 {
        self.0[(state.index(), state.index())].re
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// tr ρ²
    pub fn purity(&self) -> f64 {
        // tr(ρ²) = Σ_ij ρ_ij ρ_ji = Σ_ij |ρ_ij|² for Hermitian ρ
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.0[(i, j)] * self.0[(j, i)]).re;
            }
        }
        acc
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.0.hermitian_eigenvalues()[0]
    }

    /// ρ ← (ρ + ρ†)/2
    pub fn symmetrize(&mut self) {
        let n = self.dim();
        for i in 0..n {
            let d = self.0[(i, i)];
            self.0[(i, i)] = C64::new(d.re, 0.0);
            for j in i + 1..n {
                let avg = 0.5 * (self.0[(i, j)] + self.0[(j, i)].conj());
                self.0[(i, j)] = avg;
                self.0[(j, i)] = avg.conj();
            }
        }
    }

    /// ⟨ψ|ρ|ψ⟩ including any imaginary residue.
    pub fn expectation(&self, psi: &StateVector) -> C64 {
        psi.inner(&self.0.apply(psi))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.max_abs_diff(&other.0)
    }
}
