// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64 as C64;

use super::hamiltonian::CouplingSet;
use super::SimConfig;
use crate::statespace::{collapse_ops, ComplexMatrix, DensityMatrix, DIM};
use crate::Result;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Sparse evaluator of dρ/dt = −i[H, ρ] + Σ (LρL† − ½{L†L, ρ}).
///
/// Internally uses K = H − (i/2) Σ L†L, so that
/// dρ/dt = X + X† + Σ LρL† with X = −iKρ. The X + X† form keeps the output
/// exactly Hermitian for Hermitian input.
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    config: SimConfig,
    /// Nonzeros `(row, col, value)` of −(i/2) Σ L†L.
    damping: Vec<(usize, usize, C64)>,
    /// Nonzeros `(row, col, value)` of each √γ c.
    jumps: Vec<Vec<(usize, usize, C64)>>,
    /// Evaluate the drive here instead of at the stage time.
    hold_time: Option<f64>,
}

fn nonzeros(m: &ComplexMatrix) -> Vec<(usize, usize, C64)> {
    let n = m.dim();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| m[(i, j)] != C64::new(0.0, 0.0))
        .map(|(i, j)| (i, j, m[(i, j)]))
        .collect()
}

impl LindbladGenerator {
    pub fn new(config: &SimConfig) -> Result<Self> {
        let channels = collapse_ops(config)?;
        let mut ldl = ComplexMatrix::zeros(DIM);
        let mut jumps = Vec::new();
        for ch in channels.iter().filter(|c| c.rate > 0.0) {
            let l = ch.scaled_operator();
            ldl = &ldl + &l.adjoint().matmul(&l);
            jumps.push(nonzeros(&l));
        }
        Ok(Self {
            config: config.clone(),
            damping: nonzeros(&ldl.scale(C64::new(0.0, -0.5))),
            jumps,
            hold_time: None,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    /// Freezes the drive at `t` for subsequent evaluations (`None` releases it).
    pub fn hold_drive_at(&mut self, t: Option<f64>) {
        self.hold_time = t;
    }

    /// Writes dρ/dt at time `t` into `out`.
    pub fn rhs_into(&self, t: f64, rho: &ComplexMatrix, out: &mut ComplexMatrix) {
        let n = DIM;
        let r = rho.as_slice();
        let o = out.as_mut_slice();
        o.fill(C64::new(0.0, 0.0));

        // X = -i K ρ, accumulated row by row into `o`.
        let strengths = CouplingSet::strengths(&self.config, self.hold_time.unwrap_or(t));
        for (&(from, to, _), &v) in CouplingSet::ALL.iter().zip(&strengths) {
            if v == 0.0 {
                continue;
            }
            let c = -I * v;
            let (a, b) = (to.index(), from.index());
            for j in 0..n {
                o[a * n + j] += c * r[b * n + j];
                o[b * n + j] += c * r[a * n + j];
            }
        }
        for &(i, k, v) in &self.damping {
            let c = -I * v;
            for j in 0..n {
                o[i * n + j] += c * r[k * n + j];
            }
        }
        // X + X†
        for i in 0..n {
            let d = o[i * n + i];
            o[i * n + i] = C64::new(2.0 * d.re, 0.0);
            for j in i + 1..n {
                let s = o[i * n + j] + o[j * n + i].conj();
                o[i * n + j] = s;
                o[j * n + i] = s.conj();
            }
        }
        // Σ L ρ L†
        for jump in &self.jumps {
            for &(a, i, x) in jump {
                for &(b, j, y) in jump {
                    o[a * n + b] += x * r[i * n + j] * y.conj();
                }
            }
        }
    }

    pub fn rhs(&self, t: f64, rho: &DensityMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(DIM);
        self.rhs_into(t, rho.matrix(), &mut out);
        out
    }
}

/// dρ/dt at time `t` for `config`.
pub fn lindblad_rhs(rho: &DensityMatrix, t: f64, config: &SimConfig) -> Result<ComplexMatrix> {
    Ok(LindbladGenerator::new(config)?.rhs(t, rho))
}
