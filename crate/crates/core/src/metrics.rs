// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

//! Gate-level observables.
//!
//! Fidelity is the pure-target overlap F = ⟨Ψ_ideal|ρ_final|Ψ_ideal⟩ (not its
//! square root). The relative phases of the gate are read from coherences
//! against `|↑,↑⟩`, which no field touches, so a global phase never enters.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve, evolve_observed, InitialState, SimConfig, TimeSeries};
use crate::pulses::UnitMode;
use crate::statespace::{BasisState, ComplexMatrix, DensityMatrix, StateVector, DIM};
use crate::{Error, Result};

/// Default pulse threshold for [`gate_time`], as a fraction of each peak.
pub const GATE_TIME_THRESHOLD: f64 = 0.01;

/// Applies the ideal controlled phase: negates the `|↑,↓⟩` amplitude.
///
/// Accepts either the four qubit amplitudes or a full ten-level vector
/// supported on the ground manifold.
pub fn ideal_output(initial: &StateVector) -> Result<StateVector> {
    match initial.dim() {
        4 => {}
        DIM => {
            if let Some(b) = BasisState::ALL
                .iter()
                .find(|b| !b.is_ground() && initial[b.index()].norm() != 0.0)
            {
                return Err(Error::Domain(format!(
                    "ideal gate acts on the qubit manifold; state has weight on {b}"
                )));
            }
        }
        d => return Err(Error::Domain(format!("expected 4 or {DIM} amplitudes, got {d}"))),
    }
    let mut out = initial.clone();
    let k = BasisState::GroundUpDown.index();
    out[k] = -out[k];
    Ok(out)
}

/// The gate as a diagonal: (1, −1, 1, 1) over `G_uu, G_ud, G_du, G_dd`.
pub fn ideal_phase_table() -> [C64; 4] {
    BasisState::GROUND.map(|g| {
        let v = ideal_output(&StateVector::basis(4, g.index())).expect("qubit basis state");
        v[g.index()]
    })
}

/// ⟨target|ρ|target⟩ for a normalized pure target.
pub fn state_fidelity(rho: &DensityMatrix, target: &StateVector) -> Result<f64> {
    if target.dim() != rho.dim() {
        return Err(Error::Domain(format!(
            "target has {} amplitudes, state has dimension {}",
            target.dim(),
            rho.dim()
        )));
    }
    if !target.is_normalized() {
        return Err(Error::Domain(format!("target norm is {}, expected 1", target.norm())));
    }
    let f = rho.expectation(target);
    if f.im.abs() >= 1e-12 {
        return Err(Error::Domain(format!(
            "overlap has imaginary part {:e}; state is not Hermitian",
            f.im
        )));
    }
    Ok(f.re)
}

/// Fidelity of `final_state` against the ideal gate applied to the
/// configuration's initial state. For a mixed initial state σ this is
/// tr(UσU† ρ), which reduces to the pure overlap when σ is pure.
pub fn gate_fidelity(config: &SimConfig, final_state: &DensityMatrix) -> Result<f64> {
    match config.initial_state.pure_state() {
        Some(psi) => state_fidelity(final_state, &ideal_output(&psi)?),
        None => {
            let sigma = config.initial_state.density();
            let mut u = ComplexMatrix::identity(DIM);
            let k = BasisState::GroundUpDown.index();
            u[(k, k)] = C64::new(-1.0, 0.0);
            let target = u.matmul(sigma.matrix()).matmul(&u);
            for b in BasisState::ALL.iter().filter(|b| !b.is_ground()) {
                if (0..DIM).any(|j| sigma.matrix()[(b.index(), j)].norm() != 0.0) {
                    return Err(Error::Domain(format!(
                        "ideal gate acts on the qubit manifold; initial state has weight on {b}"
                    )));
                }
            }
            Ok(target.matmul(final_state.matrix()).trace().re)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseEntry {
    pub state: BasisState,
    /// ⟨k|ρ|k⟩ after evolving `|k⟩` alone.
    pub population: f64,
    /// 2⟨k|ρ|↑,↑⟩ after evolving (|↑,↑⟩ + |k⟩)/√2; the `G_uu` entry is its
    /// own population.
    pub overlap: C64,
}

/// Diagonal of the simulated gate, ideally (1, −1, 1, 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseTable {
    pub entries: [PhaseEntry; 4],
}

impl PhaseTable {
    /// The ideal gate, with no dynamics.
    pub fn analytic() -> Self {
        let diag = ideal_phase_table();
        Self {
            entries: std::array::from_fn(|k| PhaseEntry {
                state: BasisState::GROUND[k],
                population: diag[k].norm_sqr(),
                overlap: diag[k],
            }),
        }
    }

    pub fn overlaps(&self) -> [C64; 4] {
        self.entries.map(|e| e.overlap)
    }
}

fn superposition_with_reference(k: BasisState) -> DensityMatrix {
    let mut m = ComplexMatrix::zeros(DIM);
    let (r, k) = (BasisState::GroundUpUp.index(), k.index());
    for (i, j) in [(r, r), (r, k), (k, r), (k, k)] {
        m[(i, j)] = C64::new(0.5, 0.0);
    }
    DensityMatrix::from_matrix(m)
}

/// Evolves each qubit basis state and each `G_uu` superposition separately.
pub fn phase_table(config: &SimConfig) -> Result<PhaseTable> {
    let reference = BasisState::GroundUpUp;
    let jobs: Vec<(BasisState, bool)> = BasisState::GROUND
        .iter()
        .map(|&g| (g, false))
        .chain(BasisState::GROUND[1..].iter().map(|&g| (g, true)))
        .collect();
    let results: Vec<Result<C64>> = jobs
        .par_iter()
        .map(|&(state, superposed)| {
            let initial = if superposed {
                InitialState::Density(superposition_with_reference(state))
            } else {
                InitialState::Basis(state)
            };
            let cfg = SimConfig {
                initial_state: initial,
                ..config.clone()
            };
            let fin = evolve_observed(&cfg, |_| {})?.final_state;
            Ok(if superposed {
                2.0 * fin.element(state, reference)
            } else {
                C64::new(fin.population(state), 0.0)
            })
        })
        .collect();
    let mut values = Vec::with_capacity(results.len());
    for r in results {
        values.push(r?);
    }
    let entries = std::array::from_fn(|k| {
        let population = values[k].re;
        let overlap = if k == 0 {
            C64::new(population, 0.0)
        } else {
            values[3 + k]
        };
        PhaseEntry {
            state: BasisState::GROUND[k],
            population,
            overlap,
        }
    });
    Ok(PhaseTable { entries })
}

/// Duration between the first and last samples where either pulse exceeds
/// `threshold_fraction` of its own sampled peak.
pub fn gate_time(series: &TimeSeries, threshold_fraction: f64) -> Result<f64> {
    if !(threshold_fraction > 0.0 && threshold_fraction < 1.0) {
        return Err(Error::Domain(format!(
            "threshold fraction must lie in (0, 1), got {threshold_fraction}"
        )));
    }
    let peak = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    let (p1, p2) = (peak(&series.omega1), peak(&series.omega2));
    let above = |i: usize| {
        (p1 > 0.0 && series.omega1[i] > threshold_fraction * p1)
            || (p2 > 0.0 && series.omega2[i] > threshold_fraction * p2)
    };
    let first = (0..series.len()).find(|&i| above(i));
    let last = (0..series.len()).rev().find(|&i| above(i));
    match (first, last) {
        (Some(a), Some(b)) => Ok(series.times[b] - series.times[a]),
        _ => Err(Error::Domain(format!(
            "no pulse exceeds {threshold_fraction} of its peak; gate window undefined"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateReport {
    pub fidelity: f64,
    pub phase_table: PhaseTable,
    pub gate_time_ps: f64,
    pub gate_time_threshold: f64,
    pub trace_dev_max: f64,
    pub min_eig: f64,
    pub unit_mode: UnitMode,
    pub tau_rad_per_ps: f64,
}

/// Full gate characterization: the configured run plus the phase-table runs.
pub fn gate_report(config: &SimConfig) -> Result<GateReport> {
    let (main, table) = rayon::join(|| evolve(config), || phase_table(config));
    let (final_state, series) = main?;
    GateReport::assemble(config, &final_state, &series, table?)
}

impl GateReport {
    /// Builds a report from an already completed main run.
    pub fn assemble(
        config: &SimConfig,
        final_state: &DensityMatrix,
        series: &TimeSeries,
        phase_table: PhaseTable,
    ) -> Result<Self> {
        Ok(GateReport {
            fidelity: gate_fidelity(config, final_state)?,
            phase_table,
            gate_time_ps: gate_time(series, GATE_TIME_THRESHOLD)?,
            gate_time_threshold: GATE_TIME_THRESHOLD,
            trace_dev_max: series.trace_dev_max(),
            min_eig: series.min_eig(),
            unit_mode: config.unit_mode,
            tau_rad_per_ps: config.tau(),
        })
    }
}
