// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

//! Self-check suite: integrator output against the reference solutions.

use serde::Serialize;

use crate::dynamics::{convergence_check, evolve_observed, InitialState, SimConfig};
use crate::oracles::{
    damped_two_level, dark_state, dot1_sector_hamiltonian, embed_dark_state, staircase_propagate, three_level_rabi,
    ThreeLevelParams,
};
use crate::pulses::{pulse_area, PulseShape};
use crate::statespace::{BasisState, DensityMatrix, StateVector, DIM};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Measured discrepancy; passes when below `threshold`.
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

impl Check {
    fn new(name: &str, value: f64, threshold: f64, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed: value < threshold,
            value,
            threshold,
            detail,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {:<20} {:.3e} (< {:.0e}) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.threshold,
            self.detail
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Step for the dt / dt÷2 convergence comparison.
    pub convergence_dt_ps: f64,
    /// Debug hook: flips the sign of τ in the simulated three-level run.
    pub corrupt_tau_sign: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            convergence_dt_ps: 1e-3,
            corrupt_tau_sign: false,
        }
    }
}

fn max_diff(a: &mut f64, d: f64) {
    *a = if d.is_nan() { f64::INFINITY } else { a.max(d) };
}

fn check_dark_state() -> Result<Check> {
    let tau = SimConfig::default().tau();
    let drive = PulseShape::default_dot1(1.0);
    let mut worst: f64 = 0.0;
    for omega1 in [drive.amplitude, drive.value(20.0), 0.5] {
        let d = embed_dark_state(&dark_state(omega1, tau)?);
        let hd = dot1_sector_hamiltonian(omega1, tau).apply(&d);
        max_diff(&mut worst, hd.norm());
        max_diff(&mut worst, d[1].norm());
    }
    Ok(Check::new("dark_state", worst, 1e-12, "|H d| and trion weight".into()))
}

fn check_pulse_area() -> Check {
    let d = SimConfig::default();
    let area = pulse_area(&d.pulse2, d.t_start_ps, d.t_end_ps);
    Check::new(
        "pulse2_area",
        (area - std::f64::consts::PI).abs(),
        1e-9,
        format!("area {area:.15}"),
    )
}

fn check_three_level(corrupt_tau_sign: bool) -> Result<Check> {
    let (tau, omega) = (2.0, 10.0);
    let sim_tau = if corrupt_tau_sign { -tau } else { tau };
    let cfg = SimConfig {
        pulse1: PulseShape::off(),
        pulse2: PulseShape::constant(omega),
        t_start_ps: 0.0,
        t_end_ps: 2.0,
        dt_ps: 2e-4,
        sample_stride: 10,
        initial_state: InitialState::Basis(BasisState::GroundUpDown),
        ..SimConfig::default().closed_system().with_tau_rad_per_ps(sim_tau)
    };
    let slots = [BasisState::GroundUpDown, BasisState::Trion2, BasisState::Indirect2];
    let mut worst: f64 = 0.0;
    let mut count = 0;
    evolve_observed(&cfg, |s| {
        let small = three_level_rabi(ThreeLevelParams { tau, omega, t: s.t });
        let mut psi = StateVector::zeros(DIM);
        for (k, b) in slots.iter().enumerate() {
            psi[b.index()] = small[k];
        }
        max_diff(&mut worst, s.rho.max_abs_diff(&DensityMatrix::from_pure(&psi)));
        count += 1;
    })?;
    Ok(Check::new(
        "three_level_rabi",
        worst,
        1e-9,
        format!("{count} samples, max |ρ − ψψ†|"),
    ))
}

fn check_damping() -> Result<Check> {
    let gamma = 0.5;
    let cfg = SimConfig {
        gamma2_per_ps: gamma,
        t_start_ps: 0.0,
        t_end_ps: 4.0,
        initial_state: InitialState::Basis(BasisState::Trion2),
        ..SimConfig::default().without_couplings()
    };
    let mut worst: f64 = 0.0;
    evolve_observed(&cfg, |s| {
        let p = damped_two_level(gamma, s.t);
        max_diff(&mut worst, (s.rho.population(BasisState::Trion2) - p).abs());
        max_diff(
            &mut worst,
            (s.rho.population(BasisState::GroundUpDown) - (1.0 - p)).abs(),
        );
    })?;
    Ok(Check::new("damping_law", worst, 1e-9, format!("gamma {gamma} ps^-1")))
}

fn check_superoperator() -> Result<Check> {
    let stair = 5e-4;
    let cfg = SimConfig {
        t_start_ps: -10.0,
        t_end_ps: 10.0,
        dt_ps: stair,
        sample_stride: 100,
        staircase_ps: Some(stair),
        ..SimConfig::default()
    };
    let mut rk4 = Vec::new();
    evolve_observed(&cfg, |s| rk4.push((s.t, s.rho.clone())))?;
    let mut worst: f64 = 0.0;
    let mut k = 0;
    staircase_propagate(&cfg, |t, rho| {
        k += 1;
        if k % cfg.sample_stride == 0 {
            match rk4.iter().find(|(ts, _)| (ts - t).abs() < 1e-9) {
                Some((_, r)) => max_diff(&mut worst, r.max_abs_diff(rho)),
                None => worst = f64::INFINITY,
            }
        }
    })?;
    Ok(Check::new(
        "expm_vs_rk4",
        worst,
        1e-8,
        format!("staircase {stair} ps on [-10, 10] ps"),
    ))
}

fn check_convergence(dt: f64) -> Result<Check> {
    let cfg = SimConfig {
        dt_ps: dt,
        sample_stride: ((0.1 / dt).round() as usize).max(1),
        ..SimConfig::default()
    };
    let r = convergence_check(&cfg)?;
    Ok(Check::new(
        "dt_convergence",
        r.fidelity_diff.max(r.max_population_diff),
        1e-6,
        format!(
            "dt {dt} ps: fidelity {:.12} vs {:.12}, population drift {:.3e}",
            r.fidelity_coarse, r.fidelity_fine, r.max_population_diff
        ),
    ))
}

/// Runs every check. A check that errors out is reported as failed.
pub fn run_checks(opts: &VerifyOptions) -> Vec<Check> {
    let failed = |name: &str, e: crate::Error| Check {
        name: name.to_string(),
        passed: false,
        value: f64::INFINITY,
        threshold: 0.0,
        detail: e.to_string(),
    };
    let attempts: Vec<(&str, Result<Check>)> = vec![
        ("dark_state", check_dark_state()),
        ("pulse2_area", Ok(check_pulse_area())),
        ("three_level_rabi", check_three_level(opts.corrupt_tau_sign)),
        ("damping_law", check_damping()),
        ("expm_vs_rk4", check_superoperator()),
        ("dt_convergence", check_convergence(opts.convergence_dt_ps)),
    ];
    attempts
        .into_iter()
        .map(|(name, r)| r.unwrap_or_else(|e| failed(name, e)))
        .collect()
}
