// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance run: one line per criterion, exit status 1 if any fails.
//! Criteria run one after another so the runtime bounds are measured on an
//! otherwise idle process.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use qdm_cphase::dynamics::{convergence_check, evolve, evolve_observed, DecayAttachment, InitialState, SimConfig};
use qdm_cphase::metrics::{gate_fidelity, gate_report, gate_time, GateReport, GATE_TIME_THRESHOLD};
use qdm_cphase::oracles::{staircase_propagate, three_level_rabi, ThreeLevelParams};
use qdm_cphase::pulses::{pulse_area, PulseShape, UnitMode};
use qdm_cphase::statespace::BasisState;
use qdm_cphase::sweep::{run_sweep, SweepParameter, SweepSpec, SweepValue};
use qdm_cphase::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    /// Admissible outcome that is a report rather than a pass.
    Report,
}

struct Outcome {
    status: Status,
    summary: String,
    notes: Vec<String>,
}

impl Outcome {
    fn check(passed: bool, summary: String) -> Self {
        Self {
            status: if passed { Status::Pass } else { Status::Fail },
            summary,
            notes: Vec::new(),
        }
    }

    fn note(mut self, line: String) -> Self {
        self.notes.push(line);
        self
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn criterion_1() -> Result<Outcome> {
    let (tau, omega) = (2.0, 10.0);
    let cfg = SimConfig {
        pulse1: PulseShape::off(),
        pulse2: PulseShape::constant(omega),
        t_start_ps: 0.0,
        t_end_ps: 2.0,
        dt_ps: 2e-4,
        sample_stride: 10,
        initial_state: InitialState::Basis(BasisState::GroundUpDown),
        ..SimConfig::default().closed_system().with_tau_rad_per_ps(tau)
    };
    let slots = [BasisState::GroundUpDown, BasisState::Trion2, BasisState::Indirect2];
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    evolve_observed(&cfg, |s| {
        if s.t == cfg.t_start_ps {
            return;
        }
        samples += 1;
        let amp = three_level_rabi(ThreeLevelParams { tau, omega, t: s.t });
        for b in BasisState::ALL {
            let exact = slots.iter().position(|&x| x == b).map_or(0.0, |k| amp[k].norm_sqr());
            let d = (s.rho.population(b) - exact).abs();
            worst = if d.is_nan() { f64::INFINITY } else { worst.max(d) };
        }
    })?;
    let elapsed = start.elapsed();
    Ok(Outcome::check(
        worst < 1e-9 && samples >= 1000 && elapsed < Duration::from_secs(1),
        format!(
            "three-level closed form, tau=2 omega=10 rad/ps: max |dp| = {worst:.2e} (< 1e-9) over {samples} times, {:.3} s (< 1 s)",
            secs(elapsed)
        ),
    ))
}

fn criterion_2() -> Result<Outcome> {
    let stair = 5e-4;
    let stride = 10;
    let cfg = SimConfig {
        dt_ps: stair,
        sample_stride: stride,
        staircase_ps: Some(stair),
        ..SimConfig::default()
    };
    let start = Instant::now();
    let mut rk4 = Vec::new();
    evolve_observed(&cfg, |s| rk4.push(s.rho.clone()))?;
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    let mut k = 0;
    staircase_propagate(&cfg, |_, rho| {
        k += 1;
        if k % stride == 0 {
            let d = rk4.get(k / stride).map_or(f64::INFINITY, |r| r.max_abs_diff(rho));
            worst = if d.is_nan() { f64::INFINITY } else { worst.max(d) };
            compared += 1;
        }
    })?;
    let elapsed = start.elapsed();
    Ok(Outcome::check(
        worst < 1e-8 && elapsed < Duration::from_secs(60),
        format!(
            "expm staircase ({stair} ps stairs, [-60, 60] ps) vs RK4: max |drho| = {worst:.2e} (< 1e-8) at {compared} times, {:.1} s (< 60 s)",
            secs(elapsed)
        ),
    ))
}

fn criterion_3() -> Result<Outcome> {
    let cfg = SimConfig::default();
    let (_, series) = evolve(&cfg)?;
    let guu = &series.populations[BasisState::GroundUpUp.index()];
    let guu_dev = guu.iter().map(|p| (p - 0.25).abs()).fold(0.0, f64::max);
    let (trace, min_eig) = (series.trace_dev_max(), series.min_eig());
    Ok(Outcome::check(
        trace < 1e-9 && min_eig > -1e-8 && guu_dev < 1e-9,
        format!(
            "default run, {} samples: max |tr-1| = {trace:.2e} (< 1e-9), min eig = {min_eig:.2e} (> -1e-8), max |p_uu - 0.25| = {guu_dev:.2e} (< 1e-9)",
            series.len()
        ),
    ))
}

fn criterion_4() -> Result<Outcome> {
    let cfg = SimConfig::default();
    let area = pulse_area(&cfg.pulse2, cfg.t_start_ps, cfg.t_end_ps);
    let err = (area - PI).abs();
    Ok(Outcome::check(
        err < 1e-9,
        format!("quadrature area of pulse 2 over [-60, 60] ps = {area:.15}, |area - pi| = {err:.2e} (< 1e-9)"),
    ))
}

fn criterion_5() -> Result<Outcome> {
    let base = SimConfig {
        pulse2: PulseShape::off(),
        initial_state: InitialState::Basis(BasisState::GroundDownDown),
        ..SimConfig::default().closed_system()
    };
    let cfg = SimConfig {
        sample_stride: 1,
        ..base.clone()
    };
    let mut peak_rk4: f64 = 0.0;
    let summary = evolve_observed(&cfg, |s| {
        peak_rk4 = peak_rk4.max(s.rho.population(BasisState::Trion1Down))
    })?;
    let ret = summary.final_state.population(BasisState::GroundDownDown);

    let stair = 2e-3;
    let calib = SimConfig {
        staircase_ps: Some(stair),
        ..base
    };
    let mut peak_expm: f64 = 0.0;
    staircase_propagate(&calib, |_, rho| {
        peak_expm = peak_expm.max(rho.population(BasisState::Trion1Down))
    })?;
    let calib_gap = (peak_rk4 - peak_expm).abs();
    Ok(Outcome::check(
        ret > 0.99 && peak_rk4 < 0.1 && calib_gap < 1e-6,
        format!(
            "pulse 2 off, gamma=0, |dd> in: return = {ret:.9} (> 0.99), peak T1_d = {peak_rk4:.6e} (< 0.1), expm staircase peak = {peak_expm:.6e} (gap {calib_gap:.1e} < 1e-6)"
        ),
    ))
}

fn phase_line(r: &GateReport) -> String {
    let cells: Vec<String> = r
        .phase_table
        .entries
        .iter()
        .map(|e| {
            format!(
                "{}: p={:.6} z={:+.6}{:+.6}i",
                e.state, e.population, e.overlap.re, e.overlap.im
            )
        })
        .collect();
    cells.join("; ")
}

fn criterion_6() -> Result<Outcome> {
    let mut rows = Vec::new();
    for mode in UnitMode::BOTH {
        let cfg = SimConfig::default().with_unit_mode(mode);
        let report = gate_report(&cfg)?;
        let conv = convergence_check(&cfg)?;
        rows.push((mode, report, conv));
    }
    let reproduced = rows
        .iter()
        .any(|(_, r, c)| (0.96..=1.0).contains(&r.fidelity) && c.fidelity_diff < 1e-6);
    let drifts_ok = rows.iter().all(|(_, _, c)| c.fidelity_diff < 1e-6);
    let figures: Vec<String> = rows
        .iter()
        .map(|(m, r, c)| {
            format!(
                "{} F = {:.9} (dt-halving drift {:.1e})",
                m.as_str(),
                r.fidelity,
                c.fidelity_diff
            )
        })
        .collect();
    let mut out = Outcome {
        status: if reproduced {
            Status::Pass
        } else if drifts_ok {
            Status::Report
        } else {
            Status::Fail
        },
        summary: format!(
            "{}; target F in [0.96, 1.0], reference 0.98{}",
            figures.join(", "),
            if reproduced { "" } else { " -> discrepancy report" }
        ),
        notes: Vec::new(),
    };
    for (m, r, c) in &rows {
        out = out
            .note(format!("{} phase table: {}", m.as_str(), phase_line(r)))
            .note(format!(
                "{} convergence: dt {} vs {} ps, F {:.12} vs {:.12}, population drift {:.2e}",
                m.as_str(),
                c.dt_ps,
                c.dt_ps / 2.0,
                c.fidelity_coarse,
                c.fidelity_fine,
                c.max_population_diff
            ));
    }
    Ok(out)
}

fn gamma2_scan(attachment: DecayAttachment) -> Result<Vec<(f64, f64)>> {
    let values = [0.0, 0.25, 0.5, 1.0, 1.25];
    let base = SimConfig {
        gamma2_attachment: attachment,
        ..SimConfig::default()
    };
    let spec = SweepSpec::new(
        base,
        SweepParameter::Gamma2,
        values.iter().map(|&v| SweepValue::Number(v)).collect(),
    );
    let mut out = Vec::new();
    for (v, p) in values.iter().zip(run_sweep(&spec)?) {
        let f = match (p.report, p.error) {
            (Some(r), _) => r.fidelity,
            (None, e) => return Err(qdm_cphase::Error::Domain(e.unwrap_or_default())),
        };
        out.push((*v, f));
    }
    Ok(out)
}

fn non_increasing(scan: &[(f64, f64)]) -> Option<(f64, f64)> {
    scan.windows(2)
        .find(|w| w[1].1 > w[0].1 + 1e-9)
        .map(|w| (w[0].0, w[1].0))
}

fn fmt_scan(scan: &[(f64, f64)]) -> String {
    let cells: Vec<String> = scan.iter().map(|(g, f)| format!("{g}: {f:.9}")).collect();
    cells.join(", ")
}

fn criterion_7() -> Result<Outcome> {
    let trion = gamma2_scan(DecayAttachment::Trion)?;
    let broken = non_increasing(&trion);
    let at_125 = trion.last().unwrap().1;
    let summary = match broken {
        None => format!("gamma2 scan (ns^-1 -> F) {}; non-increasing", fmt_scan(&trion)),
        Some((a, b)) => format!(
            "gamma2 scan (ns^-1 -> F) {}; F rises from gamma2 = {a} to {b}",
            fmt_scan(&trion)
        ),
    };
    let indirect = gamma2_scan(DecayAttachment::Indirect)?;
    let ind_status = if non_increasing(&indirect).is_none() {
        "non-increasing"
    } else {
        "not monotone"
    };
    let zero_gamma = {
        let cfg = SimConfig::default().closed_system();
        let (fin, _) = evolve(&cfg)?;
        gate_fidelity(&cfg, &fin)?
    };
    Ok(Outcome::check(broken.is_none(), summary)
        .note(format!(
            "F at gamma2 = 1.25 ns^-1: {at_125:.9} (reference 0.998, no threshold)"
        ))
        .note(format!(
            "gamma2 attached to the indirect exciton instead: {} ({ind_status})",
            fmt_scan(&indirect)
        ))
        .note(format!("all rates zero: F = {zero_gamma:.9}")))
}

fn criterion_8() -> Result<Outcome> {
    let (_, series) = evolve(&SimConfig::default())?;
    let tg = gate_time(&series, GATE_TIME_THRESHOLD)?;
    Ok(Outcome::check(
        (80.0..=120.0).contains(&tg),
        format!("gate window at {GATE_TIME_THRESHOLD} of peak drive = {tg:.3} ps (in [80, 120] ps)"),
    ))
}

type Criterion = fn() -> Result<Outcome>;

fn main() -> ExitCode {
    let criteria: [(u8, &str, Criterion); 8] = [
        (1, "three-level oracle", criterion_1),
        (2, "superoperator oracle", criterion_2),
        (3, "structural invariants", criterion_3),
        (4, "pulse area", criterion_4),
        (5, "adiabatic return", criterion_5),
        (6, "fidelity reproduction", criterion_6),
        (7, "gamma2 monotonicity", criterion_7),
        (8, "gate time", criterion_8),
    ];
    let mut failures = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome = run().unwrap_or_else(|e| Outcome::check(false, format!("error: {e}")));
        let label = match outcome.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Report => "REPORT",
        };
        if outcome.status == Status::Fail {
            failures += 1;
        }
        println!(
            "criterion {id} {label:<6} {name}: {} [{:.1} s]",
            outcome.summary,
            secs(start.elapsed())
        );
        for n in &outcome.notes {
            println!("    {n}");
        }
    }
    println!("acceptance: {} of 8 criteria failed", failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
