// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

//! Time stepping for the master equation.
//!
//! Both integrators symmetrize ρ after every accepted step and never
//! renormalize the trace; trace drift and the smallest eigenvalue are
//! recorded at every sample instead.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{IntegratorKind, LindbladGenerator, SimConfig};
use crate::metrics::gate_fidelity;
use crate::statespace::{ComplexMatrix, DensityMatrix, DIM};
use crate::{Error, Result};

/// Step-size floor of the adaptive integrator.
pub const MIN_ADAPTIVE_STEP_PS: f64 = 1e-9;

/// State handed to an observer at each sample time.
#[derive(Debug)]
pub struct Sample<'a> {
    pub t: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub rho: &'a DensityMatrix,
    /// |tr ρ − 1|
    pub trace_dev: f64,
    pub purity: f64,
    pub min_eig: f64,
}

#[derive(Debug, Clone)]
pub struct EvolveSummary {
    pub final_state: DensityMatrix,
    pub trace_dev_max: f64,
    pub min_eig: f64,
    pub steps: usize,
    pub samples: usize,
}

/// Sampled trajectory. All columns share one length.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub omega1: Vec<f64>,
    pub omega2: Vec<f64>,
    /// `populations[state][sample]`
    pub populations: Vec<Vec<f64>>,
    pub trace_dev: Vec<f64>,
    pub purity: Vec<f64>,
    pub min_eig: Vec<f64>,
}

impl TimeSeries {
    fn with_capacity(n: usize) -> Self {
        Self {
            times: Vec::with_capacity(n),
            omega1: Vec::with_capacity(n),
            omega2: Vec::with_capacity(n),
            populations: (0..DIM).map(|_| Vec::with_capacity(n)).collect(),
            trace_dev: Vec::with_capacity(n),
            purity: Vec::with_capacity(n),
            min_eig: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, s: &Sample) {
        if self.populations.is_empty() {
            self.populations = vec![Vec::new(); s.rho.dim()];
        }
        self.times.push(s.t);
        self.omega1.push(s.omega1);
        self.omega2.push(s.omega2);
        for (k, col) in self.populations.iter_mut().enumerate() {
            col.push(s.rho.matrix()[(k, k)].re);
        }
        self.trace_dev.push(s.trace_dev);
        self.purity.push(s.purity);
        self.min_eig.push(s.min_eig);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn trace_dev_max(&self) -> f64 {
        self.trace_dev.iter().copied().fold(0.0, nan_max)
    }

    pub fn min_eig(&self) -> f64 {
        self.min_eig.iter().copied().fold(f64::INFINITY, nan_min)
    }
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn nan_min(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.min(b)
    }
}

struct Monitor<F> {
    observer: F,
    trace_dev_max: f64,
    min_eig: f64,
    samples: usize,
}

impl<F: FnMut(&Sample)> Monitor<F> {
    fn record(&mut self, config: &SimConfig, t: f64, rho: &DensityMatrix) {
        let trace_dev = (rho.trace() - C64::new(1.0, 0.0)).norm();
        let min_eig = rho.min_eigenvalue();
        self.trace_dev_max = nan_max(self.trace_dev_max, trace_dev);
        self.min_eig = nan_min(self.min_eig, min_eig);
        self.samples += 1;
        (self.observer)(&Sample {
            t,
            omega1: config.pulse1.value(t),
            omega2: config.pulse2.value(t),
            rho,
            trace_dev,
            purity: rho.purity(),
            min_eig,
        });
    }
}

/// Fixed-step grid: step `k` spans `[start(k), start(k+1)]`, the last step
/// ends exactly at `t_end` and may be shorter than `dt`.
struct FixedGrid {
    t_start: f64,
    t_end: f64,
    dt: f64,
    steps: usize,
}

impl FixedGrid {
    fn new(config: &SimConfig) -> Self {
        let span = config.t_end_ps - config.t_start_ps;
        let ratio = span / config.dt_ps;
        let whole = (ratio + 1e-9).floor();
        let steps = if ratio - whole > 1e-9 {
            whole as usize + 1
        } else {
            (whole as usize).max(1)
        };
        Self {
            t_start: config.t_start_ps,
            t_end: config.t_end_ps,
            dt: config.dt_ps,
            steps,
        }
    }

    fn time(&self, k: usize) -> f64 {
        if k >= self.steps {
            self.t_end
        } else {
            self.t_start + k as f64 * self.dt
        }
    }
}

struct Workspace {
    k: [ComplexMatrix; 7],
    tmp: ComplexMatrix,
}

impl Workspace {
    fn new() -> Self {
        Self {
            k: std::array::from_fn(|_| ComplexMatrix::zeros(DIM)),
            tmp: ComplexMatrix::zeros(DIM),
        }
    }
}

/// `out = y + Σ coeff_i · k_i`
fn combine(out: &mut ComplexMatrix, y: &ComplexMatrix, terms: &[(f64, &ComplexMatrix)]) {
    let o = out.as_mut_slice();
    o.copy_from_slice(y.as_slice());
    for &(c, k) in terms {
        if c == 0.0 {
            continue;
        }
        for (a, b) in o.iter_mut().zip(k.as_slice()) {
            *a += c * b;
        }
    }
}

fn rk4_step(gen: &LindbladGenerator, t: f64, h: f64, rho: &mut ComplexMatrix, ws: &mut Workspace) {
    let [k1, k2, k3, k4, ..] = &mut ws.k;
    gen.rhs_into(t, rho, k1);
    combine(&mut ws.tmp, rho, &[(0.5 * h, k1)]);
    gen.rhs_into(t + 0.5 * h, &ws.tmp, k2);
    combine(&mut ws.tmp, rho, &[(0.5 * h, k2)]);
    gen.rhs_into(t + 0.5 * h, &ws.tmp, k3);
    combine(&mut ws.tmp, rho, &[(h, k3)]);
    gen.rhs_into(t + h, &ws.tmp, k4);
    let s = h / 6.0;
    let (a, b, c, d) = (k1.as_slice(), k2.as_slice(), k3.as_slice(), k4.as_slice());
    for (i, r) in rho.as_mut_slice().iter_mut().enumerate() {
        *r += s * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]);
    }
}

// Dormand–Prince 5(4) tableau.
const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand–Prince attempt. Leaves the fifth-order solution in `ws.tmp`
/// and returns the max-entry local error estimate.
fn dp45_attempt(gen: &LindbladGenerator, t: f64, h: f64, rho: &ComplexMatrix, ws: &mut Workspace) -> f64 {
    for stage in 0..7 {
        {
            let (done, _) = ws.k.split_at(stage);
            let terms: Vec<(f64, &ComplexMatrix)> = (0..stage).map(|j| (h * DP_A[stage][j], &done[j])).collect();
            combine(&mut ws.tmp, rho, &terms);
        }
        let (_, rest) = ws.k.split_at_mut(stage);
        gen.rhs_into(t + DP_C[stage] * h, &ws.tmp, &mut rest[0]);
    }
    // ws.tmp holds the stage-7 input, which is the fifth-order solution.
    let mut err: f64 = 0.0;
    for i in 0..DIM * DIM {
        let mut e = C64::new(0.0, 0.0);
        for (j, k) in ws.k.iter().enumerate() {
            e += (DP_A[6].get(j).copied().unwrap_or(0.0) - DP_B4[j]) * k.as_slice()[i];
        }
        let e = (h * e).norm();
        err = if e.is_nan() { f64::NAN } else { err.max(e) };
    }
    err
}

/// Integrates the master equation over `[t_start, t_end]`, calling `observer`
/// at `t_start`, every `sample_stride` nominal steps, and at `t_end`.
pub fn evolve_observed(config: &SimConfig, observer: impl FnMut(&Sample)) -> Result<EvolveSummary> {
    config.validate()?;
    let mut gen = LindbladGenerator::new(config)?;
    let mut monitor = Monitor {
        observer,
        trace_dev_max: 0.0,
        min_eig: f64::INFINITY,
        samples: 0,
    };
    let mut rho = config.initial_state.density();
    monitor.record(config, config.t_start_ps, &rho);
    let steps = match config.integrator {
        IntegratorKind::Rk4Fixed => run_rk4(config, &mut gen, &mut rho, &mut monitor),
        IntegratorKind::Rk45Adaptive => run_dp45(config, &mut gen, &mut rho, &mut monitor)?,
    };
    Ok(EvolveSummary {
        final_state: rho,
        trace_dev_max: monitor.trace_dev_max,
        min_eig: monitor.min_eig,
        steps,
        samples: monitor.samples,
    })
}

fn run_rk4<F: FnMut(&Sample)>(
    config: &SimConfig,
    gen: &mut LindbladGenerator,
    rho: &mut DensityMatrix,
    monitor: &mut Monitor<F>,
) -> usize {
    let grid = FixedGrid::new(config);
    let stairs = config.staircase();
    let mut ws = Workspace::new();
    for k in 0..grid.steps {
        let (t0, t1) = (grid.time(k), grid.time(k + 1));
        if let Some(s) = &stairs {
            gen.hold_drive_at(Some(s.stair(s.index_at(t0)).2));
        }
        rk4_step(gen, t0, t1 - t0, rho.matrix_mut(), &mut ws);
        rho.symmetrize();
        if (k + 1) % config.sample_stride == 0 || k + 1 == grid.steps {
            monitor.record(config, t1, rho);
        }
    }
    grid.steps
}

fn run_dp45<F: FnMut(&Sample)>(
    config: &SimConfig,
    gen: &mut LindbladGenerator,
    rho: &mut DensityMatrix,
    monitor: &mut Monitor<F>,
) -> Result<usize> {
    let tol = config.adaptive_tol;
    let spacing = config.dt_ps * config.sample_stride as f64;
    let stairs = config.staircase();
    let mut ws = Workspace::new();
    let mut t = config.t_start_ps;
    let mut h = config.dt_ps;
    let mut next_sample = 1usize;
    let mut accepted = 0usize;
    while t < config.t_end_ps {
        let sample_time = (config.t_start_ps + next_sample as f64 * spacing).min(config.t_end_ps);
        let mut stop = sample_time;
        if let Some(s) = &stairs {
            let k = s.index_at(t);
            let (_, end, mid) = s.stair(k);
            gen.hold_drive_at(Some(mid));
            stop = stop.min(end);
        }
        let reaches_stop = h >= stop - t;
        let step = if reaches_stop { stop - t } else { h };
        let err = dp45_attempt(gen, t, step, rho.matrix(), &mut ws);
        let factor = if err.is_nan() {
            0.2
        } else if err == 0.0 {
            5.0
        } else {
            (0.9 * (tol / err).powf(0.2)).clamp(0.2, 5.0)
        };
        if err <= tol {
            rho.matrix_mut().as_mut_slice().copy_from_slice(ws.tmp.as_slice());
            rho.symmetrize();
            accepted += 1;
            t = if reaches_stop { stop } else { t + step };
            if reaches_stop && stop == sample_time {
                monitor.record(config, t, rho);
                next_sample += 1;
            }
            // do not let a short clamped step shrink the controller's step
            h = if reaches_stop {
                h.max(step * factor)
            } else {
                step * factor
            };
        } else {
            h = step * factor;
            if h < MIN_ADAPTIVE_STEP_PS {
                return Err(Error::Integration {
                    t_ps: t,
                    message: format!("step size {h:e} ps fell below {MIN_ADAPTIVE_STEP_PS:e} ps"),
                });
            }
        }
    }
    Ok(accepted)
}

/// Integrates and collects the sampled trajectory.
pub fn evolve(config: &SimConfig) -> Result<(DensityMatrix, TimeSeries)> {
    let expected = FixedGrid::new(config).steps / config.sample_stride.max(1) + 2;
    let mut series = TimeSeries::with_capacity(expected);
    let summary = evolve_observed(config, |s| series.push(s))?;
    Ok((summary.final_state, series))
}

/// Agreement between runs at `dt` and `dt/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub dt_ps: f64,
    /// Largest population difference over the shared sample times.
    pub max_population_diff: f64,
    pub fidelity_coarse: f64,
    pub fidelity_fine: f64,
    pub fidelity_diff: f64,
}

/// Runs the fixed-step integrator at `dt` and `dt/2` (the adaptive setting,
/// if selected, is replaced by RK4 here). Non-finite differences are reported
/// as infinity.
pub fn convergence_check(config: &SimConfig) -> Result<ConvergenceReport> {
    let coarse_cfg = SimConfig {
        integrator: IntegratorKind::Rk4Fixed,
        ..config.clone()
    };
    let fine_cfg = SimConfig {
        dt_ps: config.dt_ps / 2.0,
        sample_stride: config.sample_stride * 2,
        ..coarse_cfg.clone()
    };
    let (coarse_final, coarse) = evolve(&coarse_cfg)?;
    let (fine_final, fine) = evolve(&fine_cfg)?;
    let mut max_diff: f64 = 0.0;
    for (a, b) in coarse.populations.iter().zip(&fine.populations) {
        for (x, y) in a.iter().zip(b) {
            let d = (x - y).abs();
            max_diff = if d.is_finite() { max_diff.max(d) } else { f64::INFINITY };
        }
    }
    if coarse.len() != fine.len() {
        max_diff = f64::INFINITY;
    }
    let fidelity_coarse = gate_fidelity(&coarse_cfg, &coarse_final)?;
    let fidelity_fine = gate_fidelity(&fine_cfg, &fine_final)?;
    let mut fidelity_diff = (fidelity_coarse - fidelity_fine).abs();
    if !fidelity_diff.is_finite() {
        fidelity_diff = f64::INFINITY;
    }
    Ok(ConvergenceReport {
        dt_ps: config.dt_ps,
        max_population_diff: max_diff,
        fidelity_coarse,
        fidelity_fine,
        fidelity_diff,
    })
}
