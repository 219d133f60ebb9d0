// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.
//!
//! ```text
//! qdm-cphase simulate   --config run.json [--out series.csv] [--report report.json]
//! qdm-cphase verify     [--dt 0.001] [--report checks.json]
//! qdm-cphase gate-table --config run.json [--out table.json] [--analytic]
//! qdm-cphase sweep      --spec sweep.json --out sweep.csv [--summary sweep.json]
//! ```
//!
//! Simulation commands take `--unit-mode {physical|hbar_unity}`. Every file
//! written gets a `<file>.manifest.json` with the resolved configuration.

mod config;
mod emit;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use config::{
    load_config, load_sweep_spec, parse_config, parse_sweep_spec, ConfigFile, PulseFile, RunManifest, SweepEcho,
    SweepFile, TOOL_VERSION,
};
pub use emit::{fmt_f64, timeseries_header, write_sample, write_sweep, write_timeseries};
pub use verify::{run_checks, Check, VerifyOptions};

use crate::dynamics::{evolve_observed, SimConfig, TimeSeries};
use crate::metrics::{gate_report, phase_table, GateReport, PhaseTable};
use crate::pulses::UnitMode;
use crate::sweep::{run_sweep, SweepPoint};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "qdm-cphase",
    version,
    about = "Controlled-phase gate simulator for a quantum-dot molecule"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve one configuration and write the time series.
    Simulate(SimulateArgs),
    /// Run the reference-solution checks.
    Verify(VerifyArgs),
    /// Phase table and fidelity, under both unit modes unless one is pinned.
    GateTable(GateTableArgs),
    /// Scan one configuration field.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Time-series CSV (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Gate report JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub unit_mode: Option<UnitMode>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Step for the convergence check, ps.
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Flip the sign of τ in the three-level run (checks that the check can fail).
    #[arg(long, hide = true)]
    pub corrupt_tau_sign: bool,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GateTableArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output JSON (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub unit_mode: Option<UnitMode>,
    /// Print the ideal gate's table without simulating.
    #[arg(long)]
    pub analytic: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// JSON summary (default `<out>.summary.json`).
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[arg(long)]
    pub unit_mode: Option<UnitMode>,
}

/// What a command achieved when it ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// Completed, but some requested work failed (a check or a sweep point).
    Partial,
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Partial) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config { .. } | Error::Json(_) | Error::Io { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::GateTable(a) => cmd_gate_table(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn finish(w: &mut impl Write, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

fn override_mode(mut cfg: SimConfig, mode: Option<UnitMode>) -> SimConfig {
    if let Some(m) = mode {
        cfg.unit_mode = m;
    }
    cfg
}

fn write_output_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    match path {
        Some(p) => config::write_json(p, value),
        None => {
            let text = serde_json::to_string_pretty(value)?;
            println!("{text}");
            Ok(())
        }
    }
}

fn write_manifests(cfg: &SimConfig, command: &str, outputs: &[PathBuf]) -> Result<()> {
    let manifest = RunManifest::new(cfg, command, outputs);
    for out in outputs {
        manifest.write_beside(out)?;
    }
    Ok(())
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<Outcome> {
    let cfg = override_mode(load_config(&args.config)?, args.unit_mode);
    let outputs: Vec<PathBuf> = args.out.iter().chain(&args.report).cloned().collect();
    write_manifests(&cfg, "simulate", &outputs)?;

    let label = args.out.clone().unwrap_or_else(|| PathBuf::from("<stdout>"));
    let mut sink: Box<dyn Write> = match &args.out {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    writeln!(sink, "{}", timeseries_header()).map_err(|e| Error::io(&label, e))?;
    let mut series = TimeSeries::default();
    let mut io_err = None;
    let run = evolve_observed(&cfg, |s| {
        series.push(s);
        if io_err.is_none() {
            io_err = write_sample(&mut sink, s).err();
        }
    });
    if let Some(e) = io_err {
        return Err(Error::io(&label, e));
    }
    let summary = match run {
        Ok(summary) => summary,
        Err(e) => {
            let t = match &e {
                Error::Integration { t_ps, .. } => *t_ps,
                _ => f64::NAN,
            };
            writeln!(sink, "{}", emit::failure_marker(t, &e.to_string())).map_err(|e| Error::io(&label, e))?;
            finish(&mut sink, &label)?;
            return Err(e);
        }
    };
    finish(&mut sink, &label)?;
    drop(sink);

    if let Some(path) = &args.report {
        let report = GateReport::assemble(&cfg, &summary.final_state, &series, phase_table(&cfg)?)?;
        config::write_json(path, &report)?;
    }
    Ok(Outcome::Success)
}

#[derive(Debug, Serialize)]
struct VerifyReport<'a> {
    passed: bool,
    checks: &'a [Check],
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Outcome> {
    let checks = run_checks(&VerifyOptions {
        convergence_dt_ps: args.dt,
        corrupt_tau_sign: args.corrupt_tau_sign,
    });
    for c in &checks {
        println!("{}", c.line());
    }
    let passed = checks.iter().all(|c| c.passed);
    if let Some(path) = &args.report {
        config::write_json(
            path,
            &VerifyReport {
                passed,
                checks: &checks,
            },
        )?;
        let cfg = SimConfig {
            dt_ps: args.dt,
            ..SimConfig::default()
        };
        write_manifests(&cfg, "verify", std::slice::from_ref(path))?;
    }
    Ok(if passed { Outcome::Success } else { Outcome::Partial })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateTableOutput {
    /// Target table of the ideal gate.
    pub ideal: PhaseTable,
    /// One simulated report per unit mode.
    pub reports: Vec<GateReport>,
}

pub fn gate_table(cfg: &SimConfig, pinned: Option<UnitMode>, analytic: bool) -> Result<GateTableOutput> {
    let modes: Vec<UnitMode> = match pinned {
        Some(m) => vec![m],
        None => UnitMode::BOTH.to_vec(),
    };
    let reports = if analytic {
        Vec::new()
    } else {
        modes
            .iter()
            .map(|&m| gate_report(&cfg.clone().with_unit_mode(m)))
            .collect::<Result<_>>()?
    };
    Ok(GateTableOutput {
        ideal: PhaseTable::analytic(),
        reports,
    })
}

pub fn cmd_gate_table(args: &GateTableArgs) -> Result<Outcome> {
    let cfg = match &args.config {
        Some(p) => load_config(p)?,
        None if args.analytic => SimConfig::default(),
        None => {
            return Err(Error::config(
                "config",
                "--config is required unless --analytic is given",
            ))
        }
    };
    let cfg = override_mode(cfg, args.unit_mode);
    let table = gate_table(&cfg, args.unit_mode, args.analytic)?;
    write_output_json(args.out.as_deref(), &table)?;
    if let Some(out) = &args.out {
        write_manifests(&cfg, "gate-table", std::slice::from_ref(out))?;
        for r in &table.reports {
            println!("{:<10} F = {:.12}", r.unit_mode.as_str(), r.fidelity);
        }
    }
    Ok(Outcome::Success)
}

#[derive(Debug, Serialize)]
struct SweepSummary<'a> {
    parameter: String,
    failed: usize,
    points: &'a [SweepPoint],
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<Outcome> {
    let mut spec = load_sweep_spec(&args.spec)?;
    spec.base = override_mode(spec.base, args.unit_mode);
    let summary_path = args.summary.clone().unwrap_or_else(|| {
        let mut name = args.out.as_os_str().to_owned();
        name.push(".summary.json");
        PathBuf::from(name)
    });
    let outputs = vec![args.out.clone(), summary_path.clone()];
    let mut manifest = RunManifest::new(&spec.base, "sweep", &outputs);
    manifest.sweep = Some(SweepEcho {
        parameter: spec.parameter,
        values: spec.values.clone(),
        outputs: spec.outputs.clone(),
    });
    for out in &outputs {
        manifest.write_beside(out)?;
    }

    let points = run_sweep(&spec)?;
    let mut w = create(&args.out)?;
    write_sweep(&mut w, &spec.outputs, &points).map_err(|e| Error::io(&args.out, e))?;
    finish(&mut w, &args.out)?;
    let failed = points.iter().filter(|p| !p.succeeded()).count();
    config::write_json(
        &summary_path,
        &SweepSummary {
            parameter: spec.parameter.to_string(),
            failed,
            points: &points,
        },
    )?;
    for p in &points {
        match (&p.report, &p.error) {
            (Some(r), _) => println!(
                "{} = {:<12} F = {:.12}",
                spec.parameter,
                p.value.to_string(),
                r.fidelity
            ),
            (None, Some(e)) => println!("{} = {:<12} failed: {e}", spec.parameter, p.value.to_string()),
            (None, None) => unreachable!(),
        }
    }
    Ok(if failed == 0 {
        Outcome::Success
    } else {
        Outcome::Partial
    })
}
