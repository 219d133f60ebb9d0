// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

//! CSV writers. Numbers use Rust's float formatting (never the locale) with
//! 17 significant digits; rows end in `\n`.

use std::io::{self, Write};

use crate::dynamics::{Sample, TimeSeries};
use crate::statespace::BasisState;
use crate::sweep::{SweepOutput, SweepPoint};

/// 17 significant digits, round-trips every finite `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn timeseries_header() -> String {
    let mut cols = vec!["t_ps".to_string(), "omega1".into(), "omega2".into()];
    cols.extend(BasisState::ALL.iter().map(|s| format!("pop_{}", s.label())));
    cols.push("trace_dev".into());
    cols.push("purity".into());
    cols.join(",")
}

fn write_row(w: &mut impl Write, fields: impl IntoIterator<Item = f64>) -> io::Result<()> {
    let line: Vec<String> = fields.into_iter().map(fmt_f64).collect();
    writeln!(w, "{}", line.join(","))
}

pub fn write_sample(w: &mut impl Write, s: &Sample) -> io::Result<()> {
    let pops = s.rho.populations();
    write_row(
        w,
        [s.t, s.omega1, s.omega2]
            .into_iter()
            .chain(pops)
            .chain([s.trace_dev, s.purity]),
    )
}

pub fn write_timeseries(w: &mut impl Write, series: &TimeSeries) -> io::Result<()> {
    writeln!(w, "{}", timeseries_header())?;
    for i in 0..series.len() {
        write_row(
            w,
            [series.times[i], series.omega1[i], series.omega2[i]]
                .into_iter()
                .chain(series.populations.iter().map(|p| p[i]))
                .chain([series.trace_dev[i], series.purity[i]]),
        )?;
    }
    Ok(())
}

pub fn failure_marker(t_ps: f64, message: &str) -> String {
    format!(
        "# integration failed at t_ps={}: {}",
        fmt_f64(t_ps),
        message.replace('\n', " ")
    )
}

fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_sweep(w: &mut impl Write, outputs: &[SweepOutput], points: &[SweepPoint]) -> io::Result<()> {
    let mut header = vec!["value"];
    header.extend(outputs.iter().map(|o| o.column()));
    header.push("error");
    writeln!(w, "{}", header.join(","))?;
    for p in points {
        let value = match &p.value {
            crate::sweep::SweepValue::Number(x) => fmt_f64(*x),
            crate::sweep::SweepValue::Label(s) => csv_text(s),
        };
        let mut fields = vec![value];
        match &p.report {
            Some(r) => fields.extend(outputs.iter().map(|o| fmt_f64(o.extract(r)))),
            None => fields.extend(outputs.iter().map(|_| String::new())),
        }
        fields.push(p.error.as_deref().map(csv_text).unwrap_or_default());
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}
