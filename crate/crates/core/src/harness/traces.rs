//! CSV traces and the run summary.
//!
//! Floats are written as `{:.16e}`, rows end in `\n`, and undefined values
//! (metrics before the window fills, flags before cutoffs freeze) are empty
//! fields.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{metric_column, RunOutput, RunSummary, StepRecord};
use crate::detector::{flag_label, DerivativeChannel, MetricId, Verdict};
use crate::error::{io_err, Result};

/// Files written by [`write_traces`], in write order.
pub const TRACE_FILES: [&str; 6] = [
    "sensors.csv",
    "derivatives.csv",
    "residuals.csv",
    "metrics.csv",
    "diagnostic.csv",
    "summary.txt",
];

fn f(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(f).unwrap_or_default()
}

fn table(header: &[String], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn strings(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn xyz(prefix: &str) -> [String; 3] {
    ["x", "y", "z"].map(|a| format!("{prefix}_{a}"))
}

fn kt(r: &StepRecord) -> Vec<String> {
    vec![r.k.to_string(), f(r.t)]
}

pub(crate) fn sensors_csv(records: &[StepRecord]) -> String {
    let mut header = strings(&["k", "t", "theta"]);
    for p in ["r", "omega", "a"] {
        header.extend(xyz(p));
    }
    table(
        &header,
        records.iter().map(|r| {
            let s = &r.sensors;
            let mut row = kt(r);
            row.push(f(s.theta));
            for v in [&s.r, &s.omega, &s.accel] {
                row.extend(v.iter().map(|x| f(*x)));
            }
            row
        }),
    )
}

pub(crate) fn derivatives_csv(records: &[StepRecord]) -> String {
    let mut header = strings(&["k", "t"]);
    for c in DerivativeChannel::ALL {
        header.push(c.name().to_string());
        header.push(format!("{}_eta", c.name()));
        header.push(format!("{}_v2", c.name()));
    }
    table(
        &header,
        records.iter().map(|r| {
            let mut row = kt(r);
            for d in &r.derivatives {
                row.extend([f(d.d_hat), f(d.eta), f(d.v2)]);
            }
            row
        }),
    )
}

pub(crate) fn residuals_csv(records: &[StepRecord]) -> String {
    let mut header = strings(&["k", "t"]);
    for p in ["l_s", "r_s", "l_d", "r_d", "l_a", "r_a"] {
        header.extend(xyz(p));
    }
    table(
        &header,
        records.iter().map(|r| {
            let t = &r.residuals;
            let mut row = kt(r);
            for v in [&t.l_s, &t.r_s, &t.l_d, &t.r_d, &t.l_a, &t.r_a] {
                row.extend(v.iter().map(|x| f(*x)));
            }
            row
        }),
    )
}

pub(crate) fn metrics_csv(records: &[StepRecord]) -> String {
    let mut header = strings(&["k", "t"]);
    header.extend(MetricId::PLANAR.iter().map(|m| metric_column(*m)));
    header.extend(MetricId::PLANAR.iter().map(|m| format!("c_{}", m.name())));
    header.extend(
        MetricId::PLANAR
            .iter()
            .map(|m| format!("flag_{}", m.name())),
    );
    header.extend(MetricId::ALL[6..].iter().map(|m| metric_column(*m)));
    table(
        &header,
        records.iter().map(|r| {
            let fr = &r.frame;
            let mut row = kt(r);
            row.extend((0..6).map(|i| opt(fr.metrics.map(|m| m[i]))));
            row.extend((0..6).map(|i| opt(fr.cutoffs.map(|c| c[i]))));
            row.extend((0..6).map(|i| {
                fr.flags
                    .map(|fl| flag_label(fl[i]).to_string())
                    .unwrap_or_default()
            }));
            row.extend((6..9).map(|i| opt(fr.metrics.map(|m| m[i]))));
            row
        }),
    )
}

pub(crate) fn diagnostic_csv(records: &[StepRecord]) -> String {
    table(
        &strings(&["k", "t", "verdict"]),
        records.iter().map(|r| {
            let mut row = kt(r);
            row.push(
                r.frame
                    .verdict
                    .map(|v| v.name().to_string())
                    .unwrap_or_default(),
            );
            row
        }),
    )
}

pub(crate) fn summary_txt(out: &RunOutput) -> String {
    let s: &RunSummary = &out.summary;
    let mut t = String::new();
    let _ = writeln!(t, "scenario = {}", s.scenario);
    let _ = writeln!(t, "seed = {}", s.seed);
    match &out.scenario.fault() {
        Some(fs) => {
            let _ = writeln!(
                t,
                "fault = {}:{}:{}:{}",
                fs.sensor.name(),
                fs.kind.name(),
                f(fs.magnitude),
                f(fs.start_time)
            );
        }
        None => {
            let _ = writeln!(t, "fault = none");
        }
    }
    let _ = writeln!(t, "steps_completed = {}", s.steps_completed);
    match &s.aborted {
        Some(a) => {
            let _ = writeln!(t, "outcome = aborted");
            let _ = writeln!(t, "abort_step = {}", a.step);
            let _ = writeln!(t, "abort_reason = {}", a.reason);
        }
        None => {
            let _ = writeln!(t, "outcome = completed");
        }
    }
    for (i, m) in MetricId::PLANAR.iter().enumerate() {
        let _ = writeln!(t, "cutoff_{} = {}", m.name(), opt(s.cutoffs.map(|c| c[i])));
    }
    for (i, m) in MetricId::PLANAR.iter().enumerate() {
        let v = s.first_ac[i].map(|k| k.to_string()).unwrap_or_default();
        let _ = writeln!(t, "first_ac_{} = {v}", m.name());
    }
    for (i, m) in MetricId::ALL.iter().enumerate() {
        let _ = writeln!(
            t,
            "final_{} = {}",
            metric_column(*m),
            opt(s.final_metrics.map(|v| v[i]))
        );
    }
    let _ = writeln!(t, "classified_steps = {}", s.classified_steps);
    for v in Verdict::ALL {
        let _ = writeln!(t, "count_{} = {}", v.name(), s.count(v));
    }
    let _ = writeln!(
        t,
        "final_verdict = {}",
        s.final_verdict.map(|v| v.name()).unwrap_or("")
    );
    for (label, v) in [("alarm", &s.alarm), ("settled", &s.settled)] {
        match v {
            Some(sv) => {
                let _ = writeln!(t, "{label}_verdict = {}", sv.verdict.name());
                let _ = writeln!(t, "{label}_onset = {}", sv.onset);
                let _ = writeln!(t, "{label}_confirmed = {}", sv.confirmed);
            }
            None => {
                let _ = writeln!(t, "{label}_verdict = ");
                let _ = writeln!(t, "{label}_onset = ");
                let _ = writeln!(t, "{label}_confirmed = ");
            }
        }
    }
    t
}

/// Writes all trace files into `dir`, creating it if needed. Returns the
/// paths written.
pub fn write_traces(out: &RunOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let r = &out.records;
    let bodies = [
        sensors_csv(r),
        derivatives_csv(r),
        residuals_csv(r),
        metrics_csv(r),
        diagnostic_csv(r),
        summary_txt(out),
    ];
    let mut written = Vec::with_capacity(TRACE_FILES.len());
    for (name, body) in TRACE_FILES.iter().zip(bodies) {
        let path = dir.join(name);
        fs::write(&path, body).map_err(io_err(&path))?;
        written.push(path);
    }
    Ok(written)
}
