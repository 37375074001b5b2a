//! Flat `key = value` scenario files.
//!
//! ```text
//! # comments run to end of line
//! base = example1            # optional, must come first
//! seed = 7
//! trajectory.heading = line_of_sight
//! single.alpha = 0.5
//! faults = z_gyro:bias:1.0:40
//! ```
//!
//! Keys not listed in [`KEYS`] are rejected. Syntax problems report the line;
//! out-of-range values report the key.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{heading_name, spacing_name, DiffSettings, Scenario};
use crate::differentiator::EtaSpacing;
use crate::error::{io_err, Error, Result};
use crate::simulator::{FaultKind, FaultSpec, HeadingMode, Sensor};

/// Every accepted key.
pub const KEYS: &[&str] = &[
    "base",
    "name",
    "seed",
    "delta",
    "latch_steps",
    "output_dir",
    "faults",
    "trajectory.sample_time",
    "trajectory.k_start",
    "trajectory.k_end",
    "trajectory.heading",
    "noise.sigma_r",
    "noise.sigma_omega",
    "noise.sigma_accel_g",
    "noise.sigma_theta",
    "single.n_e",
    "single.n_f",
    "single.r_z",
    "single.r_d",
    "single.r_theta",
    "single.eta_low",
    "single.eta_high",
    "single.grid_points",
    "single.alpha",
    "single.spacing",
    "double.n_e",
    "double.n_f",
    "double.r_z",
    "double.r_d",
    "double.r_theta",
    "double.eta_low",
    "double.eta_high",
    "double.grid_points",
    "double.alpha",
    "double.spacing",
];

struct Entry<'a> {
    line: usize,
    key: &'a str,
    value: &'a str,
}

/// Reads and validates a scenario file.
pub fn parse_config(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    parse_config_str(&text, path)
}

/// Parses scenario text; `path` is only used in messages.
pub fn parse_config_str(text: &str, path: &Path) -> Result<Scenario> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: PathBuf::from(path),
        line,
        message,
    };

    let mut entries: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(parse_err(
                line,
                format!("expected `key = value`, got `{content}`"),
            ));
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(parse_err(line, "missing key".into()));
        }
        if !KEYS.contains(&key) {
            return Err(parse_err(line, format!("unknown key `{key}`")));
        }
        if let Some(prev) = entries.iter().find(|e| e.key == key) {
            return Err(parse_err(
                line,
                format!("duplicate key `{key}` (first set on line {})", prev.line),
            ));
        }
        if key == "base" && !entries.is_empty() {
            return Err(parse_err(line, "`base` must be the first setting".into()));
        }
        entries.push(Entry { line, key, value });
    }

    let mut s = match entries.first() {
        Some(e) if e.key == "base" => Scenario::preset(e.value)
            .map_err(|err| parse_err(e.line, err.to_string().replace("invalid argument: ", "")))?,
        _ => Scenario {
            name: "custom".into(),
            ..Scenario::default()
        },
    };

    for e in entries.iter().filter(|e| e.key != "base") {
        apply(&mut s, e).map_err(|m| match m {
            Bad::Syntax(message) => parse_err(e.line, format!("`{}`: {message}", e.key)),
            Bad::Range(message) => Error::Validation {
                key: e.key.to_string(),
                message,
            },
        })?;
    }
    s.validate()?;
    Ok(s)
}

enum Bad {
    /// Value does not parse as the key's type.
    Syntax(String),
    /// Value parses but is out of range.
    Range(String),
}

fn num<T: FromStr>(v: &str) -> std::result::Result<T, Bad> {
    v.parse().map_err(|_| {
        Bad::Syntax(format!(
            "cannot parse `{v}` as {}",
            std::any::type_name::<T>()
        ))
    })
}

fn positive(v: &str) -> std::result::Result<f64, Bad> {
    let x: f64 = num(v)?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(Bad::Range(format!("must be positive and finite, got {v}")))
    }
}

fn non_negative(v: &str) -> std::result::Result<f64, Bad> {
    let x: f64 = num(v)?;
    if x.is_finite() && x >= 0.0 {
        Ok(x)
    } else {
        Err(Bad::Range(format!(
            "must be non-negative and finite, got {v}"
        )))
    }
}

fn count(v: &str, min: usize) -> std::result::Result<usize, Bad> {
    let n: usize = num(v)?;
    if n >= min {
        Ok(n)
    } else {
        Err(Bad::Range(format!("must be at least {min}, got {n}")))
    }
}

fn parse_fault(item: &str) -> std::result::Result<FaultSpec, Bad> {
    let parts: Vec<&str> = item.split(':').map(str::trim).collect();
    let [sensor, kind, magnitude, start] = parts[..] else {
        return Err(Bad::Syntax(format!(
            "expected `sensor:kind:magnitude:start_time`, got `{item}`"
        )));
    };
    let sensor = Sensor::parse(sensor).ok_or_else(|| {
        let names: Vec<_> = Sensor::ALL.iter().map(|s| s.name()).collect();
        Bad::Syntax(format!(
            "unknown sensor `{sensor}` (expected one of {})",
            names.join(", ")
        ))
    })?;
    let kind = FaultKind::parse(kind)
        .ok_or_else(|| Bad::Syntax(format!("unknown fault kind `{kind}` (bias or drift)")))?;
    let magnitude: f64 = num(magnitude)?;
    if !magnitude.is_finite() {
        return Err(Bad::Range(format!(
            "fault magnitude must be finite, got {magnitude}"
        )));
    }
    let start_time = non_negative(start)?;
    Ok(FaultSpec {
        sensor,
        kind,
        magnitude,
        start_time,
    })
}

fn apply_diff(d: &mut DiffSettings, field: &str, v: &str) -> std::result::Result<(), Bad> {
    match field {
        "n_e" => d.rls.estimator_order = count(v, 1)?,
        "n_f" => d.rls.filter_length = count(v, 1)?,
        "r_z" => d.rls.r_z = positive(v)?,
        "r_d" => d.rls.r_d = positive(v)?,
        "r_theta" => d.rls.r_theta_scale = positive(v)?,
        "eta_low" => d.ase.eta_low = non_negative(v)?,
        "eta_high" => d.ase.eta_high = positive(v)?,
        "grid_points" => d.ase.grid_points = count(v, 2)?,
        "alpha" => {
            let a: f64 = num(v)?;
            if !(0.0..=1.0).contains(&a) {
                return Err(Bad::Range(format!("must lie in [0, 1], got {v}")));
            }
            d.ase.alpha = a;
        }
        "spacing" => {
            d.ase.spacing = match v {
                "linear" => EtaSpacing::Linear,
                "log" => EtaSpacing::Log,
                _ => {
                    return Err(Bad::Syntax(format!(
                        "expected `linear` or `log`, got `{v}`"
                    )))
                }
            }
        }
        _ => unreachable!("key list and match arms disagree on `{field}`"),
    }
    Ok(())
}

fn apply(s: &mut Scenario, e: &Entry) -> std::result::Result<(), Bad> {
    let v = e.value;
    match e.key {
        "name" => {
            if v.is_empty() {
                return Err(Bad::Range("must not be empty".into()));
            }
            s.name = v.to_string();
        }
        "seed" => s.noise.seed = num(v)?,
        "delta" => s.delta = count(v, 1)?,
        "latch_steps" => s.latch_steps = count(v, 1)?,
        "output_dir" => s.output_dir = PathBuf::from(v),
        "faults" => {
            s.faults = if v.is_empty() || v == "none" {
                Vec::new()
            } else {
                v.split(',')
                    .map(parse_fault)
                    .collect::<std::result::Result<_, _>>()?
            };
        }
        "trajectory.sample_time" => s.trajectory.sample_time = positive(v)?,
        "trajectory.k_start" => s.trajectory.k_start = num(v)?,
        "trajectory.k_end" => s.trajectory.k_end = num(v)?,
        "trajectory.heading" => {
            s.trajectory.heading = HeadingMode::parse(v).ok_or_else(|| {
                Bad::Syntax(format!("expected `velocity` or `line_of_sight`, got `{v}`"))
            })?
        }
        "noise.sigma_r" => s.noise.sigma_r = non_negative(v)?,
        "noise.sigma_omega" => s.noise.sigma_omega = non_negative(v)?,
        "noise.sigma_accel_g" => s.noise.sigma_accel_g = non_negative(v)?,
        "noise.sigma_theta" => s.noise.sigma_theta = non_negative(v)?,
        key => {
            let (group, field) = key.split_once('.').unwrap_or((key, ""));
            match group {
                "single" => apply_diff(&mut s.single, field, v)?,
                "double" => apply_diff(&mut s.double, field, v)?,
                _ => unreachable!("key list and match arms disagree on `{key}`"),
            }
        }
    }
    Ok(())
}

/// Writes a scenario back out in the file format, every key explicit.
/// `parse_config_str(&render_config(s))` reproduces `s`.
pub fn render_config(s: &Scenario) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    kv("name", s.name.clone());
    kv("seed", s.noise.seed.to_string());
    kv("delta", s.delta.to_string());
    kv("latch_steps", s.latch_steps.to_string());
    kv("output_dir", s.output_dir.display().to_string());
    let faults: Vec<String> = s
        .faults
        .iter()
        .map(|f| {
            format!(
                "{}:{}:{:?}:{:?}",
                f.sensor.name(),
                f.kind.name(),
                f.magnitude,
                f.start_time
            )
        })
        .collect();
    kv(
        "faults",
        if faults.is_empty() {
            "none".into()
        } else {
            faults.join(",")
        },
    );
    kv(
        "trajectory.sample_time",
        format!("{:?}", s.trajectory.sample_time),
    );
    kv("trajectory.k_start", s.trajectory.k_start.to_string());
    kv("trajectory.k_end", s.trajectory.k_end.to_string());
    kv(
        "trajectory.heading",
        heading_name(s.trajectory.heading).into(),
    );
    kv("noise.sigma_r", format!("{:?}", s.noise.sigma_r));
    kv("noise.sigma_omega", format!("{:?}", s.noise.sigma_omega));
    kv(
        "noise.sigma_accel_g",
        format!("{:?}", s.noise.sigma_accel_g),
    );
    kv("noise.sigma_theta", format!("{:?}", s.noise.sigma_theta));
    for (group, d) in [("single", &s.single), ("double", &s.double)] {
        kv(&format!("{group}.n_e"), d.rls.estimator_order.to_string());
        kv(&format!("{group}.n_f"), d.rls.filter_length.to_string());
        kv(&format!("{group}.r_z"), format!("{:?}", d.rls.r_z));
        kv(&format!("{group}.r_d"), format!("{:?}", d.rls.r_d));
        kv(
            &format!("{group}.r_theta"),
            format!("{:?}", d.rls.r_theta_scale),
        );
        kv(&format!("{group}.eta_low"), format!("{:?}", d.ase.eta_low));
        kv(
            &format!("{group}.eta_high"),
            format!("{:?}", d.ase.eta_high),
        );
        kv(
            &format!("{group}.grid_points"),
            d.ase.grid_points.to_string(),
        );
        kv(&format!("{group}.alpha"), format!("{:?}", d.ase.alpha));
        kv(
            &format!("{group}.spacing"),
            spacing_name(d.ase.spacing).into(),
        );
    }
    out
}
