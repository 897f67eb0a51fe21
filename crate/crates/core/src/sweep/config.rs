// Copyright 2026 The acmag Authors
// SPDX-License-Identifier: Apache-2.0

//! Flat `key = value` sweep configuration.
//!
//! Lines hold one or more assignments separated by commas; a comma-separated
//! item without `=` extends the preceding key's list. `#` starts a comment.
//! A list item of the form `start:stop:points_per_decade` expands to a
//! log-spaced grid with round(decades·points_per_decade) + 1 points,
//! endpoints included.

use std::collections::HashSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lindblad::{IntegratorConfig, ParallelNoiseForm};
use crate::quantum::Scheme;
use crate::sensitivity::NoiseKind;
use crate::L_MAX;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Analytic,
    Numeric,
    Compare,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "analytic" => Ok(Mode::Analytic),
            "numeric" => Ok(Mode::Numeric),
            "compare" => Ok(Mode::Compare),
            other => Err(format!("unknown mode `{other}` (analytic|numeric|compare)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Analytic => "analytic",
            Mode::Numeric => "numeric",
            Mode::Compare => "compare",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (csv|json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub nqubits: Vec<usize>,
    pub m: Vec<f64>,
    pub omega: f64,
    pub gamma: Vec<f64>,
    pub noise: NoiseKind,
    pub schemes: Vec<Scheme>,
    pub mode: Mode,
    /// Total measurement time T.
    pub total_time: f64,
    /// Report √T·δε instead of δε.
    pub t_normalized: bool,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    /// Signal amplitude used by numeric evaluations.
    pub epsilon: f64,
    /// Time span and sample count for probability traces.
    pub t_final: f64,
    pub t_points: usize,
    pub integrator: IntegratorConfig,
    pub parallel_form: ParallelNoiseForm,
    pub jobs: Option<usize>,
}

pub const DEFAULT_OMEGA: f64 = 1.0;
pub const DEFAULT_GAMMA: f64 = 1e-6;
pub const DEFAULT_DETUNING: f64 = 0.1;
pub const DEFAULT_TOTAL_TIME: f64 = 1e12;

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            nqubits: vec![1],
            m: vec![DEFAULT_OMEGA + DEFAULT_DETUNING],
            omega: DEFAULT_OMEGA,
            gamma: vec![DEFAULT_GAMMA],
            noise: NoiseKind::Parallel,
            schemes: vec![Scheme::Individual, Scheme::Ghz],
            mode: Mode::Analytic,
            total_time: DEFAULT_TOTAL_TIME,
            t_normalized: true,
            output: None,
            format: Format::Csv,
            seed: 0,
            epsilon: 1e-4,
            t_final: 20.0,
            t_points: 201,
            integrator: IntegratorConfig::default(),
            parallel_form: ParallelNoiseForm::default(),
            jobs: None,
        }
    }
}

impl SweepConfig {
    /// Number of rows a sweep produces.
    pub fn row_count(&self) -> usize {
        self.nqubits.len() * self.m.len() * self.gamma.len() * self.schemes.len()
    }

    pub fn validate(&self) -> Result<()> {
        let err = |message: String| Err(Error::Config { line: 0, message });
        for (name, len) in [
            ("L", self.nqubits.len()),
            ("m", self.m.len()),
            ("gamma", self.gamma.len()),
            ("scheme", self.schemes.len()),
        ] {
            if len == 0 {
                return err(format!("empty grid for `{name}`"));
            }
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return err(format!("omega = {} must be positive", self.omega));
        }
        if let Some(&l) = self.nqubits.iter().find(|&&l| l == 0) {
            return err(format!("L = {l} must be at least 1"));
        }
        if let Some(m) = self.m.iter().find(|m| !(**m >= 0.0 && m.is_finite())) {
            return err(format!("m = {m} must be non-negative"));
        }
        if let Some(g) = self.gamma.iter().find(|g| !(**g >= 0.0 && g.is_finite())) {
            return err(format!("gamma = {g} must be non-negative"));
        }
        if !(self.total_time > 0.0 && self.total_time.is_finite()) {
            return err(format!("T = {} must be positive", self.total_time));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return err(format!("epsilon = {} must be positive", self.epsilon));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return err(format!("t_final = {} must be positive", self.t_final));
        }
        if self.t_points < 2 {
            return err("t_points must be at least 2".into());
        }
        if self.mode != Mode::Analytic {
            if let Some(l) = self.nqubits.iter().find(|&&l| l > L_MAX) {
                return err(format!(
                    "{} mode simulates the density matrix; L = {l} exceeds {L_MAX}",
                    self.mode
                ));
            }
        }
        if self.jobs == Some(0) {
            return err("jobs must be at least 1".into());
        }
        Ok(())
    }
}

fn parse_number(text: &str) -> std::result::Result<f64, String> {
    let cleaned = text.trim().replace('\u{2212}', "-");
    cleaned
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("`{}` is not a finite number", text.trim()))
}

/// Expands `start:stop:points_per_decade` into a log-spaced grid.
pub fn log_range(start: f64, stop: f64, per_decade: f64) -> std::result::Result<Vec<f64>, String> {
    if !(start > 0.0 && stop > 0.0) {
        return Err(format!("range endpoints {start}:{stop} must be positive"));
    }
    if !(per_decade > 0.0) {
        return Err(format!("points per decade {per_decade} must be positive"));
    }
    let decades = (stop / start).log10();
    let intervals = (decades.abs() * per_decade).round() as usize;
    if intervals == 0 {
        return Ok(vec![start]);
    }
    let (a, b) = (start.ln(), stop.ln());
    Ok((0..=intervals)
        .map(|k| match k {
            0 => start,
            k if k == intervals => stop,
            k => (a + (b - a) * k as f64 / intervals as f64).exp(),
        })
        .collect())
}

fn parse_grid(items: &[String]) -> std::result::Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for item in items {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [value] => out.push(parse_number(value)?),
            [start, stop, per_decade] => out.extend(log_range(
                parse_number(start)?,
                parse_number(stop)?,
                parse_number(per_decade)?,
            )?),
            _ => {
                return Err(format!(
                    "malformed range `{item}` (expected start:stop:points_per_decade)"
                ))
            }
        }
    }
    Ok(out)
}

fn parse_qubits(items: &[String]) -> std::result::Result<Vec<usize>, String> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for value in parse_grid(items)? {
        let l = value.round();
        if l < 1.0 || l > u32::MAX as f64 {
            return Err(format!("qubit count {value} out of range"));
        }
        if seen.insert(l as usize) {
            out.push(l as usize);
        }
    }
    Ok(out)
}

fn single<'a>(key: &str, items: &'a [String]) -> std::result::Result<&'a str, String> {
    match items {
        [one] => Ok(one.as_str()),
        _ => Err(format!("`{key}` takes a single value")),
    }
}

fn parse_bool(text: &str) -> std::result::Result<bool, String> {
    match text.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(format!("`{other}` is not a boolean")),
    }
}

fn parse_count<T: FromStr>(text: &str) -> std::result::Result<T, String> {
    text.trim()
        .parse::<T>()
        .map_err(|_| format!("`{}` is not a non-negative integer", text.trim()))
}

/// Splits a document into (line number, key, values) assignments.
fn assignments(text: &str) -> Result<Vec<(usize, String, Vec<String>)>> {
    let mut out: Vec<(usize, String, Vec<String>)> = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut current: Option<usize> = None;
        for item in body.split(',') {
            let item = item.trim();
            if let Some((key, value)) = item.split_once('=') {
                let key = key.trim();
                if key.is_empty() {
                    return Err(Error::Config {
                        line,
                        message: "missing key before `=`".into(),
                    });
                }
                out.push((line, key.to_string(), Vec::new()));
                current = Some(out.len() - 1);
                let value = value.trim();
                if !value.is_empty() {
                    out[current.unwrap_or_default()].2.push(value.to_string());
                }
            } else {
                let Some(at) = current else {
                    return Err(Error::Config {
                        line,
                        message: format!("expected `key = value`, found `{body}`"),
                    });
                };
                if !item.is_empty() {
                    out[at].2.push(item.to_string());
                }
            }
        }
    }
    Ok(out)
}

/// Parses and validates a sweep configuration, filling defaults.
pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let mut cfg = SweepConfig::default();
    let mut seen_l = false;
    let mut m_line = None;
    let mut detuning: Option<(usize, Vec<f64>)> = None;
    let mut steps_per_period = cfg.integrator.steps_per_fast_period;
    let mut dt_max = cfg.integrator.dt_max;
    let mut seen_keys = HashSet::new();

    for (line, key, items) in assignments(text)? {
        let fail = |message: String| Error::Config { line, message };
        if items.is_empty() {
            return Err(fail(format!("empty grid for `{key}`")));
        }
        let canonical = key.replace('-', "_");
        if !seen_keys.insert(canonical.clone()) {
            return Err(fail(format!("duplicate key `{key}`")));
        }
        let applied: std::result::Result<(), String> = (|| {
            match canonical.as_str() {
                "L" | "nqubits" => {
                    cfg.nqubits = parse_qubits(&items)?;
                    seen_l = true;
                }
                "m" => {
                    cfg.m = parse_grid(&items)?;
                    m_line = Some(line);
                }
                "detuning" => detuning = Some((line, parse_grid(&items)?)),
                "omega" => cfg.omega = parse_number(single(&key, &items)?)?,
                "gamma" => cfg.gamma = parse_grid(&items)?,
                "noise" => cfg.noise = single(&key, &items)?.parse()?,
                "scheme" | "schemes" => {
                    let mut schemes = Vec::new();
                    for item in &items {
                        let s: Scheme = item.parse()?;
                        if !schemes.contains(&s) {
                            schemes.push(s);
                        }
                    }
                    cfg.schemes = schemes;
                }
                "mode" => cfg.mode = single(&key, &items)?.parse()?,
                "T" => cfg.total_time = parse_number(single(&key, &items)?)?,
                "T_normalized" => cfg.t_normalized = parse_bool(single(&key, &items)?)?,
                "output" => cfg.output = Some(PathBuf::from(single(&key, &items)?)),
                "format" => cfg.format = single(&key, &items)?.parse()?,
                "seed" => cfg.seed = parse_count(single(&key, &items)?)?,
                "epsilon" => cfg.epsilon = parse_number(single(&key, &items)?)?,
                "t_final" => cfg.t_final = parse_number(single(&key, &items)?)?,
                "t_points" => cfg.t_points = parse_count(single(&key, &items)?)?,
                "steps_per_period" => steps_per_period = parse_count(single(&key, &items)?)?,
                "dt_max" => dt_max = parse_number(single(&key, &items)?)?,
                "parallel_noise_form" => cfg.parallel_form = single(&key, &items)?.parse()?,
                "jobs" => cfg.jobs = Some(parse_count(single(&key, &items)?)?),
                _ => return Err(format!("unknown key `{key}`")),
            }
            Ok(())
        })();
        applied.map_err(fail)?;
    }

    if let Some((line, grid)) = detuning {
        if let Some(m_line) = m_line {
            return Err(Error::Config {
                line,
                message: format!("`detuning` conflicts with `m` on line {m_line}"),
            });
        }
        cfg.m = grid.into_iter().map(|d| cfg.omega + d).collect();
    } else if m_line.is_none() {
        cfg.m = vec![cfg.omega * (1.0 + DEFAULT_DETUNING)];
    }
    if !seen_l {
        return Err(Error::Config {
            line: 0,
            message: "missing required key `L`".into(),
        });
    }
    cfg.integrator =
        IntegratorConfig::new(dt_max, steps_per_period).map_err(|e| Error::Config {
            line: 0,
            message: e.to_string(),
        })?;
    cfg.validate()?;
    Ok(cfg)
}
