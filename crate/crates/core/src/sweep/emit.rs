// Copyright 2026 The acmag Authors
// SPDX-License-Identifier: Apache-2.0

//! CSV and JSON serialization of result tables.
//!
//! Floating-point fields are rounded to 12 significant digits and written in
//! shortest round-trip form, so both formats parse back to identical values.
//! Undefined fields are empty in CSV and `null` in JSON.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sweep::config::Format;
use crate::sweep::run::{ProbabilityRow, SweepRow};

pub const CSV_HEADER: &str = "L,m,gamma,noise,scheme,t_opt,delta_eps_norm,ratio,regime,validity";

/// `x` rounded to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_opt(x: Option<f64>) -> Option<f64> {
    x.filter(|v| v.is_finite()).map(round_sig)
}

/// Rounding applied before serialization.
pub trait Rounded {
    fn rounded(&self) -> Self;
}

impl Rounded for SweepRow {
    fn rounded(&self) -> Self {
        SweepRow {
            m: round_sig(self.m),
            gamma: round_sig(self.gamma),
            t_opt: round_opt(self.t_opt),
            delta_eps_norm: round_opt(self.delta_eps_norm),
            ratio: round_opt(self.ratio),
            ..self.clone()
        }
    }
}

impl Rounded for ProbabilityRow {
    fn rounded(&self) -> Self {
        ProbabilityRow {
            m: round_sig(self.m),
            gamma: round_sig(self.gamma),
            t: round_sig(self.t),
            p_analytic: round_opt(self.p_analytic),
            p_numeric: round_opt(self.p_numeric),
            ..self.clone()
        }
    }
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parameter(format!("csv: {other:?}")),
    }
}

/// Serializes rows as CSV (header included) or a JSON array.
pub fn render<R: Rounded + Serialize>(rows: &[R], format: Format) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::Parameter("no rows to emit".into()));
    }
    let rounded: Vec<R> = rows.iter().map(Rounded::rounded).collect();
    match format {
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            for row in &rounded {
                writer.serialize(row).map_err(csv_error)?;
            }
            let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
            String::from_utf8(bytes).map_err(|e| Error::Parameter(e.to_string()))
        }
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&rounded)
                .map_err(|e| Error::Parameter(e.to_string()))?;
            text.push('\n');
            Ok(text)
        }
    }
}

/// Writes rows to `path`.
pub fn emit<R: Rounded + Serialize>(rows: &[R], format: Format, path: &Path) -> Result<()> {
    let text = render(rows, format)?;
    fs::write(path, text)?;
    Ok(())
}

/// Parses text produced by [`render`].
pub fn parse_rows<R: DeserializeOwned>(text: &str, format: Format) -> Result<Vec<R>> {
    match format {
        Format::Csv => csv::Reader::from_reader(text.as_bytes())
            .deserialize()
            .collect::<std::result::Result<Vec<R>, _>>()
            .map_err(csv_error),
        Format::Json => serde_json::from_str(text).map_err(|e| Error::Parameter(e.to_string())),
    }
}
