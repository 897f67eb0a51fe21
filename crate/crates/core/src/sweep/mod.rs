// Copyright 2026 The acmag Authors
// SPDX-License-Identifier: Apache-2.0

//! Parameter sweeps: configuration, execution, verification and output.

pub mod config;
pub mod emit;
pub mod presets;
pub mod run;
pub mod verify;

pub use config::{parse_config, Format, Mode, SweepConfig};
pub use emit::{emit, parse_rows, render, CSV_HEADER};
pub use run::{run_probability, run_sweep, ProbabilityRow, SweepRow};
pub use verify::{verify, Check, Fault, VerifyReport};
