// Copyright 2026 The acmag Authors
// SPDX-License-Identifier: Apache-2.0

//! Built-in sweep configurations for the ratio surfaces and line cuts.

use crate::error::{Error, Result};
use crate::sweep::config::{parse_config, SweepConfig};

pub const PRESETS: [(&str, &str); 4] = [
    ("fig1", include_str!("../../presets/fig1.cfg")),
    ("fig2", include_str!("../../presets/fig2.cfg")),
    ("fig3", include_str!("../../presets/fig3.cfg")),
    ("fig4", include_str!("../../presets/fig4.cfg")),
];

/// Source text of a named preset.
pub fn preset_text(name: &str) -> Option<&'static str> {
    let name = name.trim_end_matches(".cfg");
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn preset(name: &str) -> Result<SweepConfig> {
    let text = preset_text(name).ok_or_else(|| Error::Config {
        line: 0,
        message: format!(
            "unknown preset `{name}` (available: {})",
            PRESETS.map(|(n, _)| n).join(", ")
        ),
    })?;
    parse_config(text)
}
