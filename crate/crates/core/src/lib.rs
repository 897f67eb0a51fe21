// Copyright 2026 The acmag Authors
// SPDX-License-Identifier: Apache-2.0

//! Simulation and sensitivity analysis for AC magnetometry with qubit sensors.
//!
//! The crate has two routes to the same physics:
//!
//! * [`lindblad`] integrates the interaction-picture master equation with the
//!   full (non-rotating-wave) drive and either Markovian noise model.
//! * [`analytic`] evaluates the closed-form, leading-order-in-ε projection
//!   probabilities built on the window function W(t).
//!
//! [`sensitivity`] turns the closed forms into amplitude uncertainties,
//! optimizes the interrogation time, and compares GHZ probes against
//! uncorrelated ones. [`sweep`] drives all of it from a flat config file.
//!
//! All quantities use ħ = 1; rates and frequencies are in the same units as
//! the qubit frequency ω (usually ω = 1).

pub mod analytic;
pub mod error;
pub mod linalg;
pub mod lindblad;
pub mod oracle;
pub mod quantum;
pub mod sensitivity;
pub mod sweep;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use quantum::{DensityMatrix, Pauli, PauliString, ProbeState, Scheme};

/// Largest qubit count handled with dense matrices.
pub const L_MAX: usize = 12;

/// Hermiticity tolerance for stored density matrices.
pub const TOL_HERM: f64 = 1e-10;
/// Unit-trace tolerance for stored density matrices.
pub const TOL_TRACE: f64 = 1e-10;
/// Allowed negative eigenvalue (integrator drift).
pub const TOL_PSD: f64 = 1e-8;

// The book chapters are compiled as doctests so their snippets stay in sync
// with the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/quantum_objects.md")]
    mod quantum_objects {}
    #[doc = include_str!("../../../book/src/master_equation.md")]
    mod master_equation {}
    #[doc = include_str!("../../../book/src/window_function.md")]
    mod window_function {}
    #[doc = include_str!("../../../book/src/sensitivity.md")]
    mod sensitivity {}
    #[doc = include_str!("../../../book/src/sweeps.md")]
    mod sweeps {}
}
