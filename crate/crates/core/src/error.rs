// Copyright 2026 The acmag Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{nqubits} qubits exceeds the dense-matrix limit of {max}")]
    TooManyQubits { nqubits: usize, max: usize },

    #[error("qubit index {index} out of range 1..={nqubits}")]
    QubitIndex { index: usize, nqubits: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix entries ({len}) do not form a square matrix")]
    NotSquare { len: usize },

    #[error("probability {0} outside [0, 1]")]
    Probability(f64),

    #[error("trace has imaginary residue {0:e}")]
    ImaginaryResidue(f64),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("density matrix invariant violated: {what} = {value:e} (limit {limit:e})")]
    Invariant {
        what: &'static str,
        value: f64,
        limit: f64,
    },

    #[error("step size underflow: {steps} steps requested for t = {t_final}")]
    StepUnderflow { steps: f64, t_final: f64 },

    #[error("window function vanishes at t = {t}; uncertainty is infinite")]
    WindowNode { t: f64 },

    #[error("objective is infinite everywhere in [{lo:e}, {hi:e}]")]
    NoFiniteObjective { lo: f64, hi: f64 },

    #[error("noise model {found} does not match the requested formula ({expected})")]
    NoiseMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
