// Copyright 2026 The acmag Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense square complex matrices.
//!
//! Everything here is row-major over a `Vec<C64>`. Besides the usual
//! arithmetic the module has bit-indexed single-qubit Pauli application
//! ([`ComplexMatrix::pauli_left`] / [`ComplexMatrix::pauli_right`]), which the
//! master-equation right-hand side uses instead of building 2^L × 2^L
//! operators.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};
use crate::quantum::Pauli;

pub type C64 = num_complex::Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries; the length must be a nonzero
    /// perfect square.
    pub fn from_row_major(data: Vec<C64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != data.len() {
            return Err(Error::NotSquare { len: data.len() });
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self { dim, data }
    }

    /// |ψ⟩⟨ψ| for a state vector ψ.
    pub fn outer(psi: &[C64]) -> Self {
        Self::from_fn(psi.len(), |r, c| psi[r] * psi[c].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: C64, other: &Self) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[r * n..(r + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `[self, rhs] = self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        let ab = self.matmul(rhs)?;
        let ba = rhs.matmul(self)?;
        Ok(&ab - &ba)
    }

    /// Kronecker product `self ⊗ rhs`. Rejects results larger than 2^L_MAX.
    pub fn kron(&self, rhs: &Self) -> Result<Self> {
        let dim = self
            .dim
            .checked_mul(rhs.dim)
            .filter(|&d| d <= 1 << crate::L_MAX)
            .ok_or(Error::TooManyQubits {
                nqubits: (((self.dim as f64) * (rhs.dim as f64)).log2().ceil()) as usize,
                max: crate::L_MAX,
            })?;
        let (n, m) = (self.dim, rhs.dim);
        Ok(Self::from_fn(dim, |r, c| {
            self.data[(r / m) * n + c / m] * rhs.data[(r % m) * m + c % m]
        }))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max |A − A†|.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for r in 0..n {
            for c in r..n {
                let d = (self.data[r * n + c] - self.data[c * n + r].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Eigenvalues of the Hermitian part `(A + A†)/2`, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let n = self.dim;
        let m = nalgebra::DMatrix::from_fn(n, n, |r, c| {
            0.5 * (self.data[r * n + c] + self.data[c * n + r].conj())
        });
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Applies a single-qubit Pauli from the left, `σ·self`, where `bit` is
    /// the basis-index bit of the target qubit.
    pub fn pauli_left(&self, bit: usize, axis: Pauli) -> Self {
        let mut out = Self::zeros(self.dim);
        self.pauli_left_into(bit, axis, ONE, &mut out);
        out
    }

    /// Applies a single-qubit Pauli from the right, `self·σ`.
    pub fn pauli_right(&self, bit: usize, axis: Pauli) -> Self {
        let mut out = Self::zeros(self.dim);
        self.pauli_right_into(bit, axis, ONE, &mut out);
        out
    }

    /// `out += s · σ·self`.
    pub(crate) fn pauli_left_into(&self, bit: usize, axis: Pauli, s: C64, out: &mut Self) {
        let n = self.dim;
        let mask = 1usize << bit;
        for r in 0..n {
            // σ|src⟩ = phase|r⟩
            let (src, phase) = axis.preimage(r, mask);
            let f = s * phase;
            let src_row = &self.data[src * n..(src + 1) * n];
            let dst = &mut out.data[r * n..(r + 1) * n];
            for (d, v) in dst.iter_mut().zip(src_row) {
                *d += f * v;
            }
        }
    }

    /// `out += s · self·σ`.
    pub(crate) fn pauli_right_into(&self, bit: usize, axis: Pauli, s: C64, out: &mut Self) {
        let n = self.dim;
        let mask = 1usize << bit;
        // (ρσ)[r][c] = ρ[r][c'] σ[c'][c] with σ|c⟩ = phase|c'⟩.
        let cols: Vec<(usize, C64)> = (0..n)
            .map(|c| {
                let (img, phase) = axis.image(c, mask);
                (img, s * phase)
            })
            .collect();
        for r in 0..n {
            let row = r * n;
            for (c, &(src, f)) in cols.iter().enumerate() {
                out.data[row + c] += f * self.data[row + src];
            }
        }
    }

    /// `out += s · σ·self·σ`.
    pub(crate) fn pauli_sandwich_into(&self, bit: usize, axis: Pauli, s: C64, out: &mut Self) {
        let n = self.dim;
        let mask = 1usize << bit;
        let map: Vec<(usize, C64)> = (0..n).map(|k| axis.image(k, mask)).collect();
        // (σρσ)[r][c] = σ[r][r'] ρ[r'][c'] σ[c'][c]
        for r in 0..n {
            let (rp, pr) = axis.preimage(r, mask);
            for c in 0..n {
                let (cp, pc) = map[c];
                out.data[r * n + c] += s * pr * pc * self.data[rp * n + cp];
            }
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        self.axpy(ONE, rhs);
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("dimension mismatch")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| {
                    let z = self[(r, c)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
