// Copyright 2026 The acmag Authors
// SPDX-License-Identifier: Apache-2.0

//! Independent reference machinery for verification: adaptive quadrature and
//! seeded random density matrices. Nothing here calls into the closed forms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::linalg::{ComplexMatrix, C64};
use crate::quantum::{check_nqubits, DensityMatrix};

// Gauss–Kronrod 7/15 nodes and weights on [−1, 1].
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for k in 0..7 {
        let x = h * XGK[k];
        let pair = f(c - x) + f(c + x);
        kronrod += WGK[k] * pair;
        if k % 2 == 1 {
            gauss += WG[k / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// ∫ₐᵇ f by adaptive Gauss–Kronrod bisection to absolute tolerance `tol`.
pub fn integrate_adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (value, err) = gk15(f, a, b);
        if err <= tol || depth >= 50 || (b - a).abs() < 1e-300 {
            return value;
        }
        let mid = 0.5 * (a + b);
        recurse(f, a, mid, tol / 2.0, depth + 1) + recurse(f, mid, b, tol / 2.0, depth + 1)
    }
    if a == b {
        return 0.0;
    }
    recurse(&f, a, b, tol, 0)
}

/// Deterministic generator of random states for verification.
pub struct StateSampler {
    rng: ChaCha8Rng,
}

impl StateSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    /// Random traceless Hermitian matrix with unit Frobenius norm.
    pub fn traceless_hermitian(&mut self, dim: usize) -> ComplexMatrix {
        let mut h = ComplexMatrix::zeros(dim);
        for r in 0..dim {
            h[(r, r)] = C64::new(self.rng.gen_range(-1.0..1.0), 0.0);
            for c in r + 1..dim {
                let z = C64::new(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0));
                h[(r, c)] = z;
                h[(c, r)] = z.conj();
            }
        }
        let mean = h.trace().re / dim as f64;
        for i in 0..dim {
            h[(i, i)] -= mean;
        }
        let norm = h
            .as_slice()
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        if norm > 0.0 {
            h.scale_real(1.0 / norm)
        } else {
            h
        }
    }

    /// 1/2^L + δ·H with H traceless Hermitian, ‖H‖_F = 1 and δ < 1/2^L, so the
    /// result is a full-rank density matrix.
    pub fn density_matrix(&mut self, nqubits: usize) -> Result<DensityMatrix> {
        check_nqubits(nqubits)?;
        let dim = 1usize << nqubits;
        let strength = self.rng.gen_range(0.05..0.95) / dim as f64;
        let mut rho = ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64);
        rho.axpy(C64::new(strength, 0.0), &self.traceless_hermitian(dim));
        DensityMatrix::new(rho, nqubits)
    }
}
