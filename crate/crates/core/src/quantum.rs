// Copyright 2026 The acmag Authors
// SPDX-License-Identifier: Apache-2.0

//! States, projectors and Pauli strings on L qubits.
//!
//! Qubit `j` (1-based, as in `σ_X^j`) is the j-th tensor factor from the
//! left, which is basis-index bit `L − j`. The computational basis is
//! {|0⟩, |1⟩} and |±⟩ = (|0⟩ ± |1⟩)/√2. Every object is an interaction-picture
//! object, so |±⟩ are fixed vectors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, I, ONE, ZERO};
use crate::{L_MAX, TOL_HERM, TOL_PSD, TOL_TRACE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> ComplexMatrix {
        let m = match self {
            Pauli::I => [ONE, ZERO, ZERO, ONE],
            Pauli::X => [ZERO, ONE, ONE, ZERO],
            Pauli::Y => [ZERO, -I, I, ZERO],
            Pauli::Z => [ONE, ZERO, ZERO, -ONE],
        };
        ComplexMatrix::from_row_major(m.to_vec()).unwrap()
    }

    /// σ|k⟩ = phase·|k'⟩; returns (k', phase).
    #[inline]
    pub(crate) fn image(self, k: usize, mask: usize) -> (usize, C64) {
        let up = k & mask == 0;
        match self {
            Pauli::I => (k, ONE),
            Pauli::X => (k ^ mask, ONE),
            Pauli::Y => (k ^ mask, if up { I } else { -I }),
            Pauli::Z => (k, if up { ONE } else { -ONE }),
        }
    }

    /// The basis state mapped onto |k⟩: σ|src⟩ = phase·|k⟩; returns (src, phase).
    #[inline]
    pub(crate) fn preimage(self, k: usize, mask: usize) -> (usize, C64) {
        match self {
            Pauli::I | Pauli::Z => self.image(k, mask),
            Pauli::X | Pauli::Y => {
                let src = k ^ mask;
                (src, self.image(src, mask).1)
            }
        }
    }
}

/// A tensor product σ_{v₁} ⊗ ⋯ ⊗ σ_{v_L}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub axes: Vec<Pauli>,
}

impl PauliString {
    pub fn new(axes: Vec<Pauli>) -> Self {
        Self { axes }
    }

    pub fn nqubits(&self) -> usize {
        self.axes.len()
    }

    pub fn is_identity(&self) -> bool {
        self.axes.iter().all(|&a| a == Pauli::I)
    }

    /// All 4^L strings in lexicographic order, identity first.
    pub fn enumerate(nqubits: usize) -> impl Iterator<Item = PauliString> {
        (0..4usize.pow(nqubits as u32)).map(move |mut code| {
            let mut axes = vec![Pauli::I; nqubits];
            for slot in axes.iter_mut().rev() {
                *slot = Pauli::ALL[code % 4];
                code /= 4;
            }
            PauliString { axes }
        })
    }

    pub fn matrix(&self) -> Result<ComplexMatrix> {
        check_nqubits(self.nqubits())?;
        let mut m = ComplexMatrix::identity(1);
        for axis in &self.axes {
            m = m.kron(&axis.matrix())?;
        }
        Ok(m)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.axes {
            write!(f, "{a:?}")?;
        }
        Ok(())
    }
}

pub(crate) fn check_nqubits(nqubits: usize) -> Result<()> {
    if nqubits == 0 {
        return Err(Error::Parameter("qubit count must be at least 1".into()));
    }
    if nqubits > L_MAX {
        return Err(Error::TooManyQubits {
            nqubits,
            max: L_MAX,
        });
    }
    Ok(())
}

/// Basis-index bit of qubit `j` (1-based) in an L-qubit register.
pub(crate) fn qubit_bit(j: usize, nqubits: usize) -> usize {
    nqubits - j
}

/// I^⊗(j−1) ⊗ σ_axis ⊗ I^⊗(L−j).
pub fn pauli_on_qubit(j: usize, axis: Pauli, nqubits: usize) -> Result<ComplexMatrix> {
    check_nqubits(nqubits)?;
    if j == 0 || j > nqubits {
        return Err(Error::QubitIndex { index: j, nqubits });
    }
    let mut axes = vec![Pauli::I; nqubits];
    axes[j - 1] = axis;
    PauliString::new(axes).matrix()
}

/// Measurement scheme: L uncorrelated qubits or one L-qubit GHZ probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Individual,
    Ghz,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Individual => "individual",
            Scheme::Ghz => "ghz",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "individual" | "indv" | "separable" => Ok(Scheme::Individual),
            "ghz" => Ok(Scheme::Ghz),
            other => Err(format!(
                "unknown scheme `{other}` (expected individual or ghz)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeState {
    pub scheme: Scheme,
    pub nqubits: usize,
}

impl ProbeState {
    pub fn new(scheme: Scheme, nqubits: usize) -> Self {
        Self { scheme, nqubits }
    }
}

/// A validated L-qubit density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    nqubits: usize,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity at the crate
    /// tolerances.
    pub fn new(matrix: ComplexMatrix, nqubits: usize) -> Result<Self> {
        Self::with_tolerance(matrix, nqubits, 1.0, true)
    }

    /// Validation with all tolerances multiplied by `factor`. Positivity is
    /// only checked up to 6 qubits (dense eigensolver cost).
    pub(crate) fn with_tolerance(
        matrix: ComplexMatrix,
        nqubits: usize,
        factor: f64,
        check_trace: bool,
    ) -> Result<Self> {
        check_nqubits(nqubits)?;
        if matrix.dim() != 1 << nqubits {
            return Err(Error::DimensionMismatch {
                left: matrix.dim(),
                right: 1 << nqubits,
            });
        }
        let herm = matrix.hermiticity_defect();
        if herm > TOL_HERM * factor {
            return Err(Error::Invariant {
                what: "max |rho - rho^dagger|",
                value: herm,
                limit: TOL_HERM * factor,
            });
        }
        if check_trace {
            let tr = (matrix.trace() - ONE).norm();
            if tr > TOL_TRACE * factor {
                return Err(Error::Invariant {
                    what: "|tr rho - 1|",
                    value: tr,
                    limit: TOL_TRACE * factor,
                });
            }
        }
        if nqubits <= 6 {
            let min = matrix.hermitian_eigenvalues()[0];
            if min < -TOL_PSD * factor {
                return Err(Error::Invariant {
                    what: "min eigenvalue",
                    value: min,
                    limit: -TOL_PSD * factor,
                });
            }
        }
        Ok(Self { matrix, nqubits })
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix, nqubits: usize) -> Self {
        Self { matrix, nqubits }
    }

    /// The maximally mixed state 1/2^L.
    pub fn maximally_mixed(nqubits: usize) -> Result<Self> {
        check_nqubits(nqubits)?;
        let dim = 1 << nqubits;
        Ok(Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
            nqubits,
        })
    }

    pub fn pure(psi: &[C64]) -> Result<Self> {
        let nqubits = psi.len().trailing_zeros() as usize;
        if psi.len() != 1 << nqubits {
            return Err(Error::NotSquare { len: psi.len() });
        }
        Self::new(ComplexMatrix::outer(psi), nqubits)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn nqubits(&self) -> usize {
        self.nqubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Reduced state of qubit `j` (1-based), tracing out the rest.
    pub fn reduced_qubit(&self, j: usize) -> Result<ComplexMatrix> {
        if j == 0 || j > self.nqubits {
            return Err(Error::QubitIndex {
                index: j,
                nqubits: self.nqubits,
            });
        }
        let mask = 1usize << qubit_bit(j, self.nqubits);
        let mut out = ComplexMatrix::zeros(2);
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                if r & !mask != c & !mask {
                    continue;
                }
                let (a, b) = (usize::from(r & mask != 0), usize::from(c & mask != 0));
                out[(a, b)] += self.matrix[(r, c)];
            }
        }
        Ok(out)
    }
}

fn uniform(nqubits: usize) -> f64 {
    (0.5f64).powf(nqubits as f64 / 2.0)
}

/// (|+⟩^⊗L + phase·|−⟩^⊗L)/√2 as a state vector.
fn cat_state(nqubits: usize, phase: C64) -> Vec<C64> {
    let amp = uniform(nqubits) / std::f64::consts::SQRT_2;
    (0..1usize << nqubits)
        .map(|k| {
            let sign = if k.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            (ONE + phase * sign) * amp
        })
        .collect()
}

/// Pure initial state of a probe: |0⟩^⊗L or the GHZ state.
pub fn initial_state(probe: ProbeState) -> Result<DensityMatrix> {
    check_nqubits(probe.nqubits)?;
    let psi = match probe.scheme {
        Scheme::Individual => {
            let mut v = vec![ZERO; 1 << probe.nqubits];
            v[0] = ONE;
            v
        }
        Scheme::Ghz => cat_state(probe.nqubits, ONE),
    };
    Ok(DensityMatrix::from_matrix_unchecked(
        ComplexMatrix::outer(&psi),
        probe.nqubits,
    ))
}

/// The measured projector.
///
/// For the individual scheme every qubit is measured with the same
/// single-qubit projector |Y⟩⟨Y|, |Y⟩ = (|+⟩ + i|−⟩)/√2, so this returns the
/// 2 × 2 matrix; evaluate it against a reduced qubit state (see
/// [`measured_probability`]). For GHZ it returns |GHZ_Y⟩⟨GHZ_Y| on all L
/// qubits.
pub fn projector_y(probe: ProbeState) -> Result<ComplexMatrix> {
    check_nqubits(probe.nqubits)?;
    let nqubits = match probe.scheme {
        Scheme::Individual => 1,
        Scheme::Ghz => probe.nqubits,
    };
    Ok(ComplexMatrix::outer(&cat_state(nqubits, I)))
}

/// tr\[ρP\], real part. Fails if the imaginary residue exceeds 1e−10.
pub fn projection_probability(rho: &ComplexMatrix, projector: &ComplexMatrix) -> Result<f64> {
    if rho.dim() != projector.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: projector.dim(),
        });
    }
    let n = rho.dim();
    let mut acc = ZERO;
    for r in 0..n {
        for c in 0..n {
            acc += rho[(r, c)] * projector[(c, r)];
        }
    }
    if acc.im.abs() >= 1e-10 {
        return Err(Error::ImaginaryResidue(acc.im));
    }
    Ok(acc.re)
}

/// The scheme's observable on an evolved state: qubit 1's |Y⟩ probability
/// for the individual scheme, the GHZ_Y probability otherwise.
pub fn measured_probability(rho: &DensityMatrix, scheme: Scheme) -> Result<f64> {
    let probe = ProbeState::new(scheme, rho.nqubits());
    let p = projector_y(probe)?;
    match scheme {
        Scheme::Individual => projection_probability(&rho.reduced_qubit(1)?, &p),
        Scheme::Ghz => projection_probability(rho.matrix(), &p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) {
        let d = a.max_abs_diff(b);
        assert!(d < tol, "max diff {d:e} >= {tol:e}\n{a:?}\n{b:?}");
    }

    #[test]
    fn single_qubit_paulis() {
        assert_eq!(pauli_on_qubit(1, Pauli::X, 1).unwrap(), Pauli::X.matrix());
        let iz = ComplexMatrix::identity(2).kron(&Pauli::Z.matrix()).unwrap();
        assert_eq!(pauli_on_qubit(2, Pauli::Z, 2).unwrap(), iz);
    }

    #[test]
    fn pauli_index_errors() {
        assert!(matches!(
            pauli_on_qubit(0, Pauli::X, 2),
            Err(Error::QubitIndex { .. })
        ));
        assert!(matches!(
            pauli_on_qubit(3, Pauli::X, 2),
            Err(Error::QubitIndex { .. })
        ));
        assert!(matches!(
            pauli_on_qubit(1, Pauli::X, L_MAX + 1),
            Err(Error::TooManyQubits { .. })
        ));
    }

    #[test]
    fn distinct_sites_commute() {
        let x1 = pauli_on_qubit(1, Pauli::X, 2).unwrap();
        let y2 = pauli_on_qubit(2, Pauli::Y, 2).unwrap();
        assert_eq!(x1.commutator(&y2).unwrap().max_abs(), 0.0);
        // same site anticommutes
        let y1 = pauli_on_qubit(1, Pauli::Y, 2).unwrap();
        assert!(x1.commutator(&y1).unwrap().max_abs() > 1.0);
    }

    #[test]
    fn pauli_strings_are_hermitian_unitary_and_orthogonal() {
        for l in 1..=3 {
            let mats: Vec<ComplexMatrix> = PauliString::enumerate(l)
                .map(|p| p.matrix().unwrap())
                .collect();
            assert_eq!(mats.len(), 4usize.pow(l as u32));
            let dim = 1 << l;
            for (u, mu) in mats.iter().enumerate() {
                assert_eq!(mu.hermiticity_defect(), 0.0);
                assert_close(&(mu * mu), &ComplexMatrix::identity(dim), 1e-15);
                for (v, mv) in mats.iter().enumerate() {
                    let tr = (&mu.adjoint() * mv).trace();
                    let expect = if u == v { dim as f64 } else { 0.0 };
                    assert!((tr - C64::new(expect, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn individual_initial_state_is_ket_zero() {
        let rho = initial_state(ProbeState::new(Scheme::Individual, 1)).unwrap();
        let mut expect = ComplexMatrix::zeros(2);
        expect[(0, 0)] = ONE;
        assert_eq!(rho.matrix(), &expect);
    }

    #[test]
    fn ghz_one_qubit_matches_individual() {
        for l in 1..=4 {
            let g = initial_state(ProbeState::new(Scheme::Ghz, 1)).unwrap();
            let i = initial_state(ProbeState::new(Scheme::Individual, 1)).unwrap();
            assert_close(g.matrix(), i.matrix(), 1e-15);
            let pg = projector_y(ProbeState::new(Scheme::Ghz, 1)).unwrap();
            let pi = projector_y(ProbeState::new(Scheme::Individual, l)).unwrap();
            assert_close(&pg, &pi, 1e-15);
        }
    }

    #[test]
    fn ghz_two_qubits_is_pure() {
        let rho = initial_state(ProbeState::new(Scheme::Ghz, 2)).unwrap();
        let m = rho.matrix();
        assert_close(&(m * m), m, 1e-15);
        assert!((m.trace() - ONE).norm() < 1e-15);
        // (|00> + |11>)/sqrt2
        assert!((m[(0, 0)].re - 0.5).abs() < 1e-15 && (m[(0, 3)].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn initial_states_satisfy_invariants() {
        for l in 1..=4 {
            for scheme in [Scheme::Individual, Scheme::Ghz] {
                let rho = initial_state(ProbeState::new(scheme, l)).unwrap();
                let m = rho.matrix().clone();
                assert!(m.hermiticity_defect() < 1e-12);
                assert!((m.trace() - ONE).norm() < 1e-12);
                assert!(m.hermitian_eigenvalues()[0] > -1e-10);
                DensityMatrix::new(m, l).unwrap();
            }
        }
    }

    #[test]
    fn projectors_are_idempotent_hermitian() {
        for l in 1..=4 {
            for scheme in [Scheme::Individual, Scheme::Ghz] {
                let p = projector_y(ProbeState::new(scheme, l)).unwrap();
                assert!(p.hermiticity_defect() < 1e-12);
                assert_close(&(&p * &p), &p, 1e-12);
                assert!((p.trace() - ONE).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn initial_probabilities_are_one_half() {
        for l in 1..=4 {
            for scheme in [Scheme::Individual, Scheme::Ghz] {
                let rho = initial_state(ProbeState::new(scheme, l)).unwrap();
                let p = measured_probability(&rho, scheme).unwrap();
                assert!((p - 0.5).abs() < 1e-15, "L={l} {scheme}: {p}");
            }
        }
    }

    #[test]
    fn maximally_mixed_against_ghz_projector() {
        for l in 1..=4 {
            let rho = DensityMatrix::maximally_mixed(l).unwrap();
            let p = projector_y(ProbeState::new(Scheme::Ghz, l)).unwrap();
            let prob = projection_probability(rho.matrix(), &p).unwrap();
            assert!((prob - 0.5f64.powi(l as i32)).abs() < 1e-15);
        }
    }

    #[test]
    fn projection_probability_rejects_mismatch_and_complex_trace() {
        let p = projector_y(ProbeState::new(Scheme::Ghz, 2)).unwrap();
        assert!(matches!(
            projection_probability(&ComplexMatrix::identity(2), &p),
            Err(Error::DimensionMismatch { .. })
        ));
        let mut skew = ComplexMatrix::zeros(2);
        skew[(0, 0)] = I;
        assert!(matches!(
            projection_probability(&skew, &ComplexMatrix::identity(2)),
            Err(Error::ImaginaryResidue(_))
        ));
    }

    #[test]
    fn density_matrix_validation() {
        let mut bad = ComplexMatrix::identity(2);
        assert!(DensityMatrix::new(bad.clone(), 1).is_err()); // trace 2
        bad = bad.scale_real(0.5);
        bad[(0, 1)] = C64::new(0.0, 0.1);
        assert!(DensityMatrix::new(bad, 1).is_err()); // not Hermitian
        let neg = ComplexMatrix::from_row_major(vec![
            C64::new(1.5, 0.0),
            ZERO,
            ZERO,
            C64::new(-0.5, 0.0),
        ])
        .unwrap();
        assert!(DensityMatrix::new(neg, 1).is_err());
    }

    #[test]
    fn adjoint_is_an_involution() {
        let a = ComplexMatrix::from_fn(4, |r, c| {
            C64::new(r as f64 * 0.37 - c as f64, 1.0 / (1.0 + (r * c) as f64))
        });
        assert_eq!(a.adjoint().adjoint(), a);
    }
}
