// Copyright 2026 The acmag Authors
// SPDX-License-Identifier: Apache-2.0

//! Interaction-picture Lindblad dynamics.
//!
//! dρ/dt = −i[H_I(t), ρ] + D\[ρ\] with the full drive
//!
//! H_I(t) = Σ_j −ε σ_X^j [cos(ω+m)t + cos(ω−m)t] − ε σ_Y^j [sin(ω+m)t + sin(ω−m)t],
//!
//! integrated by fixed-step classical RK4. This is the brute-force route
//! that every closed form in [`crate::analytic`] is checked against.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, I};
use crate::quantum::{
    check_nqubits, measured_probability, qubit_bit, DensityMatrix, Pauli, PauliString, ProbeState,
    Scheme,
};

/// Largest register for the Pauli-string (Kraus) form of depolarization.
pub const KRAUS_MAX_QUBITS: usize = 3;

/// Hard cap on integration steps per call.
const MAX_STEPS: f64 = 1e10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum NoiseModel {
    None,
    ParallelX { gamma_x: f64 },
    Depolarizing { gamma_dp: f64 },
}

impl NoiseModel {
    pub fn rate(&self) -> f64 {
        match *self {
            NoiseModel::None => 0.0,
            NoiseModel::ParallelX { gamma_x } => gamma_x,
            NoiseModel::Depolarizing { gamma_dp } => gamma_dp,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NoiseModel::None => "none",
            NoiseModel::ParallelX { .. } => "parallel",
            NoiseModel::Depolarizing { .. } => "depolarizing",
        }
    }
}

/// Which normalization of the σ_X dissipator to use.
///
/// `Paper` is (Γ/2) Σ_j (σ_X^j ρ σ_X^j − ρ/2), which is not trace preserving:
/// it equals the canonical form plus (LΓ/4)ρ. `Canonical` is
/// (Γ/2) Σ_j (σ_X^j ρ σ_X^j − ρ) and reproduces e^{−Γt} coherence decay.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParallelNoiseForm {
    Paper,
    #[default]
    Canonical,
}

impl FromStr for ParallelNoiseForm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "paper" => Ok(Self::Paper),
            "canonical" => Ok(Self::Canonical),
            other => Err(format!(
                "unknown parallel noise form `{other}` (paper|canonical)"
            )),
        }
    }
}

impl fmt::Display for ParallelNoiseForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Paper => "paper",
            Self::Canonical => "canonical",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Qubit angular frequency ω.
    pub omega: f64,
    /// Signal angular frequency m.
    pub m: f64,
    /// Signal amplitude ε.
    pub epsilon: f64,
    pub nqubits: usize,
    pub noise: NoiseModel,
    pub parallel_form: ParallelNoiseForm,
}

impl SystemParams {
    pub fn new(omega: f64, m: f64, epsilon: f64, nqubits: usize, noise: NoiseModel) -> Self {
        Self {
            omega,
            m,
            epsilon,
            nqubits,
            noise,
            parallel_form: ParallelNoiseForm::default(),
        }
    }

    pub fn with_parallel_form(mut self, form: ParallelNoiseForm) -> Self {
        self.parallel_form = form;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Parameter(msg.to_string()));
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return bad("omega must be positive");
        }
        if !(self.m >= 0.0 && self.m.is_finite()) {
            return bad("m must be non-negative");
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return bad("epsilon must be non-negative");
        }
        if self.nqubits == 0 {
            return bad("qubit count must be at least 1");
        }
        if !(self.noise.rate() >= 0.0 && self.noise.rate().is_finite()) {
            return bad("noise rate must be non-negative");
        }
        Ok(())
    }

    /// ε·t·L > 0.1: the leading-order closed forms are not trustworthy.
    pub fn leading_order_suspect(&self, t: f64) -> bool {
        self.epsilon * t * self.nqubits.max(1) as f64 > 0.1
    }

    /// Drive coefficients (h_x, h_y) with H_I = Σ_j h_x σ_X^j + h_y σ_Y^j.
    pub fn drive(&self, t: f64) -> (f64, f64) {
        let (sum, diff) = ((self.omega + self.m) * t, (self.omega - self.m) * t);
        (
            -self.epsilon * (sum.cos() + diff.cos()),
            -self.epsilon * (sum.sin() + diff.sin()),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub dt_max: f64,
    /// RK4 steps per period of the fastest drive component 2π/(ω+m); ≥ 40.
    pub steps_per_fast_period: u32,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            dt_max: 0.1,
            steps_per_fast_period: 100,
        }
    }
}

impl IntegratorConfig {
    pub fn new(dt_max: f64, steps_per_fast_period: u32) -> Result<Self> {
        if steps_per_fast_period < 40 {
            return Err(Error::Parameter(format!(
                "steps_per_fast_period = {steps_per_fast_period}; at least 40 required"
            )));
        }
        if !(dt_max > 0.0) {
            return Err(Error::Parameter("dt_max must be positive".into()));
        }
        Ok(Self {
            dt_max,
            steps_per_fast_period,
        })
    }

    pub fn step_bound(&self, p: &SystemParams) -> f64 {
        let fast = 2.0 * PI / ((p.omega + p.m) * self.steps_per_fast_period as f64);
        self.dt_max.min(fast)
    }

    /// Number of equal steps covering `span`.
    pub fn steps_for(&self, span: f64, p: &SystemParams) -> Result<usize> {
        let n = (span / self.step_bound(p)).ceil();
        if !n.is_finite() || n > MAX_STEPS {
            return Err(Error::StepUnderflow {
                steps: n,
                t_final: span,
            });
        }
        Ok(n as usize)
    }
}

/// Dense H_I(t) on L qubits.
pub fn interaction_hamiltonian(t: f64, p: &SystemParams) -> Result<ComplexMatrix> {
    check_nqubits(p.nqubits)?;
    let dim = 1 << p.nqubits;
    let (hx, hy) = p.drive(t);
    let id = ComplexMatrix::identity(dim);
    let mut h = ComplexMatrix::zeros(dim);
    for j in 1..=p.nqubits {
        let bit = qubit_bit(j, p.nqubits);
        id.pauli_left_into(bit, Pauli::X, C64::new(hx, 0.0), &mut h);
        id.pauli_left_into(bit, Pauli::Y, C64::new(hy, 0.0), &mut h);
    }
    Ok(h)
}

fn nqubits_of(rho: &ComplexMatrix, nqubits: usize) -> Result<()> {
    if rho.dim() != 1 << nqubits {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: 1 << nqubits,
        });
    }
    Ok(())
}

fn parallel_into(
    rho: &ComplexMatrix,
    gamma_x: f64,
    nqubits: usize,
    form: ParallelNoiseForm,
    out: &mut ComplexMatrix,
) {
    if gamma_x == 0.0 {
        return;
    }
    let half = C64::new(gamma_x / 2.0, 0.0);
    for j in 1..=nqubits {
        rho.pauli_sandwich_into(qubit_bit(j, nqubits), Pauli::X, half, out);
    }
    let loss = match form {
        ParallelNoiseForm::Paper => 0.5,
        ParallelNoiseForm::Canonical => 1.0,
    };
    out.axpy(C64::new(-(gamma_x / 2.0) * loss * nqubits as f64, 0.0), rho);
}

fn depolarizing_into(rho: &ComplexMatrix, gamma_dp: f64, nqubits: usize, out: &mut ComplexMatrix) {
    if gamma_dp == 0.0 {
        return;
    }
    let rate = nqubits as f64 * gamma_dp;
    out.axpy(C64::new(-rate, 0.0), rho);
    let fill = rate / rho.dim() as f64;
    for i in 0..rho.dim() {
        out[(i, i)] += fill;
    }
}

/// (Γ_X/2) Σ_j (σ_X^j ρ σ_X^j − c·ρ) with c = 1/2 (`Paper`) or 1 (`Canonical`).
pub fn dissipator_parallel(
    rho: &ComplexMatrix,
    gamma_x: f64,
    nqubits: usize,
    form: ParallelNoiseForm,
) -> Result<ComplexMatrix> {
    check_nqubits(nqubits)?;
    nqubits_of(rho, nqubits)?;
    let mut out = ComplexMatrix::zeros(rho.dim());
    parallel_into(rho, gamma_x, nqubits, form, &mut out);
    Ok(out)
}

/// −LΓ ρ + (LΓ/2^L) 1.
pub fn dissipator_depolarizing(
    rho: &ComplexMatrix,
    gamma_dp: f64,
    nqubits: usize,
) -> Result<ComplexMatrix> {
    check_nqubits(nqubits)?;
    nqubits_of(rho, nqubits)?;
    let mut out = ComplexMatrix::zeros(rho.dim());
    depolarizing_into(rho, gamma_dp, nqubits, &mut out);
    Ok(out)
}

/// The same channel written with the 4^L − 1 jump operators
/// L_v = (√(LΓ)/2^L) σ_{v₁} ⊗ ⋯ ⊗ σ_{v_L}:
/// Σ_{v≠0} (L_v ρ L_v† − ½{L_v†L_v, ρ}).
pub fn dissipator_depolarizing_kraus(
    rho: &ComplexMatrix,
    gamma_dp: f64,
    nqubits: usize,
) -> Result<ComplexMatrix> {
    check_nqubits(nqubits)?;
    if nqubits > KRAUS_MAX_QUBITS {
        return Err(Error::TooManyQubits {
            nqubits,
            max: KRAUS_MAX_QUBITS,
        });
    }
    nqubits_of(rho, nqubits)?;
    let dim = rho.dim();
    // |coefficient|² of every jump operator
    let weight = nqubits as f64 * gamma_dp / (dim * dim) as f64;
    let mut out = ComplexMatrix::zeros(dim);
    for string in PauliString::enumerate(nqubits).filter(|s| !s.is_identity()) {
        let jump = string.matrix()?.scale_real(weight.sqrt());
        let jump_dag = jump.adjoint();
        out += &(&(&jump * rho) * &jump_dag);
        let n = &jump_dag * &jump;
        let anti = &(&n * rho) + &(rho * &n);
        out.axpy(C64::new(-0.5, 0.0), &anti);
    }
    Ok(out)
}

/// Right-hand side −i[H_I(t), ρ] + D[ρ].
fn rhs(t: f64, rho: &ComplexMatrix, p: &SystemParams) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(rho.dim());
    let (hx, hy) = p.drive(t);
    // −i[h σ, ρ] = −i h σρ + i h ρσ
    for j in 1..=p.nqubits {
        let bit = qubit_bit(j, p.nqubits);
        for (axis, h) in [(Pauli::X, hx), (Pauli::Y, hy)] {
            if h == 0.0 {
                continue;
            }
            rho.pauli_left_into(bit, axis, -I * h, &mut out);
            rho.pauli_right_into(bit, axis, I * h, &mut out);
        }
    }
    match p.noise {
        NoiseModel::None => {}
        NoiseModel::ParallelX { gamma_x } => {
            parallel_into(rho, gamma_x, p.nqubits, p.parallel_form, &mut out)
        }
        NoiseModel::Depolarizing { gamma_dp } => {
            depolarizing_into(rho, gamma_dp, p.nqubits, &mut out)
        }
    }
    out
}

fn rk4_step(t: f64, dt: f64, rho: &mut ComplexMatrix, p: &SystemParams) {
    let h = C64::new(dt, 0.0);
    let half = C64::new(dt / 2.0, 0.0);

    let k1 = rhs(t, rho, p);
    let mut y = rho.clone();
    y.axpy(half, &k1);
    let k2 = rhs(t + dt / 2.0, &y, p);
    y = rho.clone();
    y.axpy(half, &k2);
    let k3 = rhs(t + dt / 2.0, &y, p);
    y = rho.clone();
    y.axpy(h, &k3);
    let k4 = rhs(t + dt, &y, p);

    let sixth = C64::new(dt / 6.0, 0.0);
    rho.axpy(sixth, &k1);
    rho.axpy(sixth * 2.0, &k2);
    rho.axpy(sixth * 2.0, &k3);
    rho.axpy(sixth, &k4);
}

fn integrate(rho: &mut ComplexMatrix, t0: f64, t1: f64, steps: usize, p: &SystemParams) {
    if steps == 0 {
        return;
    }
    let dt = (t1 - t0) / steps as f64;
    for k in 0..steps {
        rk4_step(t0 + k as f64 * dt, dt, rho, p);
    }
}

fn trace_preserving(p: &SystemParams) -> bool {
    !matches!(
        (p.noise, p.parallel_form),
        (NoiseModel::ParallelX { gamma_x }, ParallelNoiseForm::Paper) if gamma_x > 0.0
    )
}

fn checked(rho: ComplexMatrix, p: &SystemParams) -> Result<DensityMatrix> {
    DensityMatrix::with_tolerance(rho, p.nqubits, 10.0, trace_preserving(p))
}

fn check_start(rho0: &DensityMatrix, p: &SystemParams) -> Result<()> {
    p.validate()?;
    if rho0.nqubits() != p.nqubits {
        return Err(Error::DimensionMismatch {
            left: rho0.dim(),
            right: 1 << p.nqubits,
        });
    }
    Ok(())
}

/// ρ(t_final) from ρ(0) with the step count chosen by `cfg`.
pub fn evolve(
    rho0: &DensityMatrix,
    t_final: f64,
    p: &SystemParams,
    cfg: &IntegratorConfig,
) -> Result<DensityMatrix> {
    if !(t_final >= 0.0) {
        return Err(Error::Parameter(format!(
            "t_final = {t_final} must be >= 0"
        )));
    }
    let steps = cfg.steps_for(t_final, p)?;
    evolve_steps(rho0, t_final, p, steps)
}

/// ρ(t_final) with exactly `steps` RK4 steps (used for convergence studies).
pub fn evolve_steps(
    rho0: &DensityMatrix,
    t_final: f64,
    p: &SystemParams,
    steps: usize,
) -> Result<DensityMatrix> {
    check_start(rho0, p)?;
    if t_final > 0.0 && steps == 0 {
        return Err(Error::StepUnderflow {
            steps: 0.0,
            t_final,
        });
    }
    let mut rho = rho0.matrix().clone();
    integrate(&mut rho, 0.0, t_final, steps, p);
    checked(rho, p)
}

/// The scheme's projection probability on an increasing time grid, from one
/// integration pass starting at t = 0.
///
/// Individual probes are uncorrelated sensors, each with its own noise
/// channel, so that scheme is simulated as a single qubit whatever L is.
pub fn probability_trace(
    p: &SystemParams,
    scheme: Scheme,
    times: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<(f64, f64)>> {
    let single;
    let p = match scheme {
        Scheme::Individual => {
            single = SystemParams { nqubits: 1, ..*p };
            &single
        }
        Scheme::Ghz => p,
    };
    if times.is_empty() {
        return Err(Error::Parameter("empty time grid".into()));
    }
    if times[0] < 0.0 || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Parameter(
            "time grid must be non-negative and strictly increasing".into(),
        ));
    }
    let rho0 = crate::quantum::initial_state(ProbeState::new(scheme, p.nqubits))?;
    check_start(&rho0, p)?;
    let mut rho = rho0.into_matrix();
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        let steps = cfg.steps_for(target - t, p)?;
        integrate(&mut rho, t, target, steps, p);
        t = target;
        let state = checked(rho.clone(), p)?;
        out.push((t, measured_probability(&state, scheme)?));
    }
    Ok(out)
}

/// Probability at a single time.
pub fn probability_at(
    p: &SystemParams,
    scheme: Scheme,
    t: f64,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    Ok(probability_trace(p, scheme, &[t], cfg)?[0].1)
}
