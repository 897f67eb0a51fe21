// Copyright 2026 The acmag Authors
// SPDX-License-Identifier: Apache-2.0

//! Amplitude uncertainty, interrogation-time optimization and the
//! GHZ/individual comparison.
//!
//! A measurement repeated N_r times estimates p with δp = √(p(1−p)/N_r), and
//! the amplitude uncertainty is δε = δp / |∂p/∂ε|, evaluated at ε = 0. With a
//! total time T split into runs of length t, N_r = L·T/t for L uncorrelated
//! qubits and T/t for one L-qubit GHZ probe.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytic::window;
use crate::error::{Error, Result};
use crate::lindblad::NoiseModel;
use crate::quantum::Scheme;

/// Width of the band around a regime boundary that is reported as crossover.
pub const CROSSOVER_BAND: f64 = 3.0;

/// Log-grid density of the optimizer's scan stage.
pub const POINTS_PER_DECADE: usize = 2000;

const GOLDEN: f64 = 0.381_966_011_250_105_1; // 2 − φ
const TIE_RELATIVE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    Parallel,
    Depolarizing,
}

impl NoiseKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NoiseKind::Parallel => "parallel",
            NoiseKind::Depolarizing => "depolarizing",
        }
    }

    pub fn model(self, rate: f64) -> NoiseModel {
        match self {
            NoiseKind::Parallel => NoiseModel::ParallelX { gamma_x: rate },
            NoiseKind::Depolarizing => NoiseModel::Depolarizing { gamma_dp: rate },
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NoiseKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "parallel" | "parallel-x" | "x" => Ok(NoiseKind::Parallel),
            "depolarizing" | "dp" => Ok(NoiseKind::Depolarizing),
            other => Err(format!(
                "unknown noise `{other}` (expected parallel or depolarizing)"
            )),
        }
    }
}

/// Signal and noise environment shared by both schemes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub omega: f64,
    pub m: f64,
    pub gamma: f64,
    pub noise: NoiseKind,
}

impl Scenario {
    pub fn new(omega: f64, m: f64, gamma: f64, noise: NoiseKind) -> Self {
        Self {
            omega,
            m,
            gamma,
            noise,
        }
    }

    /// |ω − m|.
    pub fn detuning(&self) -> f64 {
        (self.omega - self.m).abs()
    }

    fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::Parameter("omega must be positive".into()));
        }
        if !(self.m >= 0.0 && self.m.is_finite()) {
            return Err(Error::Parameter("m must be non-negative".into()));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::Parameter("gamma must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBudget {
    pub total_time: f64,
    pub nqubits: usize,
    pub scheme: Scheme,
}

impl MeasurementBudget {
    pub fn new(total_time: f64, nqubits: usize, scheme: Scheme) -> Self {
        Self {
            total_time,
            nqubits,
            scheme,
        }
    }

    /// N_r for runs of length t.
    pub fn repetitions(&self, t: f64) -> f64 {
        match self.scheme {
            Scheme::Individual => self.nqubits as f64 * self.total_time / t,
            Scheme::Ghz => self.total_time / t,
        }
    }

    /// Decoherence rate of one run: LΓ for GHZ, Γ for a single qubit.
    pub fn effective_rate(&self, gamma: f64) -> f64 {
        match self.scheme {
            Scheme::Individual => gamma,
            Scheme::Ghz => self.nqubits as f64 * gamma,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.nqubits == 0 {
            return Err(Error::Parameter("qubit count must be at least 1".into()));
        }
        if !(self.total_time > 0.0) {
            return Err(Error::Parameter("total time must be positive".into()));
        }
        Ok(())
    }
}

/// √(p(1−p)/N_r).
pub fn delta_p(p: f64, n_r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Probability(p));
    }
    if !(n_r > 0.0) {
        return Err(Error::Parameter(format!(
            "repetition count {n_r} must be positive"
        )));
    }
    Ok((p * (1.0 - p) / n_r).sqrt())
}

/// δε at interrogation time t.
///
/// The ε = 0 working point gives p = 1/2 except for GHZ under depolarizing
/// noise, where p = 2^{−L} + (1/2 − 2^{−L}) e^{−LΓt}. At large L this is
/// √(t/T)·√(e^{LΓt}/2 − 1/4)/(tL|W|); at L = 1 it coincides with the
/// individual formula.
pub fn delta_epsilon(t: f64, scenario: &Scenario, budget: &MeasurementBudget) -> Result<f64> {
    scenario.validate()?;
    budget.validate()?;
    if !(t > 0.0 && t <= budget.total_time) {
        return Err(Error::Parameter(format!(
            "t = {t} outside (0, T = {}]",
            budget.total_time
        )));
    }
    let w = window(t, scenario.omega, scenario.m).abs();
    if w == 0.0 {
        return Err(Error::WindowNode { t });
    }
    let l = budget.nqubits as f64;
    let n_r = budget.repetitions(t);
    // Scale numerator and slope by e^{x} to keep e^{−x} from underflowing.
    let (x, amplitude) = match budget.scheme {
        Scheme::Individual => (scenario.gamma * t, t * w),
        Scheme::Ghz => (l * scenario.gamma * t, l * t * w),
    };
    let grow = x.exp();
    let p_scaled = match (budget.scheme, scenario.noise) {
        (Scheme::Ghz, NoiseKind::Depolarizing) => {
            let floor = 0.5f64.powi(budget.nqubits.min(2000) as i32);
            floor * grow + (0.5 - floor)
        }
        _ => 0.5 * grow,
    };
    let variance_scaled = p_scaled * (grow - p_scaled);
    let value = (variance_scaled / n_r).sqrt() / amplitude;
    Ok(if value.is_finite() {
        value
    } else {
        f64::INFINITY
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    DetuningLimited,
    DecoherenceLimited,
    Crossover,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::DetuningLimited => "detuning-limited",
            Regime::DecoherenceLimited => "decoherence-limited",
            Regime::Crossover => "crossover",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Compares the run's decoherence rate with the detuning, with a ±3× band.
/// Exact resonance counts as decoherence-limited.
pub fn classify(scenario: &Scenario, budget: &MeasurementBudget) -> Regime {
    let rate = budget.effective_rate(scenario.gamma);
    let detuning = scenario.detuning();
    if detuning == 0.0 {
        Regime::DecoherenceLimited
    } else if detuning > CROSSOVER_BAND * rate {
        Regime::DetuningLimited
    } else if rate > CROSSOVER_BAND * detuning {
        Regime::DecoherenceLimited
    } else {
        Regime::Crossover
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimumValidity {
    Ok,
    /// The best grid point is an endpoint of the bracket.
    BracketBoundary,
}

impl OptimumValidity {
    pub fn as_str(self) -> &'static str {
        match self {
            OptimumValidity::Ok => "ok",
            OptimumValidity::BracketBoundary => "bracket-boundary",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SensitivityResult {
    pub t_opt: f64,
    pub delta_eps: f64,
    pub regime: Regime,
    pub validity: OptimumValidity,
}

/// [10⁻³/(ω+m), min(T, 10³·max(1/Γ_eff, 1/|ω−m|))].
pub fn default_bracket(scenario: &Scenario, budget: &MeasurementBudget) -> (f64, f64) {
    let lo = 1e-3 / (scenario.omega + scenario.m);
    let slowest = (1.0 / budget.effective_rate(scenario.gamma)).max(1.0 / scenario.detuning());
    let hi = budget.total_time.min(1e3 * slowest);
    (lo, hi)
}

fn objective(t: f64, scenario: &Scenario, budget: &MeasurementBudget) -> f64 {
    delta_epsilon(t, scenario, budget).unwrap_or(f64::INFINITY)
}

/// Golden-section minimization of `f` over [a, b].
fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut x1 = a + GOLDEN * (b - a);
    let mut x2 = b - GOLDEN * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while (b - a).abs() > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + GOLDEN * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - GOLDEN * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Global minimizer of δε(t) over the bracket (the default one if `None`):
/// a log-grid scan catches the window's nodes and side lobes, then
/// golden-section search in ln t refines around the best grid point.
pub fn optimize_time(
    scenario: &Scenario,
    budget: &MeasurementBudget,
    bracket: Option<(f64, f64)>,
) -> Result<SensitivityResult> {
    scenario.validate()?;
    budget.validate()?;
    let (lo, hi) = bracket.unwrap_or_else(|| default_bracket(scenario, budget));
    if !(lo > 0.0 && hi > lo && hi <= budget.total_time) {
        return Err(Error::Parameter(format!(
            "bracket [{lo:e}, {hi:e}] must lie inside (0, T = {:e}]",
            budget.total_time
        )));
    }
    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    let decades = (hi / lo).log10();
    let n = ((decades * POINTS_PER_DECADE as f64).ceil() as usize).max(2) + 1;
    let step = (ln_hi - ln_lo) / (n - 1) as f64;
    let at = |k: usize| {
        if k == n - 1 {
            hi
        } else {
            (ln_lo + k as f64 * step).exp()
        }
    };

    let mut best = (0usize, f64::INFINITY);
    for k in 0..n {
        let v = objective(at(k), scenario, budget);
        if v < best.1 * (1.0 - TIE_RELATIVE) {
            best = (k, v);
        }
    }
    let (k, grid_value) = best;
    if !grid_value.is_finite() {
        return Err(Error::NoFiniteObjective { lo, hi });
    }

    let left = at(k.saturating_sub(1)).ln();
    let right = at((k + 1).min(n - 1)).ln();
    let (ln_t, refined) = golden_section(
        |u| objective(u.exp(), scenario, budget),
        left,
        right,
        1e-12 * (1.0 + ln_hi.abs().max(ln_lo.abs())),
    );
    let (t_opt, delta_eps) = if refined < grid_value {
        (ln_t.exp(), refined)
    } else {
        (at(k), grid_value)
    };
    let validity = if k == 0 || k == n - 1 {
        OptimumValidity::BracketBoundary
    } else {
        OptimumValidity::Ok
    };
    Ok(SensitivityResult {
        t_opt,
        delta_eps,
        regime: classify(scenario, budget),
        validity,
    })
}

/// Order-of-magnitude optimum in the two limiting regimes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Asymptotic {
    DetuningLimited(f64),
    DecoherenceLimited(f64),
    Crossover { detuning: f64, decoherence: f64 },
}

impl Asymptotic {
    pub fn regime(&self) -> Regime {
        match self {
            Asymptotic::DetuningLimited(_) => Regime::DetuningLimited,
            Asymptotic::DecoherenceLimited(_) => Regime::DecoherenceLimited,
            Asymptotic::Crossover { .. } => Regime::Crossover,
        }
    }

    /// The branch value, or `None` inside the crossover band.
    pub fn value(&self) -> Option<f64> {
        match *self {
            Asymptotic::DetuningLimited(v) | Asymptotic::DecoherenceLimited(v) => Some(v),
            Asymptotic::Crossover { .. } => None,
        }
    }
}

/// √(|ω−m|/T)/√L or /L (individual, GHZ) when detuning-limited,
/// √(Γ/T)/√L when decoherence-limited; both noise kinds share the forms.
pub fn asymptotic_delta_epsilon(scenario: &Scenario, budget: &MeasurementBudget) -> Asymptotic {
    let l = budget.nqubits as f64;
    let t = budget.total_time;
    let detuning = match budget.scheme {
        Scheme::Individual => (scenario.detuning() / t).sqrt() / l.sqrt(),
        Scheme::Ghz => (scenario.detuning() / t).sqrt() / l,
    };
    let decoherence = (scenario.gamma / t).sqrt() / l.sqrt();
    match classify(scenario, budget) {
        Regime::DetuningLimited => Asymptotic::DetuningLimited(detuning),
        Regime::DecoherenceLimited => Asymptotic::DecoherenceLimited(decoherence),
        Regime::Crossover => Asymptotic::Crossover {
            detuning,
            decoherence,
        },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioResult {
    pub ghz: SensitivityResult,
    pub individual: SensitivityResult,
    /// δε^(GHZ)/δε^(indv), each at its own optimal time.
    pub ratio: f64,
}

pub fn ratio(scenario: &Scenario, nqubits: usize, total_time: f64) -> Result<RatioResult> {
    let ghz = optimize_time(
        scenario,
        &MeasurementBudget::new(total_time, nqubits, Scheme::Ghz),
        None,
    )?;
    let individual = optimize_time(
        scenario,
        &MeasurementBudget::new(total_time, nqubits, Scheme::Individual),
        None,
    )?;
    Ok(RatioResult {
        ratio: ghz.delta_eps / individual.delta_eps,
        ghz,
        individual,
    })
}
