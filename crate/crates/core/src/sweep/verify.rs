// Copyright 2026 The acmag Authors
// SPDX-License-Identifier: Apache-2.0

//! Oracle suite: closed forms against the simulated master equation, the
//! window function against quadrature, and the two forms of the
//! depolarizing dissipator against each other.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{window, Predictor};
use crate::error::Result;
use crate::linalg::C64;
use crate::lindblad::{
    dissipator_depolarizing, dissipator_depolarizing_kraus, evolve, probability_trace,
    IntegratorConfig, NoiseModel, SystemParams, KRAUS_MAX_QUBITS,
};
use crate::oracle::{integrate_adaptive, StateSampler};
use crate::quantum::{initial_state, ProbeState, Scheme};
use crate::sweep::config::SweepConfig;

pub const KRAUS_TOLERANCE: f64 = 1e-12;
pub const KRAUS_STATES: usize = 100;
pub const WINDOW_TOLERANCE: f64 = 1e-10;
pub const WINDOW_POINTS: usize = 1000;
pub const DECAY_TOLERANCE: f64 = 1e-9;
pub const ORACLE_MAX_QUBITS: usize = 4;
pub const ORACLE_EPSILON: f64 = 1e-4;
pub const ORACLE_T_FINAL: f64 = 20.0;
pub const ORACLE_T_POINTS: usize = 201;
pub const ORACLE_M: [f64; 3] = [0.5, 1.5, 3.0];
pub const ORACLE_GAMMA_PARALLEL: [f64; 2] = [0.0, 1e-2];
pub const ORACLE_GAMMA_DEPOLARIZING: f64 = 1e-2;

/// Deliberate defects for exercising the failure path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Predictions use −W(t).
    WindowSign,
}

impl FromStr for Fault {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "window-sign" => Ok(Fault::WindowSign),
            other => Err(format!("unknown fault `{other}` (window-sign)")),
        }
    }
}

fn flipped_window(t: f64, omega: f64, m: f64) -> f64 {
    -window(t, omega, m)
}

fn predictor(fault: Option<Fault>) -> Predictor {
    match fault {
        None => Predictor::default(),
        Some(Fault::WindowSign) => Predictor {
            window: flipped_window,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub points: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: String, points: usize, max_residual: f64, tolerance: f64) -> Self {
        Self {
            name,
            points,
            max_residual,
            tolerance,
            passed: max_residual < tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub fault: Option<Fault>,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}", self.seed)?;
        for c in &self.checks {
            writeln!(
                f,
                "{} {:<28} max residual {:.3e} (tolerance {:.3e}, {} points)",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.max_residual,
                c.tolerance,
                c.points
            )?;
        }
        let failed = self.failures().count();
        if failed == 0 {
            write!(f, "all {} checks passed", self.checks.len())
        } else {
            write!(f, "{failed} of {} checks failed", self.checks.len())
        }
    }
}

/// Max-abs difference of the two depolarizing forms over seeded states.
pub fn kraus_check(nqubits: usize, states: usize, seed: u64) -> Result<Check> {
    let mut sampler = StateSampler::new(seed ^ (nqubits as u64).wrapping_mul(0x9e37_79b9));
    let mut worst = 0.0f64;
    for _ in 0..states {
        let rho = sampler.density_matrix(nqubits)?;
        let gamma = sampler.uniform(1e-3, 1.0);
        let a = dissipator_depolarizing(rho.matrix(), gamma, nqubits)?;
        let b = dissipator_depolarizing_kraus(rho.matrix(), gamma, nqubits)?;
        worst = worst.max(a.max_abs_diff(&b));
    }
    Ok(Check::new(
        format!("kraus-equivalence L={nqubits}"),
        states,
        worst,
        KRAUS_TOLERANCE,
    ))
}

/// Window function against (1/t)∫₀ᵗ 2 cos(ms) cos(ωs) ds at random points,
/// with resonance and t → 0 cases always included.
pub fn window_check(points: usize, seed: u64, fault: Option<Fault>) -> Check {
    let w = predictor(fault).window;
    let mut sampler = StateSampler::new(seed.wrapping_add(0x5eed));
    let omega = 1.0;
    let mut samples: Vec<(f64, f64)> = vec![
        (0.0, omega),
        (1e-12, omega),
        (1e-6, omega),
        (1e-9, 2.5),
        (3.7, omega),
        (40.0, omega),
    ];
    while samples.len() < points {
        let t = 10f64.powf(sampler.uniform(-8.0, 2.0));
        let m = if samples.len() % 10 == 0 {
            omega
        } else {
            sampler.uniform(0.0, 4.0)
        };
        samples.push((t, m));
    }
    let worst = samples
        .par_iter()
        .map(|&(t, m)| {
            let reference = if t == 0.0 {
                2.0
            } else {
                let tol = 1e-13 * t.max(1e-300);
                integrate_adaptive(|s| 2.0 * (m * s).cos() * (omega * s).cos(), 0.0, t, tol) / t
            };
            (w(t, omega, m) - reference).abs()
        })
        .reduce(|| 0.0, f64::max);
    Check::new(
        "window-quadrature".into(),
        samples.len(),
        worst,
        WINDOW_TOLERANCE,
    )
}

/// 5(Lε)² + 3ε, tightened to 5ε² for one qubit.
pub fn oracle_tolerance(nqubits: usize, epsilon: f64) -> f64 {
    if nqubits == 1 {
        5.0 * epsilon * epsilon
    } else {
        5.0 * (nqubits as f64 * epsilon).powi(2) + 3.0 * epsilon
    }
}

fn oracle_integrator() -> IntegratorConfig {
    IntegratorConfig::new(0.05, 200).expect("valid integrator constants")
}

/// Largest |p_numeric − p_closed| over t ∈ [0, 20], both schemes.
pub fn oracle_residual(params: &SystemParams, fault: Option<Fault>) -> Result<(usize, f64)> {
    let times: Vec<f64> = (0..ORACLE_T_POINTS)
        .map(|k| ORACLE_T_FINAL * k as f64 / (ORACLE_T_POINTS - 1) as f64)
        .collect();
    let pred = predictor(fault);
    let mut worst = 0.0f64;
    let mut count = 0;
    for scheme in [Scheme::Individual, Scheme::Ghz] {
        for (t, p) in probability_trace(params, scheme, &times, &oracle_integrator())? {
            worst = worst.max((p - pred.probability(t, params, scheme)?.value).abs());
            count += 1;
        }
    }
    Ok((count, worst))
}

fn oracle_check(
    label: &str,
    nqubits: usize,
    noises: &[NoiseModel],
    cfg: &SweepConfig,
    fault: Option<Fault>,
) -> Result<Check> {
    let cases: Vec<SystemParams> = ORACLE_M
        .iter()
        .flat_map(|&m| {
            noises.iter().map(move |&noise| {
                SystemParams::new(1.0, m, ORACLE_EPSILON, nqubits, noise)
                    .with_parallel_form(cfg.parallel_form)
            })
        })
        .collect();
    let results: Vec<(usize, f64)> = cases
        .par_iter()
        .map(|p| oracle_residual(p, fault))
        .collect::<Result<_>>()?;
    let points = results.iter().map(|r| r.0).sum();
    let worst = results.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(Check::new(
        format!("{label} L={nqubits}"),
        points,
        worst,
        oracle_tolerance(nqubits, ORACLE_EPSILON),
    ))
}

/// GHZ coherence ⟨+⋯+|ρ(t)|−⋯−⟩ against e^{−LΓt}/2 without signal.
pub fn ghz_decay_check(nqubits: usize, noise: NoiseModel, cfg: &SweepConfig) -> Result<Check> {
    let p = SystemParams::new(1.0, 1.5, 0.0, nqubits, noise).with_parallel_form(cfg.parallel_form);
    let rho0 = initial_state(ProbeState::new(Scheme::Ghz, nqubits))?;
    let dim = 1usize << nqubits;
    let amp = (dim as f64).sqrt().recip();
    let plus = vec![C64::new(amp, 0.0); dim];
    let minus: Vec<C64> = (0..dim)
        .map(|k| C64::new(if k.count_ones() % 2 == 0 { amp } else { -amp }, 0.0))
        .collect();
    let times = [5.0, 10.0, 20.0];
    let mut worst = 0.0f64;
    for &t in &times {
        let rho = evolve(&rho0, t, &p, &oracle_integrator())?;
        let m = rho.matrix();
        let mut c = C64::new(0.0, 0.0);
        for r in 0..dim {
            for k in 0..dim {
                c += plus[r].conj() * m[(r, k)] * minus[k];
            }
        }
        let expect = 0.5 * (-(nqubits as f64) * noise.rate() * t).exp();
        worst = worst.max((c - C64::new(expect, 0.0)).norm());
    }
    Ok(Check::new(
        format!("ghz-decay {} L={nqubits}", noise.name()),
        times.len(),
        worst,
        DECAY_TOLERANCE,
    ))
}

/// Runs every check; the seed drives the random states and sample points.
pub fn verify(cfg: &SweepConfig, fault: Option<Fault>) -> Result<VerifyReport> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.jobs {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| crate::Error::Parameter(format!("worker pool: {e}")))?;
    pool.install(|| {
        let mut checks = Vec::new();
        for l in 1..=KRAUS_MAX_QUBITS {
            checks.push(kraus_check(l, KRAUS_STATES, cfg.seed)?);
        }
        checks.push(window_check(WINDOW_POINTS, cfg.seed, fault));
        let parallel: Vec<NoiseModel> = ORACLE_GAMMA_PARALLEL
            .iter()
            .map(|&gamma_x| NoiseModel::ParallelX { gamma_x })
            .collect();
        let depolarizing = [NoiseModel::Depolarizing {
            gamma_dp: ORACLE_GAMMA_DEPOLARIZING,
        }];
        for l in 1..=ORACLE_MAX_QUBITS {
            checks.push(oracle_check("parallel-oracle", l, &parallel, cfg, fault)?);
        }
        for l in 1..=ORACLE_MAX_QUBITS {
            checks.push(oracle_check(
                "depolarizing-oracle",
                l,
                &depolarizing,
                cfg,
                fault,
            )?);
        }
        for l in 1..=ORACLE_MAX_QUBITS {
            checks.push(ghz_decay_check(l, parallel[1], cfg)?);
            checks.push(ghz_decay_check(l, depolarizing[0], cfg)?);
        }
        Ok(VerifyReport {
            seed: cfg.seed,
            fault,
            checks,
        })
    })
}
