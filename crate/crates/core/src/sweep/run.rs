// Copyright 2026 The acmag Authors
// SPDX-License-Identifier: Apache-2.0

//! Grid execution: one optimizer per (L, m, Γ) point and scheme.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::Predictor;
use crate::error::{Error, Result};
use crate::lindblad::{probability_at, probability_trace, SystemParams};
use crate::quantum::Scheme;
use crate::sensitivity::{
    delta_p, optimize_time, MeasurementBudget, NoiseKind, OptimumValidity, Regime, Scenario,
};
use crate::sweep::config::{Mode, SweepConfig};

/// Largest [`numeric_work`] a numeric point may spend per probability.
pub const NUMERIC_WORK_LIMIT: f64 = 1e7;

/// Relative analytic/numeric disagreement that compare mode flags.
pub const COMPARE_TOLERANCE: f64 = 0.1;

/// Largest |∂p/∂ε|·ε product used for the numeric central difference.
const LINEAR_AMPLITUDE: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "L")]
    pub nqubits: usize,
    pub m: f64,
    pub gamma: f64,
    pub noise: NoiseKind,
    pub scheme: Scheme,
    pub t_opt: Option<f64>,
    /// √T·δε, or δε when T normalization is off.
    pub delta_eps_norm: Option<f64>,
    /// δε^(GHZ)/δε^(indv) at the same (L, m, Γ), when both were computed.
    pub ratio: Option<f64>,
    pub regime: Option<Regime>,
    pub validity: String,
}

struct Evaluation {
    t_opt: Option<f64>,
    delta_eps: Option<f64>,
    regime: Option<Regime>,
    flags: Vec<String>,
}

fn error_flag(e: &Error) -> String {
    format!("error: {}", e.to_string().replace([',', '\n'], ";"))
}

fn system(cfg: &SweepConfig, s: &Scenario, nqubits: usize, epsilon: f64) -> SystemParams {
    SystemParams::new(s.omega, s.m, epsilon, nqubits, s.noise.model(s.gamma))
        .with_parallel_form(cfg.parallel_form)
}

/// Steps × 4^n cost of simulating one probability at time t, where n is L
/// for GHZ and 1 for the individual scheme.
pub fn numeric_work(
    cfg: &SweepConfig,
    scenario: &Scenario,
    budget: &MeasurementBudget,
    t: f64,
) -> f64 {
    let n = match budget.scheme {
        Scheme::Individual => 1,
        Scheme::Ghz => budget.nqubits,
    };
    let base = system(cfg, scenario, n, 0.0);
    let steps = (t / cfg.integrator.step_bound(&base)).ceil();
    steps * 4f64.powi(n as i32)
}

/// δε at time t from the simulated master equation: p at ε = 0 and a
/// second-order one-sided difference in ε for the slope.
pub fn numeric_delta_epsilon(
    cfg: &SweepConfig,
    scenario: &Scenario,
    budget: &MeasurementBudget,
    t: f64,
) -> Result<f64> {
    let l = budget.nqubits;
    let amplitude = cfg.epsilon.min(LINEAR_AMPLITUDE / (l as f64 * t));
    let p = |eps: f64| {
        probability_at(
            &system(cfg, scenario, l, eps),
            budget.scheme,
            t,
            &cfg.integrator,
        )
    };
    let p0 = p(0.0)?;
    let slope = (4.0 * p(amplitude)? - p(2.0 * amplitude)? - 3.0 * p0) / (2.0 * amplitude);
    let value = delta_p(p0.clamp(0.0, 1.0), budget.repetitions(t))? / slope.abs();
    Ok(if value.is_finite() {
        value
    } else {
        f64::INFINITY
    })
}

fn evaluate(cfg: &SweepConfig, scenario: &Scenario, budget: &MeasurementBudget) -> Evaluation {
    let analytic = match optimize_time(scenario, budget, None) {
        Ok(r) => r,
        Err(e) => {
            return Evaluation {
                t_opt: None,
                delta_eps: None,
                regime: None,
                flags: vec![error_flag(&e)],
            }
        }
    };
    let mut flags = Vec::new();
    if analytic.validity == OptimumValidity::BracketBoundary {
        flags.push(analytic.validity.as_str().to_string());
    }
    let finite = |v: f64| v.is_finite().then_some(v);
    let delta_eps = match cfg.mode {
        Mode::Analytic => finite(analytic.delta_eps),
        Mode::Numeric | Mode::Compare
            if numeric_work(cfg, scenario, budget, analytic.t_opt) > NUMERIC_WORK_LIMIT =>
        {
            flags.push("numeric-skipped".into());
            (cfg.mode == Mode::Compare)
                .then_some(analytic.delta_eps)
                .and_then(finite)
        }
        Mode::Numeric | Mode::Compare => {
            match numeric_delta_epsilon(cfg, scenario, budget, analytic.t_opt) {
                Ok(numeric) if cfg.mode == Mode::Numeric => finite(numeric),
                Ok(numeric) => {
                    let rel = (numeric / analytic.delta_eps - 1.0).abs();
                    if !(rel <= COMPARE_TOLERANCE) {
                        flags.push(format!("mismatch {rel:.3e}"));
                    }
                    finite(analytic.delta_eps)
                }
                Err(e) => {
                    flags.push(error_flag(&e));
                    None
                }
            }
        }
    };
    Evaluation {
        t_opt: Some(analytic.t_opt),
        delta_eps,
        regime: Some(analytic.regime),
        flags,
    }
}

fn point_rows(cfg: &SweepConfig, nqubits: usize, m: f64, gamma: f64) -> Vec<SweepRow> {
    let scenario = Scenario::new(cfg.omega, m, gamma, cfg.noise);
    let norm = if cfg.t_normalized {
        cfg.total_time.sqrt()
    } else {
        1.0
    };
    let evals: Vec<(Scheme, Evaluation)> = cfg
        .schemes
        .iter()
        .map(|&scheme| {
            let budget = MeasurementBudget::new(cfg.total_time, nqubits, scheme);
            (scheme, evaluate(cfg, &scenario, &budget))
        })
        .collect();
    let find = |s: Scheme| {
        evals
            .iter()
            .find(|(k, _)| *k == s)
            .and_then(|(_, e)| e.delta_eps)
    };
    let ratio = match (find(Scheme::Ghz), find(Scheme::Individual)) {
        (Some(g), Some(i)) if i > 0.0 => Some(g / i),
        _ => None,
    };
    evals
        .into_iter()
        .map(|(scheme, e)| SweepRow {
            nqubits,
            m,
            gamma,
            noise: cfg.noise,
            scheme,
            t_opt: e.t_opt,
            delta_eps_norm: e.delta_eps.map(|d| d * norm),
            ratio,
            regime: e.regime,
            validity: if e.flags.is_empty() {
                "ok".into()
            } else {
                e.flags.join("; ")
            },
        })
        .collect()
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| Error::Parameter(format!("worker pool: {e}")))
}

/// Rows in grid order: L outermost, then m, then Γ, then scheme.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let points: Vec<(usize, f64, f64)> = cfg
        .nqubits
        .iter()
        .flat_map(|&l| {
            cfg.m
                .iter()
                .flat_map(move |&m| cfg.gamma.iter().map(move |&g| (l, m, g)))
        })
        .collect();
    let blocks: Vec<Vec<SweepRow>> = pool(cfg.jobs)?.install(|| {
        points
            .par_iter()
            .map(|&(l, m, g)| point_rows(cfg, l, m, g))
            .collect()
    });
    Ok(blocks.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityRow {
    #[serde(rename = "L")]
    pub nqubits: usize,
    pub m: f64,
    pub gamma: f64,
    pub noise: NoiseKind,
    pub scheme: Scheme,
    pub t: f64,
    pub p_analytic: Option<f64>,
    pub p_numeric: Option<f64>,
    pub validity: String,
}

fn trace_block(
    cfg: &SweepConfig,
    nqubits: usize,
    m: f64,
    gamma: f64,
    scheme: Scheme,
) -> Vec<ProbabilityRow> {
    let scenario = Scenario::new(cfg.omega, m, gamma, cfg.noise);
    let params = system(cfg, &scenario, nqubits, cfg.epsilon);
    let n = cfg.t_points;
    let times: Vec<f64> = (0..n)
        .map(|k| cfg.t_final * k as f64 / (n - 1) as f64)
        .collect();
    let numeric = match cfg.mode {
        Mode::Analytic => None,
        _ => Some(probability_trace(&params, scheme, &times, &cfg.integrator)),
    };
    let predictor = Predictor::default();
    times
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let mut flags = Vec::new();
            let p_analytic = match cfg.mode {
                Mode::Numeric => None,
                _ => match predictor.probability(t, &params, scheme) {
                    Ok(pred) => {
                        if pred.validity != crate::analytic::Validity::Ok {
                            flags.push(pred.validity.as_str().to_string());
                        }
                        Some(pred.value)
                    }
                    Err(e) => {
                        flags.push(error_flag(&e));
                        None
                    }
                },
            };
            let p_numeric = match &numeric {
                None => None,
                Some(Ok(trace)) => Some(trace[k].1),
                Some(Err(e)) => {
                    flags.push(error_flag(e));
                    None
                }
            };
            ProbabilityRow {
                nqubits,
                m,
                gamma,
                noise: cfg.noise,
                scheme,
                t,
                p_analytic,
                p_numeric,
                validity: if flags.is_empty() {
                    "ok".into()
                } else {
                    flags.join("; ")
                },
            }
        })
        .collect()
}

/// p(t) on [0, t_final] for every grid point and scheme.
pub fn run_probability(cfg: &SweepConfig) -> Result<Vec<ProbabilityRow>> {
    cfg.validate()?;
    let blocks: Vec<(usize, f64, f64, Scheme)> = cfg
        .nqubits
        .iter()
        .flat_map(|&l| {
            cfg.m.iter().flat_map(move |&m| {
                cfg.gamma
                    .iter()
                    .flat_map(move |&g| cfg.schemes.iter().map(move |&s| (l, m, g, s)))
            })
        })
        .collect();
    let out: Vec<Vec<ProbabilityRow>> = pool(cfg.jobs)?.install(|| {
        blocks
            .par_iter()
            .map(|&(l, m, g, s)| trace_block(cfg, l, m, g, s))
            .collect()
    });
    Ok(out.into_iter().flatten().collect())
}
