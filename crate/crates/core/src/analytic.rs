// Copyright 2026 The acmag Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form leading-order predictions.
//!
//! Everything here is first order in the signal amplitude ε. The central
//! object is the window function
//!
//! W(t) = (1/t) ∫₀ᵗ 2 cos(mt′) cos(ωt′) dt′
//!      = sin[(ω+m)t]/[(ω+m)t] + sin[(ω−m)t]/[(ω−m)t],
//!
//! which is 2 for t ≲ 1/(ω+m), about 1 up to t ≈ 1/|ω−m|, and then decays as
//! 1/(|ω−m|t).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::lindblad::{NoiseModel, SystemParams};
use crate::quantum::Scheme;

/// Below this |x| sinc is evaluated by its Taylor series.
const SINC_SERIES: f64 = 1e-4;

/// sin(x)/x.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < SINC_SERIES {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// W(t); equals 2 at t = 0 and handles m = ω through the sinc limit.
pub fn window(t: f64, omega: f64, m: f64) -> f64 {
    sinc((omega + m) * t) + sinc((omega - m) * t)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WindowEval {
    pub t: f64,
    pub w: f64,
}

impl WindowEval {
    pub fn at(t: f64, omega: f64, m: f64) -> Self {
        Self {
            t,
            w: window(t, omega, m),
        }
    }
}

/// (e^w − 1)/w, with a Taylor branch near w = 0.
fn expm1_over(w: Complex64) -> Complex64 {
    if w.norm() < 0.5 {
        // terms fall by at least a factor 2k, 24 terms is far below 1 ulp
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 2..=25 {
            term = term * w / k as f64;
            sum += term;
        }
        sum
    } else {
        (w.exp() - 1.0) / w
    }
}

/// ∫₀ᵗ e^{at′} e^{ibt′} dt′.
fn exp_osc_integral(a: f64, b: f64, t: f64) -> Complex64 {
    expm1_over(Complex64::new(a, b) * t) * t
}

/// The three time integrals that enter the single-qubit solution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SignalIntegrals {
    /// ∫₀ᵗ cos(mt′) sin(ωt′) e^{−γt′} dt′
    pub s_minus: f64,
    /// ∫₀ᵗ cos(mt′) sin(ωt′) e^{+γt′} dt′
    pub s_plus: f64,
    /// ∫₀ᵗ cos(mt′) cos(ωt′) dt′ = t·W(t)/2
    pub c: f64,
}

pub fn signal_integrals(t: f64, omega: f64, m: f64, gamma: f64) -> SignalIntegrals {
    // cos(mt) sin(ωt) = [sin((ω+m)t) + sin((ω−m)t)]/2
    let sin_part = |a: f64| {
        0.5 * (exp_osc_integral(a, omega + m, t).im + exp_osc_integral(a, omega - m, t).im)
    };
    SignalIntegrals {
        s_minus: sin_part(-gamma),
        s_plus: sin_part(gamma),
        c: 0.5 * t * window(t, omega, m),
    }
}

/// Coefficients of a single-qubit operator in the {|+⟩, |−⟩} basis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoefficientSet {
    pub c_pp: C64,
    pub c_mm: C64,
    pub c_pm: C64,
    pub c_mp: C64,
}

impl CoefficientSet {
    /// |0⟩⟨0| = (|+⟩ + |−⟩)(⟨+| + ⟨−|)/2.
    pub fn ground() -> Self {
        let h = C64::new(0.5, 0.0);
        Self {
            c_pp: h,
            c_mm: h,
            c_pm: h,
            c_mp: h,
        }
    }

    /// Projection probability onto |Y⟩ = (|+⟩ + i|−⟩)/√2:
    /// [c₊₊ + c₋₋ + i c₊₋ − i c₋₊]/2.
    pub fn probability_y(&self) -> f64 {
        let i = C64::new(0.0, 1.0);
        (0.5 * (self.c_pp + self.c_mm + i * self.c_pm - i * self.c_mp)).re
    }

    /// The 2 × 2 matrix in the computational basis.
    pub fn to_matrix(&self) -> crate::linalg::ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = [C64::new(s, 0.0), C64::new(s, 0.0)];
        let minus = [C64::new(s, 0.0), C64::new(-s, 0.0)];
        crate::linalg::ComplexMatrix::from_fn(2, |r, c| {
            self.c_pp * plus[r] * plus[c]
                + self.c_pm * plus[r] * minus[c]
                + self.c_mp * minus[r] * plus[c]
                + self.c_mm * minus[r] * minus[c]
        })
    }
}

/// Leading-order evolution of one qubit's coefficients under the drive and
/// σ_X dephasing at rate Γ_X (`params.noise` must be `ParallelX` or `None`).
pub fn evolve_coefficients(
    init: CoefficientSet,
    t: f64,
    params: &SystemParams,
) -> Result<CoefficientSet> {
    let gamma = parallel_rate(params)?;
    let eps = params.epsilon;
    let ints = signal_integrals(t, params.omega, params.m, gamma);
    let decay = (-gamma * t).exp();
    let i = C64::new(0.0, 1.0);

    let coherence_sum = init.c_pm + init.c_mp;
    let population_diff = init.c_pp - init.c_mm;
    let transfer = 2.0 * eps * decay * ints.s_plus;

    Ok(CoefficientSet {
        c_pp: init.c_pp - 2.0 * eps * ints.s_minus * coherence_sum,
        c_mm: init.c_mm + 2.0 * eps * ints.s_minus * coherence_sum,
        c_pm: decay * (1.0 + 4.0 * i * eps * ints.c) * init.c_pm + transfer * population_diff,
        c_mp: decay * (1.0 - 4.0 * i * eps * ints.c) * init.c_mp + transfer * population_diff,
    })
}

/// Whether a closed-form probability is inside its leading-order domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Validity {
    Ok,
    LeadingOrderSuspect,
}

impl Validity {
    pub fn as_str(self) -> &'static str {
        match self {
            Validity::Ok => "ok",
            Validity::LeadingOrderSuspect => "leading-order-suspect",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Prediction {
    pub value: f64,
    pub validity: Validity,
}

fn parallel_rate(params: &SystemParams) -> Result<f64> {
    match params.noise {
        NoiseModel::None => Ok(0.0),
        NoiseModel::ParallelX { gamma_x } => Ok(gamma_x),
        NoiseModel::Depolarizing { .. } => Err(Error::NoiseMismatch {
            expected: "parallel",
            found: "depolarizing",
        }),
    }
}

fn depolarizing_rate(params: &SystemParams) -> Result<f64> {
    match params.noise {
        NoiseModel::None => Ok(0.0),
        NoiseModel::Depolarizing { gamma_dp } => Ok(gamma_dp),
        NoiseModel::ParallelX { .. } => Err(Error::NoiseMismatch {
            expected: "depolarizing",
            found: "parallel",
        }),
    }
}

pub type WindowFn = fn(f64, f64, f64) -> f64;

/// The closed forms, parameterized by the window implementation so that a
/// verification run can substitute a deliberately broken one.
#[derive(Clone, Copy)]
pub struct Predictor {
    pub window: WindowFn,
}

impl Default for Predictor {
    fn default() -> Self {
        Self { window }
    }
}

impl Predictor {
    fn w(&self, t: f64, p: &SystemParams) -> f64 {
        (self.window)(t, p.omega, p.m)
    }

    fn predict(&self, value: f64, t: f64, p: &SystemParams) -> Prediction {
        let validity = if p.leading_order_suspect(t) {
            Validity::LeadingOrderSuspect
        } else {
            Validity::Ok
        };
        Prediction { value, validity }
    }

    /// 1/2 − ε t e^{−Γt} W(t), per qubit, σ_X noise.
    pub fn p_individual_parallel(&self, t: f64, p: &SystemParams) -> Result<Prediction> {
        let g = parallel_rate(p)?;
        let v = 0.5 - p.epsilon * t * (-g * t).exp() * self.w(t, p);
        Ok(self.predict(v, t, p))
    }

    /// 1/2 − e^{−Γt} ε t W(t), per qubit, depolarizing noise.
    pub fn p_individual_depolarizing(&self, t: f64, p: &SystemParams) -> Result<Prediction> {
        let g = depolarizing_rate(p)?;
        let v = 0.5 - (-g * t).exp() * p.epsilon * t * self.w(t, p);
        Ok(self.predict(v, t, p))
    }

    /// 1/2 − e^{−LΓt} L ε t W(t).
    pub fn p_ghz_parallel(&self, t: f64, p: &SystemParams) -> Result<Prediction> {
        let g = parallel_rate(p)?;
        let l = p.nqubits as f64;
        let v = 0.5 - (-l * g * t).exp() * l * p.epsilon * t * self.w(t, p);
        Ok(self.predict(v, t, p))
    }

    /// 2^{−L} + (1/2 − 2^{−L}) e^{−LΓt} − (e^{−LΓt}/2) sin(2LεtW(t)).
    pub fn p_ghz_depolarizing_exact(&self, t: f64, p: &SystemParams) -> Result<Prediction> {
        let g = depolarizing_rate(p)?;
        let l = p.nqubits as f64;
        let floor = 0.5f64.powi(p.nqubits as i32);
        let decay = (-l * g * t).exp();
        let v = floor + (0.5 - floor) * decay
            - 0.5 * decay * (2.0 * l * p.epsilon * t * self.w(t, p)).sin();
        Ok(self.predict(v, t, p))
    }

    /// (1/2) e^{−LΓt} − e^{−LΓt} L ε t W(t), the L ≫ 1 form.
    pub fn p_ghz_depolarizing_leading(&self, t: f64, p: &SystemParams) -> Result<Prediction> {
        let g = depolarizing_rate(p)?;
        let l = p.nqubits as f64;
        let decay = (-l * g * t).exp();
        let v = 0.5 * decay - decay * l * p.epsilon * t * self.w(t, p);
        Ok(self.predict(v, t, p))
    }

    /// The prediction a numeric run of the same scheme and noise is checked
    /// against.
    pub fn probability(&self, t: f64, p: &SystemParams, scheme: Scheme) -> Result<Prediction> {
        match (scheme, p.noise) {
            (Scheme::Individual, NoiseModel::Depolarizing { .. }) => {
                self.p_individual_depolarizing(t, p)
            }
            (Scheme::Individual, _) => self.p_individual_parallel(t, p),
            (Scheme::Ghz, NoiseModel::Depolarizing { .. }) => self.p_ghz_depolarizing_exact(t, p),
            (Scheme::Ghz, _) => self.p_ghz_parallel(t, p),
        }
    }

    /// ∂p/∂ε of [`Predictor::probability`] at `p.epsilon`.
    pub fn probability_slope(&self, t: f64, p: &SystemParams, scheme: Scheme) -> f64 {
        let w = self.w(t, p);
        let rate = p.noise.rate();
        let l = p.nqubits as f64;
        match (scheme, p.noise) {
            (Scheme::Individual, _) => -t * (-rate * t).exp() * w,
            (Scheme::Ghz, NoiseModel::Depolarizing { .. }) => {
                -(-l * rate * t).exp() * l * t * w * (2.0 * l * p.epsilon * t * w).cos()
            }
            (Scheme::Ghz, _) => -(-l * rate * t).exp() * l * t * w,
        }
    }
}

pub fn p_individual_parallel(t: f64, p: &SystemParams) -> Result<Prediction> {
    Predictor::default().p_individual_parallel(t, p)
}

pub fn p_individual_depolarizing(t: f64, p: &SystemParams) -> Result<Prediction> {
    Predictor::default().p_individual_depolarizing(t, p)
}

pub fn p_ghz_parallel(t: f64, p: &SystemParams) -> Result<Prediction> {
    Predictor::default().p_ghz_parallel(t, p)
}

pub fn p_ghz_depolarizing_exact(t: f64, p: &SystemParams) -> Result<Prediction> {
    Predictor::default().p_ghz_depolarizing_exact(t, p)
}

pub fn p_ghz_depolarizing_leading(t: f64, p: &SystemParams) -> Result<Prediction> {
    Predictor::default().p_ghz_depolarizing_leading(t, p)
}

/// Scheme/noise dispatch with the standard window.
pub fn probability(t: f64, p: &SystemParams, scheme: Scheme) -> Result<Prediction> {
    Predictor::default().probability(t, p, scheme)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::integrate_adaptive;

    fn params(l: usize, m: f64, eps: f64, noise: NoiseModel) -> SystemParams {
        SystemParams::new(1.0, m, eps, l, noise)
    }

    #[test]
    fn window_limits() {
        assert_eq!(window(0.0, 1.0, 3.0), 2.0);
        assert!((window(1e-9, 1.0, 3.0) - 2.0).abs() < 1e-15);
        for t in [0.1, 1.0, 7.3] {
            let w = window(t, 1.0, 1.0);
            assert!((w - ((2.0 * t).sin() / (2.0 * t) + 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn window_matches_quadrature() {
        let (omega, m, t) = (1.0, 3.0, 10.0);
        let q = integrate_adaptive(|s| 2.0 * (m * s).cos() * (omega * s).cos(), 0.0, t, 1e-14);
        assert!((window(t, omega, m) - q / t).abs() < 1e-10);
    }

    #[test]
    fn sinc_branches_agree_at_switch() {
        let x = SINC_SERIES;
        let series = 1.0 - x * x / 6.0 + x.powi(4) / 120.0;
        assert!((series - x.sin() / x).abs() < 1e-15);
        assert_eq!(sinc(0.0), 1.0);
    }

    #[test]
    fn integrals_at_zero() {
        let s = signal_integrals(0.0, 1.0, 1.3, 0.1);
        assert_eq!((s.s_minus, s.s_plus, s.c), (0.0, 0.0, 0.0));
    }

    #[test]
    fn integrals_elementary_case() {
        for t in [0.3, 2.0, 11.0] {
            let s = signal_integrals(t, 1.0, 0.0, 0.0);
            assert!((s.s_minus - (1.0 - t.cos())).abs() < 1e-14);
            assert!((s.s_plus - (1.0 - t.cos())).abs() < 1e-14);
        }
    }

    #[test]
    fn integrals_match_quadrature() {
        let (omega, m, g, t) = (1.0, 1.4, 0.01, 7.0);
        let s = signal_integrals(t, omega, m, g);
        let sm = integrate_adaptive(
            |x| (m * x).cos() * (omega * x).sin() * (-g * x).exp(),
            0.0,
            t,
            1e-14,
        );
        let sp = integrate_adaptive(
            |x| (m * x).cos() * (omega * x).sin() * (g * x).exp(),
            0.0,
            t,
            1e-14,
        );
        let c = integrate_adaptive(|x| (m * x).cos() * (omega * x).cos(), 0.0, t, 1e-14);
        assert!((s.s_minus - sm).abs() < 1e-10);
        assert!((s.s_plus - sp).abs() < 1e-10);
        assert!((s.c - c).abs() < 1e-10);
    }

    #[test]
    fn integrals_stable_at_resonance_and_tiny_rate() {
        // m = ω and γ → 0: the (ω−m) component is exactly zero
        let s = signal_integrals(5.0, 1.0, 1.0, 1e-12);
        let direct = 0.5 * (1.0 - (2.0 * 5.0f64).cos()) / 2.0;
        assert!((s.s_minus - direct).abs() < 1e-12);
        assert!((s.s_plus - direct).abs() < 1e-12);
    }

    #[test]
    fn coefficients_without_signal_only_decay() {
        let p = params(1, 1.5, 0.0, NoiseModel::ParallelX { gamma_x: 0.05 });
        let init = CoefficientSet {
            c_pp: C64::new(0.3, 0.0),
            c_mm: C64::new(0.7, 0.0),
            c_pm: C64::new(0.1, 0.2),
            c_mp: C64::new(0.1, -0.2),
        };
        let t = 4.0;
        let out = evolve_coefficients(init, t, &p).unwrap();
        let d = (-0.05 * t).exp();
        assert_eq!(out.c_pp, init.c_pp);
        assert_eq!(out.c_mm, init.c_mm);
        assert!((out.c_pm - init.c_pm * d).norm() < 1e-16);
        assert!((out.c_mp - init.c_mp * d).norm() < 1e-16);
    }

    #[test]
    fn population_transfers_to_coherences() {
        let (g, eps, t) = (0.05, 1e-3, 3.0);
        let p = params(1, 1.5, eps, NoiseModel::ParallelX { gamma_x: g });
        let init = CoefficientSet {
            c_pp: C64::new(1.0, 0.0),
            c_mm: C64::new(0.0, 0.0),
            c_pm: C64::new(0.0, 0.0),
            c_mp: C64::new(0.0, 0.0),
        };
        let out = evolve_coefficients(init, t, &p).unwrap();
        let ints = integrate_adaptive(|x| (1.5 * x).cos() * x.sin() * (g * x).exp(), 0.0, t, 1e-14);
        let expect = 2.0 * eps * (-g * t).exp() * ints;
        assert!((out.c_pm.re - expect).abs() < 1e-14 && out.c_pm.im == 0.0);
        assert_eq!(out.c_pm, out.c_mp);
        assert_eq!(out.c_pp, init.c_pp);
    }

    #[test]
    fn assembled_ground_state_reproduces_closed_form() {
        for &(m, g, t) in &[(1.5, 0.01, 10.0), (0.5, 0.0, 3.0), (3.0, 0.2, 0.7)] {
            let p = params(1, m, 1e-4, NoiseModel::ParallelX { gamma_x: g });
            let out = evolve_coefficients(CoefficientSet::ground(), t, &p).unwrap();
            let closed = p_individual_parallel(t, &p).unwrap().value;
            assert!((out.probability_y() - closed).abs() < 1e-15);
            // and through the 2x2 matrix
            let rho = out.to_matrix();
            let proj =
                crate::quantum::projector_y(crate::ProbeState::new(Scheme::Individual, 1)).unwrap();
            let via_matrix = crate::quantum::projection_probability(&rho, &proj).unwrap();
            assert!((via_matrix - closed).abs() < 1e-15);
        }
    }

    #[test]
    fn no_signal_gives_one_half() {
        let p = params(3, 1.5, 0.0, NoiseModel::ParallelX { gamma_x: 0.1 });
        assert_eq!(p_individual_parallel(5.0, &p).unwrap().value, 0.5);
        assert_eq!(p_ghz_parallel(5.0, &p).unwrap().value, 0.5);
    }

    #[test]
    fn resonant_individual_probability() {
        let (eps, t) = (1e-4, 6.0);
        let p = params(1, 1.0, eps, NoiseModel::None);
        let expect = 0.5 - eps * t * (1.0 + (2.0 * t).sin() / (2.0 * t));
        assert!((p_individual_parallel(t, &p).unwrap().value - expect).abs() < 1e-16);
    }

    #[test]
    fn ghz_one_qubit_equals_individual() {
        for k in 0..100 {
            let t = 0.2 * k as f64;
            let p = params(1, 1.7, 2e-4, NoiseModel::ParallelX { gamma_x: 0.03 });
            assert_eq!(
                p_ghz_parallel(t, &p).unwrap().value,
                p_individual_parallel(t, &p).unwrap().value
            );
            let d = params(1, 1.7, 2e-4, NoiseModel::Depolarizing { gamma_dp: 0.03 });
            let leading = p_individual_depolarizing(t, &d).unwrap().value;
            let exact = p_ghz_depolarizing_exact(t, &d).unwrap().value;
            // equal up to the cubic term of the sine
            assert!((leading - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn depolarizing_limits() {
        let p = params(5, 2.0, 0.0, NoiseModel::Depolarizing { gamma_dp: 0.1 });
        let far = p_ghz_depolarizing_exact(1e4, &p).unwrap().value;
        assert!((far - 1.0 / 32.0).abs() < 1e-15);
        let lead = p_ghz_depolarizing_leading(3.0, &p).unwrap().value;
        assert!((lead - 0.5 * (-1.5f64).exp()).abs() < 1e-16);
        let p10 = params(10, 2.0, 1e-5, NoiseModel::Depolarizing { gamma_dp: 0.1 });
        assert_eq!(p_ghz_depolarizing_leading(0.0, &p10).unwrap().value, 0.5);
        assert!((p_ghz_depolarizing_exact(0.0, &p10).unwrap().value - 0.5).abs() < 1e-16);
    }

    #[test]
    fn depolarizing_leading_tracks_exact_at_large_l() {
        // 2^{-L} << e^{-LΓt} and |2LεtW| << 1
        let l = 20;
        for k in 1..=50 {
            let t = 0.1 * k as f64;
            let p = params(l, 1.3, 1e-6, NoiseModel::Depolarizing { gamma_dp: 1e-3 });
            let a = p_ghz_depolarizing_leading(t, &p).unwrap().value;
            let b = p_ghz_depolarizing_exact(t, &p).unwrap().value;
            assert!(((a - b) / b).abs() < 0.01, "t={t}: {a} vs {b}");
        }
    }

    #[test]
    fn noise_mismatch_is_an_error() {
        let p = params(2, 1.5, 1e-4, NoiseModel::Depolarizing { gamma_dp: 0.1 });
        assert!(matches!(
            p_ghz_parallel(1.0, &p),
            Err(Error::NoiseMismatch { .. })
        ));
        let q = params(2, 1.5, 1e-4, NoiseModel::ParallelX { gamma_x: 0.1 });
        assert!(p_ghz_depolarizing_exact(1.0, &q).is_err());
    }

    #[test]
    fn validity_flag_trips_past_threshold() {
        let p = params(4, 1.5, 1e-3, NoiseModel::None);
        assert_eq!(p_ghz_parallel(20.0, &p).unwrap().validity, Validity::Ok);
        assert_eq!(
            p_ghz_parallel(30.0, &p).unwrap().validity,
            Validity::LeadingOrderSuspect
        );
    }

    #[test]
    fn slope_matches_finite_differences() {
        let pred = Predictor::default();
        let h = 1e-6;
        for scheme in [Scheme::Individual, Scheme::Ghz] {
            for noise in [
                NoiseModel::ParallelX { gamma_x: 0.02 },
                NoiseModel::Depolarizing { gamma_dp: 0.02 },
            ] {
                for &t in &[0.5, 3.0, 12.0] {
                    let p = params(3, 1.6, 1e-3, noise);
                    let up = pred
                        .probability(t, &p.with_epsilon(1e-3 + h), scheme)
                        .unwrap()
                        .value;
                    let dn = pred
                        .probability(t, &p.with_epsilon(1e-3 - h), scheme)
                        .unwrap()
                        .value;
                    let fd = (up - dn) / (2.0 * h);
                    let slope = pred.probability_slope(t, &p, scheme);
                    assert!(
                        ((fd - slope) / slope).abs() < 1e-8,
                        "{scheme} {noise:?} t={t}: {fd} vs {slope}"
                    );
                }
            }
        }
    }
}
