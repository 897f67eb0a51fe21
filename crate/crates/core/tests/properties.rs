// Copyright 2026 The acmag Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form and sensitivity invariants.

use acmag::analytic::{p_ghz_parallel, probability, window, Validity};
use acmag::lindblad::{NoiseModel, SystemParams};
use acmag::quantum::{projector_y, ProbeState};
use acmag::sensitivity::{
    asymptotic_delta_epsilon, optimize_time, ratio, MeasurementBudget, NoiseKind, Scenario,
};
use acmag::{ComplexMatrix, Scheme};
use proptest::prelude::*;

const T: f64 = 1e12;
const GAMMA: f64 = 1e-6;

proptest! {
    #[test]
    fn window_is_bounded_by_two(t in 0.0f64..1e4, m in 0.0f64..10.0, omega in 0.1f64..10.0) {
        prop_assert!(window(t, omega, m).abs() <= 2.0);
    }

    #[test]
    fn window_is_continuous_at_resonance(t in 1e-3f64..1e3) {
        let at = window(t, 1.0, 1.0);
        let near = window(t, 1.0, 1.0 + 1e-9);
        prop_assert!((at - near).abs() < 1e-5);
    }

    #[test]
    fn probabilities_stay_in_range_where_valid(
        t in 0.0f64..200.0,
        m in 0.0f64..4.0,
        l in 1usize..50,
        g in 0.0f64..0.1,
        dp in any::<bool>(),
        ghz in any::<bool>(),
    ) {
        let noise = if dp { NoiseModel::Depolarizing { gamma_dp: g } } else { NoiseModel::ParallelX { gamma_x: g } };
        let scheme = if ghz { Scheme::Ghz } else { Scheme::Individual };
        let p = SystemParams::new(1.0, m, 1e-4, l, noise);
        let pred = probability(t, &p, scheme).unwrap();
        if pred.validity == Validity::Ok {
            prop_assert!((0.0..=1.0).contains(&pred.value), "{pred:?}");
        }
    }

    #[test]
    fn projectors_are_idempotent(l in 1usize..=5, ghz in any::<bool>()) {
        let scheme = if ghz { Scheme::Ghz } else { Scheme::Individual };
        let p: ComplexMatrix = projector_y(ProbeState::new(scheme, l)).unwrap();
        prop_assert!((&p * &p).max_abs_diff(&p) < 1e-12);
        prop_assert!(p.hermiticity_defect() < 1e-12);
    }
}

#[test]
fn window_regimes() {
    let (omega, m) = (1.0, 1.2);
    for k in 0..100 {
        let t = 0.1 / (omega + m) * k as f64 / 100.0;
        let w = window(t, omega, m);
        assert!((1.6..=2.0).contains(&w), "t={t} W={w}");
    }
    let d = (omega - m).abs();
    for k in 0..1000 {
        let t = 20.0 / d + k as f64 * 0.37;
        assert!(window(t, omega, m).abs() <= 1.5 / (d * t));
    }
}

#[test]
fn ghz_probability_at_one_qubit_equals_individual() {
    // The depolarizing GHZ form keeps the full sine, so the two agree up to
    // the cubic term in the accumulated phase.
    for noise in [
        NoiseModel::ParallelX { gamma_x: 0.01 },
        NoiseModel::Depolarizing { gamma_dp: 0.01 },
    ] {
        let p = SystemParams::new(1.0, 1.7, 1e-6, 1, noise);
        for k in 0..100 {
            let t = 0.2 * k as f64;
            let a = probability(t, &p, Scheme::Ghz).unwrap().value;
            let b = probability(t, &p, Scheme::Individual).unwrap().value;
            assert!((a - b).abs() < 1e-13, "{noise:?} t={t}");
        }
    }
}

#[test]
fn leading_order_flag_marks_large_phase() {
    let p = SystemParams::new(1.0, 1.1, 1e-3, 10, NoiseModel::ParallelX { gamma_x: 0.0 });
    assert_eq!(p_ghz_parallel(5.0, &p).unwrap().validity, Validity::Ok);
    assert_eq!(
        p_ghz_parallel(20.0, &p).unwrap().validity,
        Validity::LeadingOrderSuspect
    );
}

#[test]
fn ratio_decreases_as_detuning_grows_from_gamma_to_l_gamma() {
    let l = 1000;
    for noise in [NoiseKind::Parallel, NoiseKind::Depolarizing] {
        let detunings: Vec<f64> = (0..=12)
            .map(|k| GAMMA * 10f64.powf(3.0 * k as f64 / 12.0))
            .collect();
        let values: Vec<f64> = detunings
            .iter()
            .map(|&d| {
                ratio(&Scenario::new(1.0, 1.0 + d, GAMMA, noise), l, T)
                    .unwrap()
                    .ratio
            })
            .collect();
        for w in values.windows(2) {
            assert!(w[1] <= 1.05 * w[0], "{noise}: {values:?}");
        }
        assert!(values[12] < 0.2 * values[0]);
    }
}

#[test]
fn saturated_ghz_uncertainty_scales_as_inverse_root_l() {
    let detuning = 0.1;
    for noise in [NoiseKind::Parallel, NoiseKind::Depolarizing] {
        let s = Scenario::new(1.0, 1.0 + detuning, GAMMA, noise);
        let start = (10.0 * detuning / GAMMA) as usize;
        let pts: Vec<(f64, f64)> = (0..6)
            .map(|k| {
                let l = start << k;
                let r =
                    optimize_time(&s, &MeasurementBudget::new(T, l, Scheme::Ghz), None).unwrap();
                ((l as f64).ln(), r.delta_eps.ln())
            })
            .collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
            / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
        assert!((slope + 0.5).abs() <= 0.1, "{noise}: slope {slope}");
    }
}

#[test]
fn asymptotic_branches_track_the_optimizer() {
    // deep inside each regime the closed-form branch is within a factor 2
    let cases = [
        (1usize, 0.1, Scheme::Individual),
        (100, 0.1, Scheme::Ghz),
        (10, 1e-9, Scheme::Individual),
        (1000, 1e-7, Scheme::Ghz),
    ];
    for (l, d, scheme) in cases {
        let s = Scenario::new(1.0, 1.0 + d, 1e-5, NoiseKind::Parallel);
        let b = MeasurementBudget::new(T, l, scheme);
        let best = optimize_time(&s, &b, None).unwrap().delta_eps;
        let asym = asymptotic_delta_epsilon(&s, &b).value().unwrap();
        let f = best / asym;
        assert!((0.5..=2.0).contains(&f), "L={l} d={d} {scheme}: {f}");
    }
}
