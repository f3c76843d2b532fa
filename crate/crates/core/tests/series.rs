mod common;

use common::*;
use proptest::prelude::*;
use srcflow_core::expansions::{
    invert_f, regular_series, regular_terms, scaling_exponents, singular_residual_order, Regime,
    SeriesCoefficients,
};
use srcflow_core::{Calibration, Error, FlowConfig, IsentropeModel};

#[test]
fn chosen_scalings_satisfy_the_dominance_conditions() {
    let models = [
        IsentropeModel::ideal_with_c(3.0, 1.0, 1.0).unwrap(),
        IsentropeModel::ideal_with_c(5.0, 2.0, 0.5).unwrap(),
        IsentropeModel::vdw_with_c(3.0, 1.0).unwrap(),
    ];
    for m in models {
        for regime in [Regime::SmallI, Regime::LargeI] {
            let choice = scaling_exponents(&m, regime).unwrap();
            assert!(choice.is_feasible());
            // ε → 0 in the regime's own limit of I
            let small_i = if regime == Regime::SmallI { 1e-6 } else { 1e6 };
            assert!(choice.epsilon(small_i) < 1e-2);
            assert!((choice.intensity(choice.epsilon(3.7)) / 3.7 - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn singular_orders_for_other_constants() {
    let m = IsentropeModel::ideal_with_c(5.0, 1.0, 2.0).unwrap();
    let coeffs = SeriesCoefficients { c1: 2.0, c2: 0.5, c3: -0.3, c4: 0.7, ..Default::default() };
    let xs = linspace(0.6, 1.8, 40);
    for regime in [Regime::SmallI, Regime::LargeI] {
        let report = singular_residual_order(&m, regime, &coeffs, 0.8, &[1e-2, 5e-3, 2.5e-3], &xs).unwrap();
        assert!(report.pass && report.fitted_order > 1.8, "{report:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn invert_f_round_trips(n in prop::sample::select(vec![3.0, 5.0, 6.0]), c in 0.2f64..4.0, v in 0.05f64..50.0) {
        let m = IsentropeModel::ideal_with_c(n, 1.3, c).unwrap();
        let back = invert_f(&m, f(&m, v)).unwrap();
        prop_assert!((back - v).abs() <= 1e-12 * v);
    }

    #[test]
    fn invert_f_vdw_round_trips(factor in 1.01f64..3.0, w in -3.0f64..2.0) {
        let c = IsentropeModel::vdw_critical_c(3.0).unwrap() * factor;
        let m = IsentropeModel::vdw_with_c(3.0, c).unwrap();
        let v = 1.0 / 3.0 + 10f64.powf(w);
        let back = invert_f(&m, f(&m, v)).unwrap();
        prop_assert!((back - v).abs() <= 1e-9 * v);
    }
}

#[test]
fn invert_f_reports_every_root_when_f_folds() {
    let c = 0.5 * IsentropeModel::vdw_critical_c(3.0).unwrap();
    let m = IsentropeModel::vdw_with_c(3.0, c).unwrap();
    let level = f(&m, 2.0);
    match invert_f(&m, level) {
        Err(Error::NotInvertible { roots }) => {
            assert!(roots.len() >= 2);
            for r in roots {
                assert!((f(&m, r) - level).abs() < 1e-10);
            }
        }
        other => panic!("{other:?}"),
    }
    let ideal = IsentropeModel::ideal_with_c(3.0, 1.0, 1.0).unwrap();
    assert!(matches!(invert_f(&ideal, -1.0), Err(Error::Range { .. })));
}

#[test]
fn second_order_term_matches_inviscid_continuation() {
    // v(I) on the higher Euler branch with C₀ = f₀/I², compared with v₀ + I²v₂
    let m = IsentropeModel::ideal_with_c(5.0, 1.0, 1.5).unwrap();
    let coeffs = SeriesCoefficients { f0: 3.0, ..Default::default() };
    let v0 = invert_f(&m, coeffs.f0).unwrap();
    for r in [0.7, 1.0, 3.0] {
        let v2 = regular_terms(&m, &coeffs, 1.0, v0, r).unwrap()[2];
        let estimates: Vec<f64> = [2e-3, 1e-3]
            .iter()
            .map(|&i| {
                let flow = FlowConfig::new(m, i, Calibration::C0(coeffs.f0 / (i * i))).unwrap();
                (flow.solve_branches(r)[0] - v0) / (i * i)
            })
            .collect();
        // the next correction is O(I²), so the two estimates differ by ~3/4 of it
        let extrapolated = (4.0 * estimates[1] - estimates[0]) / 3.0;
        assert!((extrapolated - v2).abs() < 1e-4 * v2.abs(), "r = {r}: {extrapolated} vs {v2}");
    }
}

#[test]
fn regular_series_truncation() {
    let m = IsentropeModel::ideal_with_c(3.0, 1.0, 1.0).unwrap();
    let coeffs = SeriesCoefficients { f0: 2.5, v1: 0.1, alpha1: 0.2, alpha2: -0.1, ..Default::default() };
    let v0 = invert_f(&m, 2.5).unwrap();
    let t = regular_terms(&m, &coeffs, 0.7, v0, 1.2).unwrap();
    let i: f64 = 0.05;
    for order in 0..=3u32 {
        let expect: f64 = (0..=order as usize).map(|j| t[j] * i.powi(j as i32)).sum();
        let got = regular_series(&m, &coeffs, 0.7, i, 1.2, order).unwrap();
        assert!((got - expect).abs() < 1e-15);
    }
    assert!(matches!(regular_series(&m, &coeffs, 0.7, i, 1.2, 4), Err(Error::Unsupported { .. })));
    // the O(I³) term is the only one carrying the viscosity
    let t2 = regular_terms(&m, &coeffs, 1.4, v0, 1.2).unwrap();
    assert_eq!(t[..3], t2[..3]);
    assert_ne!(t[3], t2[3]);
}
