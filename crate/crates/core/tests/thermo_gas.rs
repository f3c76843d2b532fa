mod common;

use common::*;
use proptest::prelude::*;
use srcflow_core::thermo::{applicability, entropy_level, state_from_potential};
use srcflow_core::{Error, GasKind, Invertibility, IsentropeModel, MassieuPotential};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn potentials() -> impl Strategy<Value = MassieuPotential> {
    prop_oneof![
        (1.0f64..8.0, 0.2f64..4.0).prop_map(|(n, r)| MassieuPotential::ideal(n, r)),
        (1.0f64..8.0).prop_map(MassieuPotential::vdw_reduced),
    ]
}

fn models() -> impl Strategy<Value = IsentropeModel> {
    prop_oneof![
        (prop::sample::select(vec![3.0, 5.0, 6.0]), 0.3f64..3.0, -2.0f64..2.0)
            .prop_map(|(n, r, s)| IsentropeModel::ideal(n, r, s).unwrap()),
        (prop::sample::select(vec![3.0, 5.0, 6.0]), -3.0f64..8.0)
            .prop_map(|(n, s)| IsentropeModel::vdw(n, s).unwrap()),
    ]
}

fn volume_for(m: &IsentropeModel, t: f64) -> f64 {
    pole(m) + 0.01 * (1e4f64).powf(t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn partials_match_differences(phi in potentials(), v in 0.4f64..20.0, t in 0.1f64..5.0) {
        let value = |v: f64, t: f64| phi.value(v, t).unwrap();
        let hv = 1e-3 * (v - 1.0 / 3.0);
        let ht = 1e-3 * t;
        let cases = [
            (phi.d_v(v, t).unwrap(), diff1(|x| value(x, t), v, hv)),
            (phi.d_t(v, t).unwrap(), diff1(|x| value(v, x), t, ht)),
            (phi.d_vv(v, t).unwrap(), diff2(|x| value(x, t), v, 10.0 * hv)),
            (phi.d_tt(v, t).unwrap(), diff2(|x| value(v, x), t, 10.0 * ht)),
            (phi.d_vt(v, t).unwrap(), diff1(|y| phi.d_v(v, y).unwrap(), t, ht)),
        ];
        for (exact, fd) in cases {
            prop_assert!((exact - fd).abs() <= 1e-6 * (1.0 + exact.abs()), "{exact} vs {fd}");
        }
    }

    #[test]
    fn isentrope_stays_on_its_entropy_level(m in models(), s in 0.0f64..1.0) {
        let v = volume_for(&m, s);
        let t = m.temperature(v).unwrap();
        let level = entropy_level(&m.potential(), v, t).unwrap();
        prop_assert!((level - m.potential_entropy_level()).abs() <= 1e-10 * (1.0 + level.abs()));
    }

    #[test]
    fn isentrope_pressure_matches_potential(m in models(), s in 0.0f64..1.0) {
        let v = volume_for(&m, s);
        let t = m.temperature(v).unwrap();
        let state = state_from_potential(&m.potential(), v, t).unwrap();
        let p = m.pressure(v).unwrap();
        let scale = p.abs() + 3.0 / (v * v);
        prop_assert!((state.p - p).abs() <= 1e-12 * scale);
        prop_assert!((pressure(&m, v) - p).abs() <= 1e-12 * scale);
    }

    #[test]
    fn f_matches_reference_and_its_slope(m in models(), s in 0.0f64..1.0) {
        let v = volume_for(&m, s);
        let scale = f(&m, v).abs() + 6.0 / v + 1.0;
        prop_assert!((m.f(v).unwrap() - f(&m, v)).abs() <= 1e-12 * scale);
        let fp = m.f_prime(v).unwrap();
        let fp_ref = v * diff1(|x| pressure(&m, x), v, 1e-3 * (v - pole(&m)));
        prop_assert!((fp - fp_ref).abs() <= 1e-6 * (fp.abs() + 6.0 / v + 1.0));
        let fpp = m.f_second(v).unwrap();
        let fpp_ref = diff1(|x| m.f_prime(x).unwrap(), v, 1e-3 * (v - pole(&m)));
        prop_assert!((fpp - fpp_ref).abs() <= 1e-6 * (fpp.abs() + 12.0 / (v * v) + 1.0));
    }

    #[test]
    fn ideal_states_are_applicable(n in 1.0f64..8.0, r in 0.2f64..4.0, v in 0.01f64..100.0, t in 0.01f64..100.0) {
        prop_assert!(applicability(&MassieuPotential::ideal(n, r), v, t).unwrap());
    }
}

#[test]
fn vdw_applicability_fails_inside_the_spinodal() {
    let phi = MassieuPotential::vdw_reduced(3.0);
    // φ_vv = −9/(3v−1)² + 9/(4Tv³), positive at v = 1, T = 0.8
    assert!(!applicability(&phi, 1.0, 0.8).unwrap());
    assert!(applicability(&phi, 1.0, 1.2).unwrap());
}

#[test]
fn pole_is_rejected() {
    let m = IsentropeModel::vdw_with_c(3.0, 1.0).unwrap();
    assert!(matches!(m.f(1.0 / 3.0), Err(Error::Domain { .. })));
    assert!(matches!(m.pressure(0.2), Err(Error::Domain { .. })));
    let wide = m.with_pole_margin(1e-3);
    assert!(wide.f(1.0 / 3.0 + 5e-4).is_err());
    assert!(wide.f(1.0 / 3.0 + 2e-3).is_ok());
}

#[test]
fn invertibility_agrees_with_slope_scan() {
    let c_crit = IsentropeModel::vdw_critical_c(5.0).unwrap();
    for factor in [0.3, 0.7, 0.95, 1.05, 1.5, 3.0] {
        let m = IsentropeModel::vdw_with_c(5.0, factor * c_crit).unwrap();
        let changes = slope_sign_changes(&m, 100_000, 1e6);
        match m.invertibility() {
            Invertibility::GloballyInvertible => assert_eq!(changes, 0, "c = {factor} c_crit"),
            Invertibility::NonMonotone(points) => {
                assert_eq!(points.len(), changes, "c = {factor} c_crit");
                for v in points {
                    let scale = 6.0 / (v * v);
                    assert!(f_slope(&m, v).abs() <= 1e-9 * scale);
                }
            }
        }
    }
    assert_eq!(IsentropeModel::vdw_critical_c(2.0), None);
    let ideal = IsentropeModel::ideal(3.0, 1.0, 0.0).unwrap();
    assert_eq!(ideal.invertibility(), Invertibility::GloballyInvertible);
    assert_eq!(ideal.kind, GasKind::Ideal);
}

#[test]
fn level_roots_solve_the_level_equation() {
    let m = IsentropeModel::vdw_with_c(3.0, 0.8).unwrap();
    let level = f(&m, 0.63);
    let roots = m.f_level_roots(level);
    let p = pole(&m);
    let grid: Vec<f64> = geomspace(1e-9, 1e7, 1_000_000).into_iter().map(|w| p + w).collect();
    let reference = roots_on_grid(|v| f(&m, v) - level, &grid);
    assert_eq!(roots.len(), reference.len());
    for (a, b) in roots.iter().zip(&reference) {
        assert!(rel(*a, *b) < 1e-9, "{a} vs {b}");
    }
}
