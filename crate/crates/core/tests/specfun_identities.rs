//! Functional identities of the Mittag-Leffler and Wright functions.

use fracqueue::specfun::{gamma_recip, ml, subordinator_density, wright_m};
use fracqueue::SeriesControl;
use proptest::prelude::*;

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(a.abs()).max(1e-300)
}

fn z_grid() -> Vec<f64> {
    (0..=50).map(|k| -20.0 + 0.5 * k as f64).collect()
}

#[test]
fn exponential_reduction() {
    for k in 0..=200 {
        let w = -10.0 + 0.1 * k as f64;
        let v = ml(1, 1.0, 1.0, w).unwrap();
        assert!(rel_err(v, w.exp()) < 1e-10, "w={w}: {v}");
    }
}

#[test]
fn gamma_step_identity() {
    // E_{α,β}(z) = z E_{α,α+β}(z) + 1/Γ(β)
    for a in [0.3, 0.5, 0.9] {
        for b in [1.0, a, a + 1.0] {
            for z in z_grid() {
                let lhs = ml(1, a, b, z).unwrap();
                let rhs = z * ml(1, a, a + b, z).unwrap() + gamma_recip(b);
                assert!(rel_err(lhs, rhs) < 1e-9, "a={a} b={b} z={z}: {lhs} vs {rhs}");
            }
        }
    }
}

#[test]
fn delta_step_identity() {
    // E^δ_{α,β-α}(z) - E^{δ-1}_{α,β-α}(z) = z E^δ_{α,β}(z)
    for a in [0.3, 0.5, 0.9] {
        for b in [1.0, a, a + 1.0] {
            for d in [2u32, 3] {
                for z in z_grid() {
                    let lhs = ml(d, a, b - a, z).unwrap() - ml(d - 1, a, b - a, z).unwrap();
                    let rhs = z * ml(d, a, b, z).unwrap();
                    if rhs == 0.0 && lhs.abs() < 1e-15 {
                        continue;
                    }
                    assert!(
                        rel_err(lhs, rhs) < 1e-9,
                        "a={a} b={b} d={d} z={z}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }
}

#[test]
fn half_order_wright_is_gaussian() {
    let c = SeriesControl::default();
    for k in 0..=100 {
        let x = 0.1 * k as f64;
        let exact = (-x * x / 4.0).exp() / std::f64::consts::PI.sqrt();
        let v = wright_m(0.5, x, c).unwrap();
        assert!(rel_err(v, exact) < 1e-8, "x={x}: {v} vs {exact}");
    }
}

#[test]
fn subordinator_density_has_unit_mass() {
    use fracqueue::quad::{integrate, QuadOptions};
    use fracqueue::specfun::subordinator_quantile;
    let c = SeriesControl::default();
    for a in [0.5, 0.7, 0.9, 0.99] {
        for t in [0.1, 1.0, 5.0] {
            let cut = subordinator_quantile(a, t, 1e-12, c).unwrap();
            let scale = t.powf(a);
            let breaks: Vec<f64> = [0.0, 0.5, 1.0, 1.5, 2.0].iter().map(|x| x * scale).chain([cut]).collect();
            let breaks: Vec<f64> = breaks.into_iter().filter(|&b| b <= cut).collect();
            let (mass, _) = integrate(
                |y| subordinator_density(a, y, t, c).unwrap(),
                &breaks,
                QuadOptions::new(1e-11, 1e-11),
            )
            .unwrap();
            assert!((mass - 1.0).abs() < 1e-6, "a={a} t={t}: {mass}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wright_and_density_are_nonnegative(a in 0.05f64..0.99, x in 0.0f64..30.0, t in 0.01f64..10.0) {
        let c = SeriesControl::default();
        prop_assert!(wright_m(a, x, c).unwrap() >= -1e-12);
        prop_assert!(subordinator_density(a, x, t, c).unwrap() >= -1e-12);
    }

    #[test]
    fn bessel_is_nonnegative_and_increasing_in_argument(n in 0u32..60, z in 0.0f64..200.0) {
        let c = SeriesControl::default();
        let v = fracqueue::specfun::bessel_i(n, z, c).unwrap();
        let w = fracqueue::specfun::bessel_i(n, z + 0.5, c).unwrap();
        prop_assert!(v >= 0.0);
        prop_assert!(w >= v);
    }

    #[test]
    fn ml_first_order_is_completely_monotone_on_negative_axis(a in 0.2f64..1.0, x in 0.0f64..15.0) {
        // E_α(-x) decreases from 1 and stays in (0, 1] for 0 < α ≤ 1
        let v = ml(1, a, 1.0, -x).unwrap();
        let w = ml(1, a, 1.0, -x - 0.25).unwrap();
        prop_assert!(v > 0.0 && v <= 1.0 + 1e-14);
        prop_assert!(w < v);
    }
}
