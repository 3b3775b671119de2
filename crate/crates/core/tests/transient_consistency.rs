//! Cross-checks between the transient operations and the forward-equation oracle.

use fracqueue::quad::{integrate, QuadOptions};
use fracqueue::specfun::gamma_recip;
use fracqueue::transient::{
    classical_p, default_truncation, forward_ode_reference, forward_rhs, fractional_distribution,
    fractional_p, riemann_liouville, MomentKernel,
};
use fracqueue::{QuadratureControl, QueueParams, SeriesControl, TransientQuery};

fn ctl() -> (QuadratureControl, SeriesControl) {
    (QuadratureControl::default(), SeriesControl::default())
}

fn base(alpha: f64) -> QueueParams {
    QueueParams::new(5.0, 3.0, 1.0, alpha).unwrap()
}

#[test]
fn classical_matches_forward_equations() {
    let (_, s) = ctl();
    let p = base(1.0);
    let mut worst = 0.0_f64;
    for i in [0usize, 1, 5] {
        for t in [0.5, 2.0] {
            let oracle = forward_ode_reference(&p, i, t, 400).unwrap();
            for n in 0..=20 {
                let v = classical_p(&p, TransientQuery::new(i, n, t).unwrap(), s).unwrap();
                worst = worst.max((v - oracle.probs[n]).abs());
            }
        }
    }
    assert!(worst <= 1e-6, "max abs error {worst:e}");
}

#[test]
fn ode_residual_of_classical_solution() {
    // finite-difference time derivative of the Bessel solution against the forward equations
    let (_, s) = ctl();
    let p = base(1.0);
    let n_max = 120;
    let row = |t: f64| fracqueue::transient::classical_distribution(&p, 1, t, n_max, s).unwrap();
    for t in [0.4, 1.0, 1.7] {
        let h = 1e-4;
        let (lo, mid, hi) = (row(t - h), row(t), row(t + h));
        let mut rhs = vec![0.0; n_max + 1];
        forward_rhs(&p, &mid, &mut rhs);
        for n in 0..60 {
            let deriv = (hi[n] - lo[n]) / (2.0 * h);
            assert!((deriv - rhs[n]).abs() < 1e-5, "t={t} n={n}: {deriv} vs {}", rhs[n]);
        }
    }
}

#[test]
fn normalization_and_moment_consistency() {
    let (q, s) = ctl();
    for alpha in [0.6, 0.8, 1.0] {
        let p = base(alpha);
        for i in [0usize, 1, 5] {
            for t in [0.5, 2.0] {
                let n_trunc = default_truncation(&p, i, t, q, s).unwrap();
                let d = fractional_distribution(&p, i, t, n_trunc, q, s).unwrap();
                let total: f64 = d.probs.iter().sum();
                assert!((total - 1.0).abs() < 1e-6, "α={alpha} i={i} t={t}: Σp = {total}");
                let k = MomentKernel::new(&p, i, t, q, s).unwrap();
                let m = k.mean().unwrap();
                let v = k.variance().unwrap();
                assert!((m - d.mean()).abs() < 1e-5, "α={alpha} i={i} t={t}: mean {m} vs {}", d.mean());
                assert!(
                    (v - d.variance()).abs() < 1e-4,
                    "α={alpha} i={i} t={t}: var {v} vs {}",
                    d.variance()
                );
            }
        }
    }
}

#[test]
fn pgf_matches_state_sum() {
    let (q, s) = ctl();
    for alpha in [0.7, 1.0] {
        let p = base(alpha);
        for t in [0.5, 1.0, 2.0] {
            let n_trunc = default_truncation(&p, 1, t, q, s).unwrap();
            let d = fractional_distribution(&p, 1, t, n_trunc, q, s).unwrap();
            let k = MomentKernel::new(&p, 1, t, q, s).unwrap();
            for z in [0.2, 0.5, 0.9] {
                let g = k.pgf(z).unwrap();
                assert!(
                    (g.value - d.pgf(z)).abs() < 1e-5,
                    "α={alpha} t={t} z={z}: {:?} vs {}",
                    g,
                    d.pgf(z)
                );
            }
        }
    }
}

#[test]
fn mean_without_catastrophes_reduces_to_fractional_integral() {
    // i + μ J^α P_{i,0}(t) + (λ-μ) t^α / Γ(α+1), with J^α evaluated by
    // adaptive quadrature after v = (t-u)^α, independently of the tabulated rule
    let (q, s) = ctl();
    for alpha in [0.5, 0.9] {
        let p = QueueParams::new(2.0, 1.0, 0.0, alpha).unwrap();
        for t in [0.5, 2.0] {
            let k = MomentKernel::new(&p, 1, t, q, s).unwrap();
            let m = k.mean().unwrap();
            let (j, _) = integrate(
                |v| {
                    let u = (t - v.powf(1.0 / alpha)).max(0.0);
                    fractional_p(&p, TransientQuery { i: 1, n: 0, t: u }, q, s).unwrap()
                },
                &[0.0, t.powf(alpha)],
                QuadOptions::new(1e-10, 1e-10),
            )
            .unwrap();
            let j = j * gamma_recip(alpha + 1.0);
            let closed = 1.0 + p.mu * j + (p.lambda - p.mu) * t.powf(alpha) * gamma_recip(alpha + 1.0);
            assert!((m - closed).abs() < 1e-6, "α={alpha} t={t}: {m} vs {closed}");
            let rl = riemann_liouville(k.empty_probability().unwrap(), alpha, q, s).unwrap();
            assert!((rl - j).abs() < 1e-8);
        }
    }
}

#[test]
fn empty_queue_mean_grows_at_start() {
    let (q, s) = ctl();
    let p = base(0.7);
    let mut prev = 0.0;
    for k in 1..=30 {
        let t = 0.01 * k as f64;
        let m = MomentKernel::new(&p, 0, t, q, s).unwrap().mean().unwrap();
        assert!(m >= prev, "t={t}: {m} < {prev}");
        prev = m;
    }
}

#[test]
fn explicit_subordination_form_matches_fractional_p() {
    // ∫_0^∞ P_{i,n}(y) M_α(y t^{-α}) t^{-α} dy in the original clock, with the
    // hitting-time Bessel sums as the inner probabilities
    let (q, s) = ctl();
    let opts = QuadOptions::new(1e-9, 1e-9);
    for alpha in [0.6_f64, 0.8] {
        let p = base(alpha);
        for t in [0.5_f64, 2.0] {
            let scale = t.powf(alpha);
            let cut = fracqueue::specfun::subordinator_quantile(alpha, t, 1e-12, s).unwrap();
            let breaks: Vec<f64> = [0.0, 0.05, 0.2, 0.5, 1.0, 2.0, 4.0]
                .iter()
                .map(|b| b * scale)
                .filter(|&y| y < cut)
                .chain(std::iter::once(cut))
                .collect();
            for (i, n) in [(1usize, 0usize), (1, 1), (0, 2), (2, 1)] {
                let (explicit, _) = integrate(
                    |y| {
                        let inner = fracqueue::transient::classical_p_hitting_form(
                            &p,
                            TransientQuery::new(i, n, y).unwrap(),
                            s,
                        )
                        .unwrap();
                        inner * fracqueue::specfun::wright_m(alpha, y / scale, s).unwrap() / scale
                    },
                    &breaks,
                    opts,
                )
                .unwrap();
                let direct = fractional_p(&p, TransientQuery::new(i, n, t).unwrap(), q, s).unwrap();
                assert!((explicit - direct).abs() < 1e-5, "α={alpha} t={t} ({i},{n}): {explicit} vs {direct}");
            }
        }
    }
}
