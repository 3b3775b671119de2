//! Fractional state probabilities by numerical subordination.
//!
//! With `y = t^α x`, `P^α_{i,n}(t) = ∫_0^∞ P_{i,n}(t^α x) M_α(x) dx`, so the
//! outer integral always runs against the unit-time Wright density. It is cut
//! where the tail of `M_α` drops below `1 - y_cut_quantile`.

use super::classical::{classical_distribution, classical_p};
use super::{check_time, QuadratureControl, QueueParams, TransientDistribution, TransientQuery};
use crate::error::{Error, Result};
use crate::quad::{integrate_vec, QuadOptions};
use crate::specfun::{subordinator_quantile, wright_m, SeriesControl};

const MAX_TRUNCATION: usize = 2000;

fn outer_opts(qctl: &QuadratureControl) -> QuadOptions {
    QuadOptions {
        abs_tol: 0.01 * qctl.abs_tol,
        rel_tol: 1e-10,
        max_intervals: 2000,
    }
}

/// Upper end of the outer integral in the unit-time variable `x`.
fn x_cut(alpha: f64, qctl: &QuadratureControl, sctl: SeriesControl) -> Result<f64> {
    subordinator_quantile(alpha, 1.0, 1.0 - qctl.y_cut_quantile, sctl)
}

fn outer_breaks(cut: f64) -> Vec<f64> {
    let mut b: Vec<f64> = [0.0, 0.5, 1.0, 1.5, 2.5]
        .into_iter()
        .filter(|&x| x < cut)
        .collect();
    b.push(cut);
    b
}

/// `P^α_{i,n}(t)`; `α = 1` is delegated to [`classical_p`].
pub fn fractional_p(p: &QueueParams, q: TransientQuery, qctl: QuadratureControl, sctl: SeriesControl) -> Result<f64> {
    p.validate()?;
    qctl.validate()?;
    check_time(q.t)?;
    if p.alpha == 1.0 {
        return classical_p(p, q, sctl);
    }
    if q.t == 0.0 {
        return Ok(if q.i == q.n { 1.0 } else { 0.0 });
    }
    let scale = q.t.powf(p.alpha);
    let cut = x_cut(p.alpha, &qctl, sctl)?;
    let mut failure = None;
    let res = integrate_vec(
        |x, out: &mut [f64]| {
            let inner = classical_p(p, TransientQuery { t: scale * x, ..q }, sctl);
            let m = wright_m(p.alpha, x, sctl);
            out[0] = match (inner, m) {
                (Ok(a), Ok(b)) => a * b,
                (Err(e), _) | (_, Err(e)) => {
                    failure.get_or_insert(e);
                    0.0
                }
            };
        },
        &outer_breaks(cut),
        1,
        outer_opts(&qctl),
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(res.value[0].clamp(0.0, 1.0))
}

/// `P^α_{i,n}(t)` for `n = 0..=n_trunc`, sharing one outer quadrature rule.
pub fn fractional_distribution(
    p: &QueueParams,
    i: usize,
    t: f64,
    n_trunc: usize,
    qctl: QuadratureControl,
    sctl: SeriesControl,
) -> Result<TransientDistribution> {
    p.validate()?;
    qctl.validate()?;
    check_time(t)?;
    if t == 0.0 {
        return Ok(TransientDistribution::delta(t, i, n_trunc));
    }
    if p.alpha == 1.0 {
        let probs = classical_distribution(p, i, t, n_trunc, sctl)?;
        return Ok(TransientDistribution::from_probs(t, i, probs));
    }
    let scale = t.powf(p.alpha);
    let cut = x_cut(p.alpha, &qctl, sctl)?;
    let mut failure = None;
    let res = integrate_vec(
        |x, out: &mut [f64]| {
            let row = classical_distribution(p, i, scale * x, n_trunc, sctl);
            let m = wright_m(p.alpha, x, sctl);
            match (row, m) {
                (Ok(row), Ok(m)) => {
                    for (o, v) in out.iter_mut().zip(row) {
                        *o = v * m;
                    }
                }
                (Err(e), _) | (_, Err(e)) => {
                    failure.get_or_insert(e);
                    out.iter_mut().for_each(|o| *o = 0.0);
                }
            }
        },
        &outer_breaks(cut),
        n_trunc + 1,
        outer_opts(&qctl),
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let probs = res.value.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
    Ok(TransientDistribution::from_probs(t, i, probs))
}

/// Smallest `N` whose Poisson bound on the number of arrivals up to the
/// subordinated horizon leaves less than `1e-10` of mass above `N`; capped at 2000.
pub fn default_truncation(p: &QueueParams, i: usize, t: f64, qctl: QuadratureControl, sctl: SeriesControl) -> Result<usize> {
    p.validate()?;
    check_time(t)?;
    let horizon = if p.alpha == 1.0 {
        t
    } else if t == 0.0 {
        0.0
    } else {
        t.powf(p.alpha) * x_cut(p.alpha, &qctl, sctl)?
    };
    let mean = p.lambda * horizon;
    // accumulate the Poisson(mean) cdf until the upper tail is below 1e-10
    let mut k = 0usize;
    let mut log_pmf = -mean;
    let mut cdf = log_pmf.exp();
    while 1.0 - cdf >= 1e-10 {
        k += 1;
        log_pmf += mean.ln() - (k as f64).ln();
        cdf += log_pmf.exp();
        if i + k >= MAX_TRUNCATION {
            return Ok(MAX_TRUNCATION);
        }
        if k > 100_000 {
            return Err(Error::non_convergence("state truncation", "Poisson bound did not settle"));
        }
    }
    Ok((i + k).clamp(1, MAX_TRUNCATION))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(alpha: f64) -> QueueParams {
        QueueParams::new(5.0, 3.0, 1.0, alpha).unwrap()
    }

    #[test]
    fn unit_order_delegates_exactly() {
        let (qc, sc) = (QuadratureControl::default(), SeriesControl::default());
        let q = TransientQuery::new(1, 2, 1.5).unwrap();
        let a = fractional_p(&params(1.0), q, qc, sc).unwrap();
        let b = classical_p(&params(1.0), q, sc).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn kronecker_delta_at_time_zero() {
        let (qc, sc) = (QuadratureControl::default(), SeriesControl::default());
        assert_eq!(fractional_p(&params(0.6), TransientQuery::new(1, 1, 0.0).unwrap(), qc, sc).unwrap(), 1.0);
        assert_eq!(fractional_p(&params(0.6), TransientQuery::new(1, 2, 0.0).unwrap(), qc, sc).unwrap(), 0.0);
    }

    #[test]
    fn vector_and_scalar_paths_agree() {
        let (qc, sc) = (QuadratureControl::default(), SeriesControl::default());
        let p = params(0.7);
        let n_trunc = default_truncation(&p, 1, 2.0, qc, sc).unwrap();
        let d = fractional_distribution(&p, 1, 2.0, n_trunc, qc, sc).unwrap();
        assert!(d.tail_mass.abs() < 1e-6, "{}", d.tail_mass);
        for n in [0, 1, 4] {
            let v = fractional_p(&p, TransientQuery::new(1, n, 2.0).unwrap(), qc, sc).unwrap();
            assert!((d.probs[n] - v).abs() < qc.abs_tol, "n={n}: {} vs {v}", d.probs[n]);
        }
    }

    #[test]
    fn truncation_grows_with_time_and_start() {
        let (qc, sc) = (QuadratureControl::default(), SeriesControl::default());
        let a = default_truncation(&params(0.8), 0, 0.5, qc, sc).unwrap();
        let b = default_truncation(&params(0.8), 0, 2.0, qc, sc).unwrap();
        let c = default_truncation(&params(0.8), 5, 2.0, qc, sc).unwrap();
        assert!(a < b && b < c);
    }
}
