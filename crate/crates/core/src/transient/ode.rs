//! Independent oracle: the classical forward equations integrated as a
//! truncated linear ODE system with an adaptive Dormand-Prince 5(4) scheme.

use super::{check_time, QueueParams, TransientDistribution};
use crate::error::{Error, Result};

const TAIL_LIMIT: f64 = 1e-6;

/// Right-hand side of the forward equations on states `0..=N`.
///
/// State 0 receives the catastrophe influx `ξ` (all mass outside state 0 is
/// `1 - p_0` in the untruncated chain); arrivals out of state `N` leave the
/// system, so the lost mass measures the truncation error.
pub fn forward_rhs(p: &QueueParams, probs: &[f64], out: &mut [f64]) {
    let n = probs.len() - 1;
    let (lam, mu, xi) = (p.lambda, p.mu, p.xi);
    let theta = p.theta();
    out[0] = -(lam + xi) * probs[0] + xi + if n >= 1 { mu * probs[1] } else { 0.0 };
    for k in 1..=n {
        let up = if k < n { mu * probs[k + 1] } else { 0.0 };
        out[k] = -theta * probs[k] + lam * probs[k - 1] + up;
    }
}

// Dormand-Prince tableau (the system is autonomous, so the nodes c_s are not needed)
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Truncated forward equations from `δ_i` at time 0 up to `t`.
pub fn forward_ode_reference(p: &QueueParams, i: usize, t: f64, n_trunc: usize) -> Result<TransientDistribution> {
    p.validate()?;
    check_time(t)?;
    if i > n_trunc {
        return Err(Error::invalid("n_trunc", n_trunc as f64, "must be at least the initial state"));
    }
    let dim = n_trunc + 1;
    let mut y = vec![0.0; dim];
    y[i] = 1.0;
    if t == 0.0 {
        return Ok(TransientDistribution::from_probs(t, i, y));
    }
    let (rtol, atol) = (1e-12, 1e-15);
    let mut k = vec![vec![0.0; dim]; 7];
    let mut stage = vec![0.0; dim];
    let mut y5 = vec![0.0; dim];
    let mut time = 0.0;
    let mut h = (0.01 / p.theta().max(1.0)).min(t);
    let mut steps = 0usize;
    forward_rhs(p, &y, &mut k[0]);
    while time < t {
        if steps > 10_000_000 {
            return Err(Error::non_convergence("forward ODE", "step budget exhausted"));
        }
        steps += 1;
        let h_try = h.min(t - time);
        for s in 1..7 {
            for j in 0..dim {
                let mut acc = y[j];
                for (l, a) in A[s].iter().enumerate().take(s) {
                    acc += h_try * a * k[l][j];
                }
                stage[j] = acc;
            }
            forward_rhs(p, &stage, &mut k[s]);
        }
        let mut err = 0.0_f64;
        for j in 0..dim {
            let mut hi = y[j];
            let mut lo = y[j];
            for s in 0..7 {
                hi += h_try * B5[s] * k[s][j];
                lo += h_try * B4[s] * k[s][j];
            }
            y5[j] = hi;
            let scale = atol + rtol * y[j].abs().max(hi.abs());
            err = err.max((hi - lo).abs() / scale);
        }
        if err <= 1.0 {
            time += h_try;
            std::mem::swap(&mut y, &mut y5);
            // first-same-as-last: stage 7 is the derivative at the new point
            let last = k[6].clone();
            k[0].copy_from_slice(&last);
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = h_try * factor;
    }
    let dist = TransientDistribution::from_probs(t, i, y);
    if dist.tail_mass > TAIL_LIMIT {
        return Err(Error::TruncationTooSmall {
            tail_mass: dist.tail_mass,
            limit: TAIL_LIMIT,
        });
    }
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_at_time_zero() {
        let p = QueueParams::new(5.0, 3.0, 1.0, 1.0).unwrap();
        let d = forward_ode_reference(&p, 1, 0.0, 100).unwrap();
        assert_eq!(d.probs[1], 1.0);
        assert_eq!(d.tail_mass, 0.0);
    }

    #[test]
    fn first_order_arrival_rate() {
        let p = QueueParams::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let h = 1e-4;
        let d = forward_ode_reference(&p, 0, h, 20).unwrap();
        assert!((d.probs[1] / h - 1.0).abs() < 1e-3);
    }

    #[test]
    fn pure_catastrophe_mass_on_empty_state() {
        // from state 0, the empty probability of M/M/1 with catastrophes stays
        // above the stationary no-catastrophe bound and the mass is conserved
        let p = QueueParams::new(2.0, 3.0, 0.5, 1.0).unwrap();
        let d = forward_ode_reference(&p, 0, 3.0, 120).unwrap();
        assert!(d.tail_mass.abs() < 1e-12);
        assert!(d.probs[0] > 1.0 - 2.0 / 3.0);
    }

    #[test]
    fn small_truncation_is_reported() {
        let p = QueueParams::new(5.0, 3.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            forward_ode_reference(&p, 1, 5.0, 5),
            Err(Error::TruncationTooSmall { .. })
        ));
    }
}
