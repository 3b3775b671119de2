//! Modified Bessel functions of the first kind, integer order.

use super::SeriesControl;
use crate::error::{Error, Result};

/// `I_n(z)` from its power series, summed with a running rescale so large
/// arguments do not overflow before the final exponential factor is applied.
pub fn bessel_i(n: u32, z: f64, ctl: SeriesControl) -> Result<f64> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::invalid("z", z, "Bessel argument must be finite and nonnegative"));
    }
    if z == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let nf = n as f64;
    let half = 0.5 * z;
    let q = half * half;
    // leading term (z/2)^n / n!, kept as a log
    let mut log_scale = nf * half.ln() - libm::lgamma(nf + 1.0);
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 0..ctl.max_terms {
        let mf = m as f64;
        let ratio = q / ((mf + 1.0) * (mf + nf + 1.0));
        term *= ratio;
        sum += term;
        if ratio < 1.0 {
            // all later ratios are smaller, so the tail is a geometric bound
            let tail = term * ratio / (1.0 - ratio);
            if tail <= 0.1 * ctl.rel_tol * sum {
                return Ok(sum * log_scale.exp());
            }
        }
        if sum > 1e250 {
            sum *= 1e-250;
            term *= 1e-250;
            log_scale += 250.0 * std::f64::consts::LN_10;
        }
    }
    Err(Error::non_convergence(
        "Bessel I series",
        format!("order {n}, argument {z}: {} terms", ctl.max_terms),
    ))
}

/// `e^{-x} I_k(x)` for `k = 0..=n_max` by Miller's backward recurrence,
/// normalized with `e^x = I_0(x) + 2 Σ_{k≥1} I_k(x)`.
pub fn bessel_i_scaled_seq(x: f64, n_max: usize) -> Vec<f64> {
    assert!(x >= 0.0 && x.is_finite(), "argument must be finite and nonnegative");
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    if x < 1e-8 {
        // two-term series is exact to rounding here
        let half = 0.5 * x;
        let damp = (-x).exp();
        let mut lead = 1.0;
        for (k, slot) in out.iter_mut().enumerate() {
            if k > 0 {
                lead *= half / k as f64;
            }
            if lead == 0.0 {
                break;
            }
            *slot = damp * lead * (1.0 + half * half / (k as f64 + 1.0));
        }
        return out;
    }

    let scale = (n_max as f64).max(x);
    let start = (n_max as f64).max((90.0 * x).sqrt()).ceil() as usize
        + 30
        + (40.0 * scale).sqrt().ceil() as usize;
    let two_over_x = 2.0 / x;
    let mut above = 0.0; // I_{k+1}
    let mut here = 1e-300; // I_k
    let mut norm = 0.0;
    for k in (0..=start).rev() {
        if k <= n_max {
            out[k] = here;
        }
        norm += if k == 0 { here } else { 2.0 * here };
        if k == 0 {
            break;
        }
        let below = above + (k as f64) * two_over_x * here;
        above = here;
        here = below;
        if here > 1e200 {
            above *= 1e-200;
            here *= 1e-200;
            norm *= 1e-200;
            for v in out.iter_mut() {
                *v *= 1e-200;
            }
        }
    }
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}
