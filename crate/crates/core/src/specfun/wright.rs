//! Wright function `M_α` and the inverse stable subordinator.
//!
//! Near the origin `M_α` is summed from its power series. The series
//! alternates with terms that grow like `exp(c x^{1/(1-α)})` before they
//! decay, so once the magnitude sum says the cancellation would eat the
//! requested digits the evaluation switches to the Zolotarev-Kanter integral
//!
//! ```text
//! M_α(x) = 1/((1-α) π x) ∫_0^π u(φ) e^{-u(φ)} dφ,   u(φ) = x^{1/(1-α)} A(φ),
//! A(φ)   = [sin(αφ)^α sin((1-α)φ)^{1-α} / sin φ]^{1/(1-α)},
//! ```
//!
//! whose integrand is positive. The same `u(φ)` gives the survival function
//! `P(C > x) = (1/π) ∫_0^π e^{-u(φ)} dφ` of the unit-time subordinator value.

use std::f64::consts::PI;

use super::{ln_gamma_recip, CompensatedSum, SeriesControl};
use crate::error::{Error, Result};
use crate::quad::{integrate, QuadOptions};

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

fn check_x(x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("x", x, "must be finite and nonnegative"))
    }
}

/// Series value, or `None` when rounding would swamp the requested tolerance.
fn wright_series(alpha: f64, x: f64, ctl: SeriesControl) -> Option<f64> {
    let ln_x = x.ln();
    let mut acc = CompensatedSum::new();
    let mut prev_envelope = f64::NEG_INFINITY;
    for r in 0..ctl.max_terms {
        let rf = r as f64;
        let (ln_rg, sign) = ln_gamma_recip(1.0 - alpha * (1.0 + rf));
        let ln_fact = libm::lgamma(rf + 1.0);
        // |1/Γ(1-s)| <= Γ(s)/π bounds every term, including near-pole ones
        let envelope = rf * ln_x - ln_fact + libm::lgamma(alpha * (1.0 + rf)) - PI.ln();
        if envelope > 700.0 {
            return None;
        }
        if sign != 0.0 {
            let mag = (rf * ln_x - ln_fact + ln_rg).exp();
            let signed = if r % 2 == 0 { sign * mag } else { -sign * mag };
            acc.add(signed);
        }
        let past_peak = envelope < prev_envelope;
        prev_envelope = envelope;
        if r > 0 && past_peak {
            let sum = acc.value().abs();
            if envelope.exp() <= 0.01 * ctl.rel_tol * sum || (sum == 0.0 && envelope < -745.0) {
                return if acc.error_bound() <= ctl.rel_tol * sum {
                    Some(acc.value())
                } else {
                    None
                };
            }
        }
    }
    None
}

/// `ln u(φ) - ln c`, i.e. `ln A(φ)`.
fn ln_kanter_a(alpha: f64, phi: f64) -> f64 {
    let beta = 1.0 - alpha;
    // sin φ = sin(π - φ); the latter keeps relative precision near π
    let s = if phi > 0.5 * PI { (PI - phi).sin() } else { phi.sin() };
    (alpha * (alpha * phi).sin().ln() + beta * (beta * phi).sin().ln() - s.ln()) / beta
}

fn kanter_limit_at_zero(alpha: f64) -> f64 {
    let beta = 1.0 - alpha;
    (alpha * alpha.ln() + beta * beta.ln()) / beta
}

fn ln_u(alpha: f64, ln_c: f64, phi: f64) -> f64 {
    if phi <= 1e-12 {
        ln_c + kanter_limit_at_zero(alpha)
    } else if phi >= PI {
        f64::INFINITY
    } else {
        ln_c + ln_kanter_a(alpha, phi)
    }
}

fn quad_opts(ctl: SeriesControl) -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-300,
        rel_tol: ctl.rel_tol.max(1e-14),
        max_intervals: 4000,
    }
}

fn wright_integral(alpha: f64, x: f64, ctl: SeriesControl) -> Result<f64> {
    let ln_c = x.ln() / (1.0 - alpha);
    // u e^{-u} in log form so huge u underflows cleanly to zero
    let f = |phi: f64| {
        let lu = ln_u(alpha, ln_c, phi);
        if lu > 709.0 {
            0.0
        } else {
            (lu - lu.exp()).exp()
        }
    };
    let (v, _) = integrate(f, &[0.0, 0.5 * PI, PI], quad_opts(ctl))?;
    Ok(v / ((1.0 - alpha) * PI * x))
}

/// Wright function `M_α(x) = Σ_r (-x)^r / (r! Γ(1 - α(1 + r)))` for `0 < α < 1`, `x ≥ 0`.
pub fn wright_m(alpha: f64, x: f64, ctl: SeriesControl) -> Result<f64> {
    check_alpha(alpha)?;
    check_x(x)?;
    if x == 0.0 {
        return Ok(super::gamma_recip(1.0 - alpha));
    }
    match wright_series(alpha, x, ctl) {
        Some(v) => Ok(v.max(0.0)),
        None => wright_integral(alpha, x, ctl),
    }
}

/// Density `f_α(y, t) = t^{-α} M_α(y t^{-α})` of the inverse stable subordinator at time `t`.
pub fn subordinator_density(alpha: f64, y: f64, t: f64, ctl: SeriesControl) -> Result<f64> {
    check_alpha(alpha)?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid("t", t, "must be positive and finite"));
    }
    check_x(y)?;
    let scale = t.powf(-alpha);
    Ok(scale * wright_m(alpha, y * scale, ctl)?)
}

/// `P(C_1 > x) = ∫_x^∞ M_α(s) ds` for the inverse subordinator at unit time.
pub fn subordinator_survival(alpha: f64, x: f64, ctl: SeriesControl) -> Result<f64> {
    check_alpha(alpha)?;
    check_x(x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    let ln_c = x.ln() / (1.0 - alpha);
    let f = |phi: f64| {
        let lu = ln_u(alpha, ln_c, phi);
        if lu > 709.0 {
            0.0
        } else {
            (-lu.exp()).exp()
        }
    };
    let (v, _) = integrate(f, &[0.0, 0.5 * PI, PI], quad_opts(ctl))?;
    Ok((v / PI).clamp(0.0, 1.0))
}

/// Smallest `y` (to bisection precision) with `P(C_t > y) <= tail`.
pub fn subordinator_quantile(alpha: f64, t: f64, tail: f64, ctl: SeriesControl) -> Result<f64> {
    check_alpha(alpha)?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid("t", t, "must be positive and finite"));
    }
    if !(tail > 0.0 && tail < 1.0) {
        return Err(Error::invalid("tail", tail, "must lie in (0, 1)"));
    }
    // C_t has the law of t^α C_1
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut doublings = 0;
    while subordinator_survival(alpha, hi, ctl)? > tail {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::non_convergence("subordinator quantile", "bracket not found"));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-10 * hi {
            break;
        }
        if subordinator_survival(alpha, mid, ctl)? > tail {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi * t.powf(alpha))
}
