//! Three-parameter Mittag-Leffler function
//! `E^δ_{β,γ}(w) = Σ_r (δ)_r w^r / (r! Γ(βr + γ))`.
//!
//! The power series is used whenever its rounding error stays below the
//! tolerance. On the negative axis it loses every digit well before the
//! arguments the moment formulas need, so two further routes exist:
//!
//! * `β = 1`: Kummer's transformation turns the alternating series into
//!   `e^w Σ_r (γ-δ)_r (-w)^r / (r! Γ(γ+r))`, whose terms settle to one sign.
//! * `0 < β < 1`: inversion of the Laplace transform
//!   `s^{βδ-γ} / (s^β - w)^δ` along a Hankel contour (circle of radius `ρ`
//!   plus the two banks of the negative real axis). For `w < 0` the
//!   transform has no singularity on the principal sheet, so the contour
//!   integral is the function value.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{gamma_recip, ln_gamma_recip, ln_pochhammer, CompensatedSum, SeriesControl};
use crate::error::{Error, Result};
use crate::quad::{integrate, QuadOptions};

/// Parameters `(β, γ, δ)` of `E^δ_{β,γ}`.
///
/// `γ` may be any real number (including zero and negative values, with the
/// convention `1/Γ(pole) = 0`); recurrences such as
/// `E^δ_{β,γ-β} - E^{δ-1}_{β,γ-β} = w E^δ_{β,γ}` step `γ` down past zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MLParams {
    pub beta: f64,
    pub gamma: f64,
    pub delta: u32,
}

impl MLParams {
    pub fn new(beta: f64, gamma: f64, delta: u32) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::invalid("beta", beta, "must be positive and finite"));
        }
        if !gamma.is_finite() {
            return Err(Error::invalid("gamma", gamma, "must be finite"));
        }
        if delta == 0 {
            return Err(Error::invalid("delta", 0.0, "must be at least 1"));
        }
        Ok(Self { beta, gamma, delta })
    }

    fn series_limit(&self) -> f64 {
        if self.beta >= 0.5 {
            50.0
        } else {
            20.0
        }
    }
}

enum SeriesOutcome {
    Accepted(f64),
    Rejected,
}

fn ml_series(p: &MLParams, w: f64, ctl: SeriesControl) -> SeriesOutcome {
    let delta = p.delta as f64;
    let ln_w = w.abs().ln();
    let mut acc = CompensatedSum::new();
    let mut prev = f64::NEG_INFINITY;
    for r in 0..ctl.max_terms {
        let rf = r as f64;
        let (ln_rg, sign_rg) = ln_gamma_recip(p.beta * rf + p.gamma);
        let ln_mag = rf * ln_w + libm::lgamma(delta + rf) - libm::lgamma(delta) - libm::lgamma(rf + 1.0)
            + ln_rg;
        if ln_mag > 700.0 {
            return SeriesOutcome::Rejected;
        }
        if sign_rg != 0.0 {
            let sign = if w < 0.0 && r % 2 == 1 { -sign_rg } else { sign_rg };
            acc.add(sign * ln_mag.exp());
        }
        let settled = p.beta * rf + p.gamma > 2.0 && ln_mag < prev;
        if sign_rg != 0.0 {
            prev = ln_mag;
        }
        if settled && ln_mag.exp() <= 0.01 * ctl.rel_tol * acc.value().abs() {
            let v = acc.value();
            return if w > 0.0 || acc.error_bound() <= ctl.rel_tol * v.abs() {
                SeriesOutcome::Accepted(v)
            } else {
                SeriesOutcome::Rejected
            };
        }
    }
    SeriesOutcome::Rejected
}

/// `β = 1`, `w < 0`: `E^δ_{1,γ}(w) = e^w Σ_r (γ-δ)_r (-w)^r / (r! Γ(γ+r))`.
fn ml_kummer(p: &MLParams, w: f64, ctl: SeriesControl) -> Result<f64> {
    let a = p.gamma - p.delta as f64;
    let ln_x = (-w).ln();
    let mut acc = CompensatedSum::new();
    let mut prev = f64::NEG_INFINITY;
    for r in 0..ctl.max_terms {
        let rf = r as f64;
        let (ln_poch, sign_poch) = ln_pochhammer(a, r);
        let (ln_rg, sign_rg) = ln_gamma_recip(p.gamma + rf);
        let sign = sign_poch * sign_rg;
        let ln_mag = ln_poch + rf * ln_x - libm::lgamma(rf + 1.0) + ln_rg + w;
        if sign != 0.0 {
            acc.add(sign * ln_mag.exp());
        }
        // a nonpositive integer: the sum is a polynomial
        let finished_poly = sign_poch == 0.0 && r > 0;
        let settled = p.gamma + rf > 2.0 && ln_mag < prev;
        if sign != 0.0 {
            prev = ln_mag;
        }
        if finished_poly || (settled && ln_mag.exp() <= 0.01 * ctl.rel_tol * acc.value().abs()) {
            let v = acc.value();
            if acc.error_bound() <= ctl.rel_tol * v.abs() || v == 0.0 && acc.abs_sum() == 0.0 {
                return Ok(v);
            }
            break;
        }
    }
    Err(Error::non_convergence(
        "Mittag-Leffler (Kummer form)",
        format!("delta={}, gamma={}, w={w}", p.delta, p.gamma),
    ))
}

/// Laplace transform `s^{βδ-γ} / (s^β - w)^δ` with `s = r e^{iφ}`, principal branch.
fn transform(p: &MLParams, w: f64, r: f64, phi: f64) -> Complex64 {
    let a = p.beta * p.delta as f64 - p.gamma;
    let num = Complex64::from_polar(r.powf(a), a * phi);
    let den = Complex64::from_polar(r.powf(p.beta), p.beta * phi) - w;
    num / den.powi(p.delta as i32)
}

fn ml_contour(p: &MLParams, w: f64, ctl: SeriesControl) -> Result<f64> {
    let opts = QuadOptions {
        abs_tol: 1e-300,
        rel_tol: (0.1 * ctl.rel_tol).max(1e-13),
        max_intervals: 4000,
    };
    // the transform is largest near |s| = |w|^{1/β}, where s^β comes closest to w
    let r0 = w.abs().powf(1.0 / p.beta);
    let rho = (0.5 * r0).min(1.0);

    // circle: (1/π) ∫_0^π Re[e^s F(s) s] dφ
    let circle = |phi: f64| {
        let s = Complex64::from_polar(rho, phi);
        (s.exp() * transform(p, w, rho, phi) * s).re
    };
    let (c_val, _) = integrate(circle, &[0.0, 0.5 * PI, PI], opts)?;

    // banks of the cut: -(1/π) ∫_ρ^∞ e^{-r} Im F(r e^{iπ}) dr
    let r_max = 60.0 + 2.0 * p.gamma.abs() + 2.0 * (p.delta as f64);
    let mut breaks = vec![rho];
    for b in [r0, 1.0, 4.0, 16.0] {
        if b > rho * 1.01 && b < r_max {
            breaks.push(b);
        }
    }
    breaks.push(r_max);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let bank = |r: f64| (-r).exp() * transform(p, w, r, PI).im;
    let (b_val, _) = integrate(bank, &breaks, opts)?;

    Ok((c_val - b_val) / PI)
}

/// `E^δ_{β,γ}(w)` for real `w`.
///
/// Positive arguments use the series up to `|w| = 50` (`β ≥ 1/2`) or `20`
/// (`β < 1/2`). Negative arguments fall back to the Kummer form (`β = 1`) or
/// the contour integral (`0 < β < 1`) whenever the series cannot deliver
/// `ctl.rel_tol`.
pub fn mittag_leffler(p: MLParams, w: f64, ctl: SeriesControl) -> Result<f64> {
    if !w.is_finite() {
        return Err(Error::invalid("w", w, "must be finite"));
    }
    if w == 0.0 {
        return Ok(gamma_recip(p.gamma));
    }
    if w.abs() <= p.series_limit() {
        if let SeriesOutcome::Accepted(v) = ml_series(&p, w, ctl) {
            return Ok(v);
        }
    }
    if w < 0.0 {
        if p.beta == 1.0 {
            return ml_kummer(&p, w, ctl);
        }
        if p.beta < 1.0 {
            return ml_contour(&p, w, ctl);
        }
    }
    Err(Error::non_convergence(
        "Mittag-Leffler series",
        format!(
            "beta={}, gamma={}, delta={}, w={w} is outside the series-safe region",
            p.beta, p.gamma, p.delta
        ),
    ))
}

/// Shorthand for [`mittag_leffler`] with default series control.
pub fn ml(delta: u32, beta: f64, gamma: f64, w: f64) -> Result<f64> {
    mittag_leffler(MLParams::new(beta, gamma, delta)?, w, SeriesControl::default())
}
