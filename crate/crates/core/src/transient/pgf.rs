//! Probability generating function `G^α(z, t) = E[z^{X^α_t}]`.
//!
//! The closed form
//!
//! ```text
//! G = z^i E_{α,1}(A t^α) - μ(1/z - 1) [P_{i,0} * τ^{α-1} E_{α,α}(A τ^α)](t) + ξ t^α E_{α,α+1}(A t^α),
//! A = λz - (λ + μ + ξ) + μ/z,
//! ```
//!
//! is well conditioned near `z = 1`. For small `z`, `A` turns positive, the
//! three terms grow like `e^{A^{1/α} t}` and cancel to a value in `[0, 1]`;
//! there the state sum `Σ_n z^n P^α_{i,n}(t)` is used instead.

use serde::{Deserialize, Serialize};

use super::fractional::{default_truncation, fractional_distribution, fractional_p};
use super::moments::MomentKernel;
use super::{check_time, QuadratureControl, QueueParams, TransientQuery};
use crate::error::{Error, Result};
use crate::specfun::SeriesControl;

/// Absolute accuracy the closed form must certify before it is used.
const CLOSED_FORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PgfRoute {
    /// Mittag-Leffler closed form.
    ClosedForm,
    /// Power series over the computed state probabilities.
    StateSum,
    /// `z = 0`: the empty-queue probability.
    EmptyProbability,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PgfValue {
    pub value: f64,
    pub route: PgfRoute,
    /// Estimated absolute error of `value`.
    pub error_estimate: f64,
}

fn check_z(z: f64) -> Result<()> {
    if (0.0..=1.0).contains(&z) {
        Ok(())
    } else {
        Err(Error::invalid("z", z, "must lie in [0, 1]"))
    }
}

impl MomentKernel {
    /// Closed form with its error estimate; `None` when it cannot certify
    /// [`CLOSED_FORM_TOL`].
    fn pgf_closed_form(&self, z: f64) -> Result<Option<PgfValue>> {
        let p = *self.params();
        let t = self.time();
        let ta = t.powf(p.alpha);
        let a = p.lambda * z - p.theta() + p.mu / z;
        let eval = || -> Result<(f64, f64)> {
            let lead = z.powi(self.initial_state() as i32) * self.ml(1, 1.0, a * ta)?;
            let (conv, conv_err) = self.conv_with_estimate(1, p.alpha, a)?;
            let boundary = p.mu * (1.0 / z - 1.0);
            let inflow = p.xi * ta * self.ml(1, p.alpha + 1.0, a * ta)?;
            let value = lead - boundary * conv + inflow;
            let magnitude = lead.abs() + (boundary * conv).abs() + inflow.abs();
            // series/contour values carry ~1e-12 relative error; the convolution its grid difference
            Ok((value, 1e-12 * magnitude + boundary * conv_err))
        };
        match eval() {
            Ok((value, err)) if err <= CLOSED_FORM_TOL && value.is_finite() => Ok(Some(PgfValue {
                value: value.clamp(0.0, 1.0),
                route: PgfRoute::ClosedForm,
                error_estimate: err,
            })),
            Ok(_) => Ok(None),
            Err(e) if e.is_numerical() => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// `G^α(z, t)` with the route that produced it.
    pub fn pgf(&self, z: f64) -> Result<PgfValue> {
        check_z(z)?;
        let (qctl, sctl) = self.controls();
        let (p, i, t) = (*self.params(), self.initial_state(), self.time());
        if t == 0.0 {
            return Ok(PgfValue {
                value: z.powi(i as i32),
                route: PgfRoute::ClosedForm,
                error_estimate: 0.0,
            });
        }
        if z == 0.0 {
            let value = fractional_p(&p, TransientQuery { i, n: 0, t }, qctl, sctl)?;
            return Ok(PgfValue {
                value,
                route: PgfRoute::EmptyProbability,
                error_estimate: qctl.abs_tol,
            });
        }
        if let Some(v) = self.pgf_closed_form(z)? {
            return Ok(v);
        }
        let n_trunc = default_truncation(&p, i, t, qctl, sctl)?;
        let dist = fractional_distribution(&p, i, t, n_trunc, qctl, sctl)?;
        let tail = dist.tail_mass.max(0.0) * z.powi(n_trunc as i32 + 1);
        Ok(PgfValue {
            value: (dist.pgf(z) + tail).clamp(0.0, 1.0),
            route: PgfRoute::StateSum,
            error_estimate: qctl.abs_tol + tail,
        })
    }
}

/// `G^α(z, t)` with the evaluation route.
pub fn pgf_detailed(
    p: &QueueParams,
    i: usize,
    z: f64,
    t: f64,
    qctl: QuadratureControl,
    sctl: SeriesControl,
) -> Result<PgfValue> {
    check_z(z)?;
    check_time(t)?;
    MomentKernel::new(p, i, t, qctl, sctl)?.pgf(z)
}

/// `G^α(z, t) = Σ_n z^n P^α_{i,n}(t)`.
pub fn pgf(p: &QueueParams, i: usize, z: f64, t: f64, qctl: QuadratureControl, sctl: SeriesControl) -> Result<f64> {
    Ok(pgf_detailed(p, i, z, t, qctl, sctl)?.value)
}
