//! Mean and variance of the queue length.
//!
//! Both come from the generating function. With `A = -ξ t^α` and
//! `E^δ_{β,γ} = E^δ_{β,γ}(A)`,
//!
//! ```text
//! E[X]          = i E_{α,1} + μ [P_{i,0} * τ^{α-1} E_{α,α}(-ξτ^α)] + (λ-μ) t^α E_{α,α+1}
//! E[X(X-1)]     = i(i-1) E_{α,1} + 2i(λ-μ) t^α E²_{α,α+1}
//!               - 2μ [P_{i,0} * τ^{α-1} E_{α,α}(-ξτ^α)]
//!               + 2μ(λ-μ) [P_{i,0} * τ^{2α-1} E²_{α,2α}(-ξτ^α)]
//!               + 2μ t^α E_{α,α+1} + 2(λ-μ)² t^{2α} E²_{α,2α+1}
//! ```
//!
//! where `*` is convolution in time and `P_{i,0}` the fractional probability
//! of an empty queue. The mean is written with `t^α E_{α,α+1}` rather than
//! `(1 - E_{α,1})/ξ`, so `ξ = 0` is a regular point.

use super::convolution::{convolve_with_estimate, TabulatedFunction};
use super::fractional::fractional_p;
use super::{check_time, QuadratureControl, QueueParams, TransientQuery};
use crate::error::{Error, Result};
use crate::specfun::{mittag_leffler, MLParams, SeriesControl};

const NEGATIVE_VARIANCE_SLACK: f64 = 1e-8;

/// Shared state for moment and generating-function evaluations at one
/// `(params, i, t)`: the empty-queue probability tabulated on the
/// convolution nodes.
#[derive(Debug, Clone)]
pub struct MomentKernel {
    params: QueueParams,
    i: usize,
    t: f64,
    p0: Option<TabulatedFunction>,
    qctl: QuadratureControl,
    sctl: SeriesControl,
}

impl MomentKernel {
    pub fn new(params: &QueueParams, i: usize, t: f64, qctl: QuadratureControl, sctl: SeriesControl) -> Result<Self> {
        params.validate()?;
        qctl.validate()?;
        check_time(t)?;
        let p0 = if t > 0.0 {
            Some(TabulatedFunction::tabulate(t, qctl.grid_nodes, |u| {
                fractional_p(params, TransientQuery { i, n: 0, t: u }, qctl, sctl)
            })?)
        } else {
            None
        };
        Ok(Self {
            params: *params,
            i,
            t,
            p0,
            qctl,
            sctl,
        })
    }

    pub fn params(&self) -> &QueueParams {
        &self.params
    }

    pub fn initial_state(&self) -> usize {
        self.i
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    /// `P^α_{i,0}` on the convolution nodes (absent at `t = 0`).
    pub fn empty_probability(&self) -> Option<&TabulatedFunction> {
        self.p0.as_ref()
    }

    pub(crate) fn controls(&self) -> (QuadratureControl, SeriesControl) {
        (self.qctl, self.sctl)
    }

    pub(crate) fn ml(&self, delta: u32, gamma: f64, w: f64) -> Result<f64> {
        mittag_leffler(MLParams::new(self.params.alpha, gamma, delta)?, w, self.sctl)
    }

    /// `[P_{i,0} * τ^{γ-1} E^δ_{α,γ}(w_rate τ^α)](t)` with its half-grid difference.
    pub(crate) fn conv_with_estimate(&self, delta: u32, gamma: f64, w_rate: f64) -> Result<(f64, f64)> {
        match &self.p0 {
            Some(f) => convolve_with_estimate(f, self.params.alpha, delta, gamma, w_rate, self.sctl),
            None => Ok((0.0, 0.0)),
        }
    }

    fn conv(&self, delta: u32, gamma: f64, w_rate: f64) -> Result<f64> {
        let (value, estimate) = self.conv_with_estimate(delta, gamma, w_rate)?;
        if estimate > self.qctl.abs_tol {
            return Err(Error::GridTooCoarse {
                estimate,
                tol: self.qctl.abs_tol,
            });
        }
        Ok(value)
    }

    /// `E[X^α_t]`.
    pub fn mean(&self) -> Result<f64> {
        let QueueParams { lambda, mu, xi, alpha } = self.params;
        if self.t == 0.0 {
            return Ok(self.i as f64);
        }
        let ta = self.t.powf(alpha);
        let a = -xi * ta;
        let m = self.i as f64 * self.ml(1, 1.0, a)?
            + mu * self.conv(1, alpha, -xi)?
            + (lambda - mu) * ta * self.ml(1, alpha + 1.0, a)?;
        Ok(m.max(0.0))
    }

    /// `E[X^α_t (X^α_t - 1)]`.
    pub fn second_factorial_moment(&self) -> Result<f64> {
        let QueueParams { lambda, mu, xi, alpha } = self.params;
        let i = self.i as f64;
        if self.t == 0.0 {
            return Ok(i * (i - 1.0));
        }
        let ta = self.t.powf(alpha);
        let a = -xi * ta;
        let drift = lambda - mu;
        Ok(i * (i - 1.0) * self.ml(1, 1.0, a)?
            + 2.0 * i * ta * drift * self.ml(2, alpha + 1.0, a)?
            - 2.0 * mu * self.conv(1, alpha, -xi)?
            + 2.0 * mu * drift * self.conv(2, 2.0 * alpha, -xi)?
            + 2.0 * mu * ta * self.ml(1, alpha + 1.0, a)?
            + 2.0 * ta * ta * drift * drift * self.ml(2, 2.0 * alpha + 1.0, a)?)
    }

    /// `Var(X^α_t)`; values in `[-1e-8, 0)` are rounding and reported as 0.
    pub fn variance(&self) -> Result<f64> {
        if self.t == 0.0 {
            return Ok(0.0);
        }
        let m = self.mean()?;
        let v = self.second_factorial_moment()? + m - m * m;
        if (-NEGATIVE_VARIANCE_SLACK..0.0).contains(&v) {
            Ok(0.0)
        } else {
            Ok(v)
        }
    }
}

/// `E[X^α_t]` started from `i`.
pub fn mean(p: &QueueParams, i: usize, t: f64, qctl: QuadratureControl, sctl: SeriesControl) -> Result<f64> {
    MomentKernel::new(p, i, t, qctl, sctl)?.mean()
}

/// `Var(X^α_t)` started from `i`.
pub fn variance(p: &QueueParams, i: usize, t: f64, qctl: QuadratureControl, sctl: SeriesControl) -> Result<f64> {
    MomentKernel::new(p, i, t, qctl, sctl)?.variance()
}
