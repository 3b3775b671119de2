//! Convolutions `∫_0^t f(u) (t-u)^{γ-1} E^δ_{α,γ}(w (t-u)^α) du` against
//! Prabhakar kernels.
//!
//! `f` is tabulated once on the nodes of a tanh-sinh rule over `[0, t]` and
//! reused for every kernel. The rule clusters nodes at both ends, absorbing
//! the kernel's power singularity at `u = t` and the fractional-power start
//! of `f` at `u = 0`; the half-resolution rule (every other node) gives the
//! error check.

use rayon::prelude::*;

use super::QuadratureControl;
use crate::error::{Error, Result};
use crate::quad::TanhSinhRule;
use crate::specfun::{mittag_leffler, MLParams, SeriesControl};

/// Samples of a function on the convolution nodes of `[0, t]`.
#[derive(Debug, Clone)]
pub struct TabulatedFunction {
    t: f64,
    rule: TanhSinhRule,
    values: Vec<f64>,
}

impl TabulatedFunction {
    /// Evaluates `f` on the rule nodes (in parallel; node order is fixed).
    /// Nodes closer to the origin than `1e-12 t` use `f(0)`.
    pub fn tabulate<F>(t: f64, grid_nodes: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<f64> + Sync,
    {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::invalid("t", t, "convolution horizon must be positive"));
        }
        let rule = TanhSinhRule::with_nodes(grid_nodes);
        let values = rule
            .nodes()
            .par_iter()
            .map(|n| {
                let u = if n.left < 1e-12 { 0.0 } else { t * n.left };
                f(u)
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self { t, rule, values })
    }

    pub fn horizon(&self) -> f64 {
        self.t
    }

    /// `(u, f(u))` pairs in node order.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.rule.nodes().iter().zip(&self.values).map(|(n, v)| (self.t * n.left, *v))
    }
}

/// `∫_0^t f(u) (t-u)^{γ-1} E^δ_{α,γ}(w_rate (t-u)^α) du` for the tabulated `f`.
///
/// Fails with `GridTooCoarse` when the full and half-resolution rules differ
/// by more than `qctl.abs_tol`.
pub fn convolve_ml_kernel(
    f: &TabulatedFunction,
    alpha: f64,
    delta: u32,
    gamma: f64,
    w_rate: f64,
    qctl: QuadratureControl,
    sctl: SeriesControl,
) -> Result<f64> {
    let (value, estimate) = convolve_with_estimate(f, alpha, delta, gamma, w_rate, sctl)?;
    if estimate > qctl.abs_tol {
        return Err(Error::GridTooCoarse {
            estimate,
            tol: qctl.abs_tol,
        });
    }
    Ok(value)
}

/// Convolution value and the half-resolution difference, unchecked.
pub(crate) fn convolve_with_estimate(
    f: &TabulatedFunction,
    alpha: f64,
    delta: u32,
    gamma: f64,
    w_rate: f64,
    sctl: SeriesControl,
) -> Result<(f64, f64)> {
    if !(gamma > 0.0) {
        return Err(Error::invalid("gamma", gamma, "kernel power gamma - 1 must exceed -1"));
    }
    let ml = MLParams::new(alpha, gamma, delta)?;
    let t = f.t;
    let kernel = f
        .rule
        .nodes()
        .iter()
        .map(|n| {
            let tau = t * n.right;
            Ok(tau.powf(gamma - 1.0) * mittag_leffler(ml, w_rate * tau.powf(alpha), sctl)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (fine, coarse) = f.rule.integrate_pair(t, |k, _, _| f.values[k] * kernel[k]);
    Ok((fine, (fine - coarse).abs()))
}

/// Riemann-Liouville integral `J^α f(t) = (1/Γ(α)) ∫_0^t (t-y)^{α-1} f(y) dy`.
pub fn riemann_liouville(f: &TabulatedFunction, alpha: f64, qctl: QuadratureControl, sctl: SeriesControl) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    convolve_ml_kernel(f, alpha, 1, alpha, 0.0, qctl, sctl)
}
