//! Transient law of the fractional queue: state probabilities, the
//! probability generating function, mean and variance.
//!
//! Every fractional quantity is reduced to the classical (`α = 1`) chain by
//! subordination: `P^α_{i,n}(t) = ∫_0^∞ P_{i,n}(y) f_α(y, t) dy`.

mod classical;
mod convolution;
mod fractional;
mod moments;
mod ode;
mod pgf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use classical::{classical_distribution, classical_p, classical_p_hitting_form};
pub use convolution::{convolve_ml_kernel, riemann_liouville, TabulatedFunction};
pub use fractional::{default_truncation, fractional_distribution, fractional_p};
pub use moments::{mean, variance, MomentKernel};
pub use ode::{forward_ode_reference, forward_rhs};
pub use pgf::{pgf, pgf_detailed, PgfRoute, PgfValue};

/// Rates `λ, μ, ξ` and fractional order `α` of the queue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueueParams {
    pub lambda: f64,
    pub mu: f64,
    pub xi: f64,
    pub alpha: f64,
}

impl QueueParams {
    pub fn new(lambda: f64, mu: f64, xi: f64, alpha: f64) -> Result<Self> {
        let p = Self {
            lambda,
            mu,
            xi,
            alpha,
        };
        p.validate()?;
        Ok(p)
    }

    /// Checks the domain; useful after deserializing.
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return Err(Error::invalid("lambda", self.lambda, "arrival rate must be positive"));
        }
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return Err(Error::invalid("mu", self.mu, "service rate must be positive"));
        }
        if !(self.xi >= 0.0) || !self.xi.is_finite() {
            return Err(Error::invalid("xi", self.xi, "catastrophe rate must be nonnegative"));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::AlphaOutOfRange(self.alpha));
        }
        Ok(())
    }

    /// Total event rate `θ = λ + μ + ξ` out of a nonempty state.
    pub fn theta(&self) -> f64 {
        self.lambda + self.mu + self.xi
    }

    /// Same rates with `α = 1`.
    pub fn classical(&self) -> Self {
        Self { alpha: 1.0, ..*self }
    }
}

/// Query `P^α_{i,n}(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransientQuery {
    pub i: usize,
    pub n: usize,
    pub t: f64,
}

impl TransientQuery {
    pub fn new(i: usize, n: usize, t: f64) -> Result<Self> {
        check_time(t)?;
        Ok(Self { i, n, t })
    }
}

/// `P^α_{i,n}(t)` for `n = 0..probs.len()`, with the mass beyond the truncation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransientDistribution {
    pub t: f64,
    pub i: usize,
    pub probs: Vec<f64>,
    pub tail_mass: f64,
}

impl TransientDistribution {
    pub(crate) fn from_probs(t: f64, i: usize, probs: Vec<f64>) -> Self {
        let total: f64 = probs.iter().sum();
        Self {
            t,
            i,
            probs,
            tail_mass: 1.0 - total,
        }
    }

    pub fn delta(t: f64, i: usize, n_trunc: usize) -> Self {
        let mut probs = vec![0.0; n_trunc + 1];
        if i <= n_trunc {
            probs[i] = 1.0;
        }
        Self::from_probs(t, i, probs)
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
    }

    pub fn second_moment(&self) -> f64 {
        self.probs.iter().enumerate().map(|(n, p)| (n * n) as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.second_moment() - m * m
    }

    /// `Σ_n z^n p_n` over the stored states.
    pub fn pgf(&self, z: f64) -> f64 {
        self.probs.iter().rev().fold(0.0, |acc, p| acc * z + p)
    }
}

/// Accuracy and discretization settings for the subordination integral and
/// the convolution rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureControl {
    pub abs_tol: f64,
    /// Quantile of `f_α(·, t)` at which the subordination integral is cut.
    pub y_cut_quantile: f64,
    /// Node count of the convolution rule.
    pub grid_nodes: usize,
}

impl Default for QuadratureControl {
    fn default() -> Self {
        Self {
            abs_tol: 1e-8,
            y_cut_quantile: 1.0 - 1e-9,
            grid_nodes: 256,
        }
    }
}

impl QuadratureControl {
    pub fn new(abs_tol: f64, y_cut_quantile: f64, grid_nodes: usize) -> Result<Self> {
        let q = Self {
            abs_tol,
            y_cut_quantile,
            grid_nodes,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::invalid("abs_tol", self.abs_tol, "must be positive"));
        }
        if !(self.y_cut_quantile > 0.0 && self.y_cut_quantile < 1.0) {
            return Err(Error::invalid("y_cut_quantile", self.y_cut_quantile, "must lie in (0, 1)"));
        }
        if self.grid_nodes < 8 {
            return Err(Error::invalid("grid_nodes", self.grid_nodes as f64, "must be at least 8"));
        }
        Ok(())
    }
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("t", t, "time must be finite and nonnegative"))
    }
}
