//! Moment estimators of `(α, θ, λ, μ, ξ)` from sojourns out of nonempty states.
//!
//! With `S = (E/θ)^{1/α} T`, `ln S` has mean `-ln θ / α - γ` and variance
//! `π²(1/(3α²) - 1/6)`; inverting the two sample log-moments gives `α̂` and
//! `θ̂`. Event-type proportions split `θ̂` into the three rates.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::simulator::SojournSample;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const ZETA3: f64 = 1.202_056_903_159_594_2;

/// Which variance expression is used for the rate intervals.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateVarianceForm {
    /// `(θ² p(1-p) + p² σ²_θ) / n`, the delta-method asymptotic variance.
    #[default]
    Asymptotic,
    /// `(θ p(1-p) + p² σ²_θ) / n`, kept for comparison with published interval tables.
    LinearTheta,
}

/// Diagnostics raised while building a report.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimationFlags {
    /// `α̂ > 1`; reported unclamped.
    pub alpha_above_one: bool,
    /// The `σ²_θ` expression was negative at the plug-in values and was set to 0.
    pub sigma2_theta_clamped: bool,
    /// The `α̂` interval variance was negative (only for `α̂` near `√2`) and was set to 0.
    pub alpha_variance_clamped: bool,
}

/// Point estimates before intervals are attached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointEstimates {
    pub alpha_hat: f64,
    pub theta_hat: f64,
    pub n_a: usize,
    pub n_s: usize,
    pub n_c: usize,
}

impl PointEstimates {
    pub fn n(&self) -> usize {
        self.n_a + self.n_s + self.n_c
    }

    pub fn p_hat(&self) -> [f64; 3] {
        let n = self.n() as f64;
        [self.n_a as f64 / n, self.n_s as f64 / n, self.n_c as f64 / n]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationReport {
    pub alpha_hat: f64,
    pub theta_hat: f64,
    pub lambda_hat: f64,
    pub mu_hat: f64,
    pub xi_hat: f64,
    pub p_hat: [f64; 3],
    pub sigma2_theta_hat: f64,
    pub ci_alpha: (f64, f64),
    pub ci_lambda: (f64, f64),
    pub ci_mu: (f64, f64),
    pub ci_xi: (f64, f64),
    pub level: f64,
    pub n: usize,
    pub rate_variance: RateVarianceForm,
    pub flags: EstimationFlags,
}

#[derive(Serialize)]
struct ReportRow {
    alpha_hat: f64,
    theta_hat: f64,
    lambda_hat: f64,
    mu_hat: f64,
    xi_hat: f64,
    p1_hat: f64,
    p2_hat: f64,
    p3_hat: f64,
    sigma2_theta_hat: f64,
    ci_alpha_lower: f64,
    ci_alpha_upper: f64,
    ci_lambda_lower: f64,
    ci_lambda_upper: f64,
    ci_mu_lower: f64,
    ci_mu_upper: f64,
    ci_xi_lower: f64,
    ci_xi_upper: f64,
    level: f64,
    n: usize,
    rate_variance: RateVarianceForm,
    alpha_above_one: bool,
    sigma2_theta_clamped: bool,
    alpha_variance_clamped: bool,
}

impl EstimationReport {
    /// Writes a header and one data row.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let row = ReportRow {
            alpha_hat: self.alpha_hat,
            theta_hat: self.theta_hat,
            lambda_hat: self.lambda_hat,
            mu_hat: self.mu_hat,
            xi_hat: self.xi_hat,
            p1_hat: self.p_hat[0],
            p2_hat: self.p_hat[1],
            p3_hat: self.p_hat[2],
            sigma2_theta_hat: self.sigma2_theta_hat,
            ci_alpha_lower: self.ci_alpha.0,
            ci_alpha_upper: self.ci_alpha.1,
            ci_lambda_lower: self.ci_lambda.0,
            ci_lambda_upper: self.ci_lambda.1,
            ci_mu_lower: self.ci_mu.0,
            ci_mu_upper: self.ci_mu.1,
            ci_xi_lower: self.ci_xi.0,
            ci_xi_upper: self.ci_xi.1,
            level: self.level,
            n: self.n,
            rate_variance: self.rate_variance,
            alpha_above_one: self.flags.alpha_above_one,
            sigma2_theta_clamped: self.flags.sigma2_theta_clamped,
            alpha_variance_clamped: self.flags.alpha_variance_clamped,
        };
        let mut wr = csv::Writer::from_writer(w);
        wr.serialize(row).map_err(|e| Error::Format(e.to_string()))?;
        wr.flush().map_err(|e| Error::Format(e.to_string()))
    }
}

/// Sample mean and variance (divisor `n`) of `ln S`.
pub fn log_moments(log_sojourns: &[f64]) -> Result<(f64, f64)> {
    if log_sojourns.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{} log-sojourns; at least 2 are needed",
            log_sojourns.len()
        )));
    }
    if let Some(x) = log_sojourns.iter().find(|x| !x.is_finite()) {
        return Err(Error::invalid("log_sojourn", *x, "must be finite"));
    }
    let n = log_sojourns.len() as f64;
    let mean = log_sojourns.iter().sum::<f64>() / n;
    let var = log_sojourns.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    Ok((mean, var))
}

/// `α̂ = π / √(3(σ̂²_{ln S} + π²/6))`.
pub fn estimate_alpha(log_sojourns: &[f64]) -> Result<f64> {
    let (_, var) = log_moments(log_sojourns)?;
    Ok(alpha_from_variance(var))
}

fn alpha_from_variance(var: f64) -> f64 {
    PI / (3.0 * (var + PI * PI / 6.0)).sqrt()
}

/// `θ̂ = exp(-α̂ (μ̂_{ln S} + γ))`.
pub fn estimate_theta(log_sojourns: &[f64], alpha_hat: f64) -> Result<f64> {
    if !(alpha_hat > 0.0) || !alpha_hat.is_finite() {
        return Err(Error::invalid("alpha_hat", alpha_hat, "must be positive"));
    }
    let (mean, _) = log_moments(log_sojourns)?;
    Ok(theta_from_mean(mean, alpha_hat))
}

fn theta_from_mean(mean: f64, alpha_hat: f64) -> f64 {
    (-alpha_hat * (mean + EULER_GAMMA)).exp()
}

/// `(p̂₁θ̂, p̂₂θ̂, p̂₃θ̂)` with `p̂ = (n_a, n_s, n_c) / n`.
pub fn split_rates(counts: (usize, usize, usize), theta_hat: f64) -> Result<(f64, f64, f64)> {
    let n = counts.0 + counts.1 + counts.2;
    if n == 0 {
        return Err(Error::InsufficientData("no events to split the rate".into()));
    }
    let n = n as f64;
    Ok((
        counts.0 as f64 / n * theta_hat,
        counts.1 as f64 / n * theta_hat,
        counts.2 as f64 / n * theta_hat,
    ))
}

fn sigma2_theta_raw(alpha: f64, theta: f64) -> f64 {
    let l = theta.ln();
    let a2 = alpha * alpha;
    let bracket = 20.0 * PI.powi(4) * (2.0 - a2) - 3.0 * PI * PI * (a2 * a2 + 20.0 * a2 - 32.0) * l * l
        - 720.0 * alpha * a2 * l * ZETA3;
    theta * theta * bracket / (120.0 * PI * PI)
}

/// Asymptotic variance of `√n (θ̂ - θ)`.
///
/// Can be negative far outside the usual parameter range; callers building
/// intervals clamp it (see [`EstimationFlags::sigma2_theta_clamped`]).
pub fn sigma2_theta(alpha: f64, theta: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::invalid("theta", theta, "must be positive"));
    }
    Ok(sigma2_theta_raw(alpha, theta))
}

/// Two-sided standard normal quantile for confidence `level`.
pub fn normal_quantile(level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid("level", level, "confidence level must lie in (0, 1)"));
    }
    let std = Normal::new(0.0, 1.0).expect("standard normal");
    Ok(std.inverse_cdf(0.5 + 0.5 * level))
}

/// Symmetric normal intervals with plug-in `α̂, θ̂, p̂` in every variance.
pub fn confidence_intervals(
    est: &PointEstimates,
    level: f64,
    n: usize,
    form: RateVarianceForm,
) -> Result<EstimationReport> {
    let z = normal_quantile(level)?;
    if n == 0 || est.n() == 0 {
        return Err(Error::InsufficientData("sample size must be positive".into()));
    }
    let (a, th) = (est.alpha_hat, est.theta_hat);
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::invalid("alpha_hat", a, "must be positive"));
    }
    if !(th > 0.0) || !th.is_finite() {
        return Err(Error::invalid("theta_hat", th, "must be positive"));
    }
    let nf = n as f64;
    let mut flags = EstimationFlags {
        alpha_above_one: a > 1.0,
        ..Default::default()
    };

    let a2 = a * a;
    let mut var_alpha = a2 * (32.0 - 20.0 * a2 - a2 * a2) / (40.0 * nf);
    if var_alpha < 0.0 {
        flags.alpha_variance_clamped = true;
        var_alpha = 0.0;
    }
    let mut s2 = sigma2_theta_raw(a, th);
    if s2 < 0.0 {
        flags.sigma2_theta_clamped = true;
        s2 = 0.0;
    }
    let p = est.p_hat();
    let (lambda_hat, mu_hat, xi_hat) = split_rates((est.n_a, est.n_s, est.n_c), th)?;
    let scale = match form {
        RateVarianceForm::Asymptotic => th * th,
        RateVarianceForm::LinearTheta => th,
    };
    let interval = |x: f64, var: f64| {
        let h = z * var.sqrt();
        (x - h, x + h)
    };
    let rate_ci = |x: f64, pk: f64| interval(x, (scale * pk * (1.0 - pk) + pk * pk * s2) / nf);

    Ok(EstimationReport {
        alpha_hat: a,
        theta_hat: th,
        lambda_hat,
        mu_hat,
        xi_hat,
        p_hat: p,
        sigma2_theta_hat: s2,
        ci_alpha: interval(a, var_alpha),
        ci_lambda: rate_ci(lambda_hat, p[0]),
        ci_mu: rate_ci(mu_hat, p[1]),
        ci_xi: rate_ci(xi_hat, p[2]),
        level,
        n,
        rate_variance: form,
        flags,
    })
}

/// Point estimates from a sojourn sample.
pub fn point_estimates(sample: &SojournSample) -> Result<PointEstimates> {
    if sample.waiting_times.len() != sample.n() {
        return Err(Error::Format(format!(
            "{} waiting times but {} classified events",
            sample.waiting_times.len(),
            sample.n()
        )));
    }
    if let Some(w) = sample.waiting_times.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
        return Err(Error::invalid("waiting_time", *w, "must be positive and finite"));
    }
    let logs: Vec<f64> = sample.waiting_times.iter().map(|w| w.ln()).collect();
    let (mean, var) = log_moments(&logs)?;
    let alpha_hat = alpha_from_variance(var);
    Ok(PointEstimates {
        alpha_hat,
        theta_hat: theta_from_mean(mean, alpha_hat),
        n_a: sample.n_a,
        n_s: sample.n_s,
        n_c: sample.n_c,
    })
}

/// Full pipeline with the default (asymptotic) rate-variance form.
pub fn estimate(sample: &SojournSample, level: f64) -> Result<EstimationReport> {
    estimate_with(sample, level, RateVarianceForm::default())
}

pub fn estimate_with(sample: &SojournSample, level: f64, form: RateVarianceForm) -> Result<EstimationReport> {
    let est = point_estimates(sample)?;
    confidence_intervals(&est, level, est.n(), form)
}
