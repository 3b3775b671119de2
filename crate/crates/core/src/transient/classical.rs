//! Classical (`α = 1`) transient probabilities.
//!
//! Without catastrophes the chain is the M/M/1 queue, whose transition
//! probabilities `Q_{i,n}(t)` are Bessel series. Catastrophes restart the
//! queue from zero at rate `ξ`, so by conditioning on the last catastrophe
//!
//! ```text
//! P_{i,n}(t) = e^{-ξt} Q_{i,n}(t) + ξ ∫_0^t e^{-ξu} Q_{0,n}(u) du.
//! ```
//!
//! All Bessel values are used in the scaled form `e^{-x} I_k(x)` with
//! `x = 2√(λμ) t`, which leaves the overall factor `e^{-(√λ-√μ)² t}`.

use super::{check_time, QueueParams, TransientQuery};
use crate::error::Result;
use crate::quad::{integrate_vec, QuadOptions};
use crate::specfun::{bessel_i_scaled_seq, SeriesControl};

/// Bessel-series kernel of the M/M/1 queue with rates `λ, μ`.
pub(crate) struct Mm1 {
    mu: f64,
    r: f64,
    ln_r: f64,
    rho: f64,
    beta: f64,
    gap: f64,
}

/// `r^k v` without forming `r^k`, which over- or underflows for long rows.
fn scaled_pow(ln_r: f64, k: i64, v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        (k as f64 * ln_r + v.ln()).exp()
    }
}

impl Mm1 {
    pub(crate) fn new(p: &QueueParams) -> Self {
        let r = (p.lambda / p.mu).sqrt();
        Self {
            mu: p.mu,
            r,
            ln_r: r.ln(),
            rho: p.lambda / p.mu,
            beta: 2.0 * (p.lambda * p.mu).sqrt(),
            gap: (p.lambda.sqrt() - p.mu.sqrt()).powi(2),
        }
    }

    /// Highest Bessel order needed so tails `Σ_k r^{-k} I_{m+k}` are complete for `m <= top`.
    fn bessel_order(&self, x: f64, top: usize) -> usize {
        let mut extra = 30.0 + 8.0 * x.sqrt();
        if self.r < 1.0 {
            extra += 2.0 * x * (-self.ln_r);
        }
        top + extra.ceil() as usize
    }

    /// `T(m) = Σ_{k≥0} r^{-k} e^{-x} I_{m+k}(x)` for `m = lo..=hi`.
    fn tails(&self, scaled: &[f64], lo: usize, hi: usize) -> Vec<f64> {
        let mut out = vec![0.0; hi - lo + 1];
        let mut acc = 0.0;
        for m in (lo..scaled.len()).rev() {
            acc = scaled[m] + acc / self.r;
            if m <= hi {
                out[m - lo] = acc;
            }
        }
        out
    }

    /// `Q_{i,n}(u)` for `n = 0..out.len()`.
    pub(crate) fn q_row(&self, i: usize, u: f64, out: &mut [f64]) {
        let n_max = out.len() - 1;
        if u == 0.0 {
            out.iter_mut().enumerate().for_each(|(n, v)| *v = if n == i { 1.0 } else { 0.0 });
            return;
        }
        let x = self.beta * u;
        let top = n_max + i + 2;
        let sc = bessel_i_scaled_seq(x, self.bessel_order(x, top));
        let tails = self.tails(&sc, i + 2, top);
        let damp = (-self.gap * u).exp();
        let lr = self.ln_r;
        for (n, slot) in out.iter_mut().enumerate() {
            let d = n as i64 - i as i64;
            let direct = scaled_pow(lr, d, sc[d.unsigned_abs() as usize]);
            let reflected = scaled_pow(lr, d - 1, sc[n + i + 1]);
            let tail = (1.0 - self.rho) * scaled_pow(lr, d - 2, tails[n]);
            *slot = (damp * (direct + reflected + tail)).max(0.0);
        }
    }

    /// Hitting-time form: `R_m = Σ_{j≥m} (j/u) r^{-(j-m)} e^{-x} I_j(x)` for `m = 1..=hi`
    /// (index 0 unused).
    fn hitting_sums(&self, sc: &[f64], u: f64, hi: usize) -> Vec<f64> {
        let mut out = vec![0.0; hi + 1];
        let mut acc = 0.0;
        for m in (1..sc.len()).rev() {
            acc = (m as f64 / u) * sc[m] + acc / self.r;
            if m <= hi {
                out[m] = acc;
            }
        }
        out
    }
}

fn catastrophe_opts(ctl: SeriesControl) -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-14,
        rel_tol: ctl.rel_tol.max(1e-13),
        max_intervals: 2000,
    }
}

fn catastrophe_breaks(y: f64) -> Vec<f64> {
    if y <= 1.0 {
        vec![0.0, y]
    } else {
        vec![0.0, 0.25 * y, 0.5 * y, y]
    }
}

/// `P_{i,n}(y)` for `n = 0..=n_max` at `α = 1`.
pub fn classical_distribution(p: &QueueParams, i: usize, y: f64, n_max: usize, ctl: SeriesControl) -> Result<Vec<f64>> {
    p.validate()?;
    check_time(y)?;
    let mut out = vec![0.0; n_max + 1];
    if y == 0.0 {
        if i <= n_max {
            out[i] = 1.0;
        }
        return Ok(out);
    }
    let mm1 = Mm1::new(p);
    mm1.q_row(i, y, &mut out);
    let survive = (-p.xi * y).exp();
    out.iter_mut().for_each(|v| *v *= survive);
    if p.xi > 0.0 {
        let res = integrate_vec(
            |u, buf: &mut [f64]| {
                mm1.q_row(0, u, buf);
                let w = p.xi * (-p.xi * u).exp();
                buf.iter_mut().for_each(|v| *v *= w);
            },
            &catastrophe_breaks(y),
            n_max + 1,
            catastrophe_opts(ctl),
        )?;
        for (o, v) in out.iter_mut().zip(res.value) {
            *o += v;
        }
    }
    out.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0));
    Ok(out)
}

/// `P_{i,n}(t)` of the classical queue with catastrophes (`α` is ignored).
pub fn classical_p(p: &QueueParams, q: TransientQuery, ctl: SeriesControl) -> Result<f64> {
    p.validate()?;
    check_time(q.t)?;
    if q.t == 0.0 {
        return Ok(if q.i == q.n { 1.0 } else { 0.0 });
    }
    let mm1 = Mm1::new(p);
    let mut row = vec![0.0; q.n + 1];
    mm1.q_row(q.i, q.t, &mut row);
    let mut value = (-p.xi * q.t).exp() * row[q.n];
    if p.xi > 0.0 {
        let res = integrate_vec(
            |u, out: &mut [f64]| {
                mm1.q_row(0, u, &mut row);
                out[0] = p.xi * (-p.xi * u).exp() * row[q.n];
            },
            &catastrophe_breaks(q.t),
            1,
            catastrophe_opts(ctl),
        )?;
        value += res.value[0];
    }
    Ok(value.clamp(0.0, 1.0))
}

/// `P_{i,n}(t)` from the hitting-time representation of the empty state:
/// `P_{i,0}` as `(1/μ) Σ_{j>i} (j/t) r^{-j} I_j e^{-θt}` plus the
/// catastrophe integral, and `P_{i,n}` through the reflected Bessel sums.
///
/// Slower than [`classical_p`] and independent of its tail recursion; kept
/// as a cross-check.
pub fn classical_p_hitting_form(p: &QueueParams, q: TransientQuery, ctl: SeriesControl) -> Result<f64> {
    p.validate()?;
    check_time(q.t)?;
    if q.t == 0.0 {
        return Ok(if q.i == q.n { 1.0 } else { 0.0 });
    }
    let mm1 = Mm1::new(p);
    let lr = mm1.ln_r;
    let (i, n, t) = (q.i, q.n, q.t);

    // Q_{0,n}(u) = ρ^n Q_{n,0}(u) = (r^{n-1}/μ) e^{-(√λ-√μ)²u} R_{n+1}(u)
    let q0n = |u: f64| {
        let x = mm1.beta * u;
        let sc = bessel_i_scaled_seq(x, mm1.bessel_order(x, n + 2));
        let r = mm1.hitting_sums(&sc, u, n + 1);
        (-mm1.gap * u).exp() * scaled_pow(lr, n as i64 - 1, r[n + 1]) / mm1.mu
    };

    let x = mm1.beta * t;
    let sc = bessel_i_scaled_seq(x, mm1.bessel_order(x, n + i + 2));
    let damp = (-(mm1.gap + p.xi) * t).exp();
    let free = if n == 0 {
        let r = mm1.hitting_sums(&sc, t, i + 1);
        damp * scaled_pow(lr, -(i as i64) - 1, r[i + 1]) / mm1.mu
    } else {
        let d = n as i64 - i as i64;
        let mut s = scaled_pow(lr, d, sc[d.unsigned_abs() as usize]);
        for m in 0..(sc.len() - n - i - 2) {
            let mf = m as i64;
            s += scaled_pow(lr, d - 1 - mf, sc[m + n + i + 1]) - scaled_pow(lr, d - mf, sc[m + n + i + 2]);
        }
        damp * s
    };

    let mut value = free;
    if p.xi > 0.0 {
        let res = integrate_vec(
            |u, out: &mut [f64]| out[0] = p.xi * (-p.xi * u).exp() * q0n(u),
            &catastrophe_breaks(t),
            1,
            catastrophe_opts(ctl),
        )?;
        value += res.value[0];
    }
    Ok(value.clamp(0.0, 1.0))
}
