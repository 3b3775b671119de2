//! Reciprocal gamma and signed log-gamma helpers.
//!
//! `tgamma` and `lgamma_r` come from `libm`; what is added here is the pole
//! convention (`1/Γ` vanishes at nonpositive integers) and the log-space form
//! used by the power-series kernels.

/// `1/Γ(x)`, exactly zero at the poles `x = 0, -1, -2, ...`.
pub fn gamma_recip(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if is_pole(x) {
        return 0.0;
    }
    if x.abs() < 170.0 {
        return 1.0 / libm::tgamma(x);
    }
    let (lg, sign) = libm::lgamma_r(x);
    sign as f64 * (-lg).exp()
}

/// `(ln |1/Γ(x)|, sign(1/Γ(x)))`; the sign is 0 at poles, where the log is `-inf`.
pub fn ln_gamma_recip(x: f64) -> (f64, f64) {
    if is_pole(x) {
        return (f64::NEG_INFINITY, 0.0);
    }
    let (lg, sign) = libm::lgamma_r(x);
    (-lg, sign as f64)
}

/// `(ln |(a)_r|, sign((a)_r))` for the rising factorial `a (a+1) ... (a+r-1)`.
pub fn ln_pochhammer(a: f64, r: usize) -> (f64, f64) {
    if r == 0 {
        return (0.0, 1.0);
    }
    // a nonpositive integer with a + r - 1 >= 0 makes the product pass through zero
    if is_pole(a) && a + (r as f64) - 1.0 >= 0.0 {
        return (f64::NEG_INFINITY, 0.0);
    }
    if is_pole(a) {
        // short finite product; Γ ratios are undefined here
        let mut log = 0.0;
        let mut sign = 1.0;
        for k in 0..r {
            let f = a + k as f64;
            log += f.abs().ln();
            if f < 0.0 {
                sign = -sign;
            }
        }
        return (log, sign);
    }
    let (num, s_num) = libm::lgamma_r(a + r as f64);
    let (den, s_den) = libm::lgamma_r(a);
    (num - den, (s_num * s_den) as f64)
}

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}
