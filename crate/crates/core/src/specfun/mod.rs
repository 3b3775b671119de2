//! Special functions: reciprocal gamma, modified Bessel functions of the
//! first kind, the Wright function `M_α`, the three-parameter Mittag-Leffler
//! function and the density of the inverse stable subordinator.

mod bessel;
mod gamma;
mod mittag_leffler;
mod summation;
mod wright;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bessel::{bessel_i, bessel_i_scaled_seq};
pub use gamma::gamma_recip;
pub(crate) use gamma::{ln_gamma_recip, ln_pochhammer};
pub use mittag_leffler::{mittag_leffler, ml, MLParams};
pub(crate) use summation::CompensatedSum;
pub use wright::{
    subordinator_density, subordinator_quantile, subordinator_survival, wright_m,
};

/// Truncation control shared by every infinite series in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_terms: 10_000,
        }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(Error::invalid("rel_tol", rel_tol, "must be positive and finite"));
        }
        if max_terms == 0 {
            return Err(Error::invalid("max_terms", 0.0, "must be at least 1"));
        }
        Ok(Self { rel_tol, max_terms })
    }
}
