//! Fractional M/M/1 queue with catastrophes.
//!
//! The queue length `X^α_t` is a birth-death chain with arrival rate `λ`,
//! service rate `μ` and catastrophes (jumps to the empty state) at rate `ξ`,
//! run on the clock of an inverse `α`-stable subordinator. This crate
//! evaluates its transient law and moments, simulates it exactly and
//! estimates its parameters from observed sojourns.

// `!(x > 0.0)` deliberately rejects NaN as well; quadrature tables keep their published digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod estimation;
pub mod experiments;
pub mod quad;
pub mod sampling;
pub mod simulator;
pub mod specfun;
pub mod transient;

pub use error::{Error, Result};
pub use estimation::{EstimationReport, RateVarianceForm};
pub use experiments::{MCConfig, MonteCarloSummary, StudyConfig};
pub use sampling::RngStream;
pub use simulator::{EventKind, SamplePath, SojournSample, StopRule};
pub use specfun::{MLParams, SeriesControl};
pub use transient::{QuadratureControl, QueueParams, TransientDistribution, TransientQuery};
