use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::RngStream;
use crate::simulator::{simulate_path, EventKind, StopRule};
use crate::specfun::SeriesControl;
use crate::transient::{fractional_distribution, MomentKernel, QuadratureControl, QueueParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransientCurveRow {
    pub t: f64,
    pub alpha: f64,
    pub n: usize,
    pub probability: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentCurveRow {
    pub t: f64,
    pub alpha: f64,
    pub mean: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathTraceRow {
    pub alpha: f64,
    pub time: f64,
    /// `start`, an event kind, or `end`.
    pub kind: String,
    pub state: usize,
}

fn with_alpha(base: &QueueParams, alpha: f64) -> Result<QueueParams> {
    QueueParams::new(base.lambda, base.mu, base.xi, alpha)
}

fn orders(base: &QueueParams, alphas: &[f64]) -> Vec<f64> {
    if alphas.is_empty() {
        vec![base.alpha]
    } else {
        alphas.to_vec()
    }
}

/// `P^α_{i,n}(t)` over `alphas × t_grid × n_values` (rows in that nesting order).
///
/// An empty `alphas` uses `base.alpha`. Each `(α, t)` pair shares one outer
/// quadrature for all requested states.
pub fn emit_transient_curves(
    base: &QueueParams,
    alphas: &[f64],
    i: usize,
    n_values: &[usize],
    t_grid: &[f64],
    qctl: QuadratureControl,
    sctl: SeriesControl,
) -> Result<Vec<TransientCurveRow>> {
    let n_max = *n_values
        .iter()
        .max()
        .ok_or_else(|| Error::Format("no states requested".into()))?;
    let cells: Vec<(f64, f64)> = orders(base, alphas)
        .into_iter()
        .flat_map(|a| t_grid.iter().map(move |&t| (a, t)))
        .collect();
    let blocks = cells
        .par_iter()
        .map(|&(a, t)| {
            let p = with_alpha(base, a)?;
            let d = fractional_distribution(&p, i, t, n_max, qctl, sctl)?;
            Ok(n_values
                .iter()
                .map(|&n| TransientCurveRow {
                    t,
                    alpha: a,
                    n,
                    probability: d.probs[n],
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

/// Mean and variance of the queue length over `alphas × t_grid`.
pub fn emit_moment_curves(
    base: &QueueParams,
    alphas: &[f64],
    i: usize,
    t_grid: &[f64],
    qctl: QuadratureControl,
    sctl: SeriesControl,
) -> Result<Vec<MomentCurveRow>> {
    let cells: Vec<(f64, f64)> = orders(base, alphas)
        .into_iter()
        .flat_map(|a| t_grid.iter().map(move |&t| (a, t)))
        .collect();
    cells
        .par_iter()
        .map(|&(a, t)| {
            let p = with_alpha(base, a)?;
            let k = MomentKernel::new(&p, i, t, qctl, sctl)?;
            Ok(MomentCurveRow {
                t,
                alpha: a,
                mean: k.mean()?,
                variance: k.variance()?,
            })
        })
        .collect()
}

/// Step-function trajectories, one per order; order `k` in `alphas` uses stream `k` of `seed`.
pub fn emit_path_traces(
    base: &QueueParams,
    i: usize,
    alphas: &[f64],
    stop: StopRule,
    seed: u64,
) -> Result<Vec<PathTraceRow>> {
    let mut rows = Vec::new();
    for (k, &a) in orders(base, alphas).iter().enumerate() {
        let p = with_alpha(base, a)?;
        let path = simulate_path(&p, i, stop, RngStream::new(seed, k as u64))?;
        rows.push(PathTraceRow {
            alpha: a,
            time: 0.0,
            kind: "start".into(),
            state: i,
        });
        rows.extend(path.events.iter().map(|e| PathTraceRow {
            alpha: a,
            time: e.time,
            kind: EventKind::as_str(e.kind).into(),
            state: e.state,
        }));
        rows.push(PathTraceRow {
            alpha: a,
            time: path.end_time,
            kind: "end".into(),
            state: path.final_state(),
        });
    }
    Ok(rows)
}
