//! Monte Carlo coverage study and plot-ready datasets.

mod curves;
mod study;

pub use curves::{
    emit_moment_curves, emit_path_traces, emit_transient_curves, MomentCurveRow, PathTraceRow, TransientCurveRow,
};
pub use study::{
    run_mc_study, run_study, write_summaries_csv, MCConfig, MonteCarloSummary, ParameterRow, StudyBlock, StudyConfig,
};

/// Writes any slice of serializable rows as long-format CSV.
pub fn write_rows_csv<T: serde::Serialize, W: std::io::Write>(rows: &[T], w: W) -> crate::Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r).map_err(|e| crate::Error::Format(e.to_string()))?;
    }
    wr.flush().map_err(|e| crate::Error::Format(e.to_string()))
}
