use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::{estimate_with, EstimationReport, RateVarianceForm};
use crate::sampling::RngStream;
use crate::simulator::simulate_sojourns;
use crate::transient::QueueParams;

fn default_initial_state() -> usize {
    1
}

/// One cell of the study: a parameter point and a sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCConfig {
    pub params_true: QueueParams,
    /// Sojourns out of nonempty states per replicate.
    pub sample_size: usize,
    pub replicates: usize,
    pub confidence_level: f64,
    pub base_seed: u64,
    #[serde(default = "default_initial_state")]
    pub initial_state: usize,
    #[serde(default)]
    pub rate_variance: RateVarianceForm,
}

impl MCConfig {
    pub fn validate(&self) -> Result<()> {
        self.params_true.validate()?;
        if self.sample_size < 2 {
            return Err(Error::invalid("sample_size", self.sample_size as f64, "need at least 2 sojourns"));
        }
        if self.replicates == 0 {
            return Err(Error::invalid("replicates", 0.0, "must be positive"));
        }
        if !(self.confidence_level > 0.0 && self.confidence_level < 1.0) {
            return Err(Error::invalid("confidence_level", self.confidence_level, "must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// Bias, dispersion and coverage of one estimator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterRow {
    pub name: String,
    pub true_value: f64,
    /// `100 |mean - true| / true`.
    pub pct_bias: f64,
    /// `100 sd / mean` with the `n - 1` divisor; NaN for a single replicate.
    pub cv: f64,
    /// Fraction of replicates whose interval covers the true value.
    pub cp: f64,
    /// Set when the row cannot carry a dispersion (one replicate).
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSummary {
    pub config_id: String,
    pub sample_size: usize,
    pub replicates: usize,
    pub rows: Vec<ParameterRow>,
    /// Replicates with `α̂ > 1`.
    pub alpha_above_one: usize,
}

fn replicate(cfg: &MCConfig, r: u64) -> Result<EstimationReport> {
    let stream = RngStream::new(cfg.base_seed, r);
    let sample = simulate_sojourns(&cfg.params_true, cfg.initial_state, cfg.sample_size, stream)?;
    estimate_with(&sample, cfg.confidence_level, cfg.rate_variance)
}

fn summarize(name: &str, truth: f64, reports: &[EstimationReport], pick: impl Fn(&EstimationReport) -> (f64, (f64, f64))) -> ParameterRow {
    let m = reports.len() as f64;
    let values: Vec<(f64, (f64, f64))> = reports.iter().map(pick).collect();
    let mean = values.iter().map(|v| v.0).sum::<f64>() / m;
    let sd = if reports.len() > 1 {
        (values.iter().map(|v| (v.0 - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt()
    } else {
        f64::NAN
    };
    let covered = values.iter().filter(|(_, (lo, hi))| *lo <= truth && truth <= *hi).count();
    ParameterRow {
        name: name.to_string(),
        true_value: truth,
        pct_bias: 100.0 * (mean - truth).abs() / truth,
        cv: 100.0 * sd / mean,
        cp: covered as f64 / m,
        degenerate: reports.len() < 2,
    }
}

/// Simulates `replicates` independent samples, estimates each and aggregates.
///
/// Replicate `r` draws from stream `r` of `base_seed`; results are reduced in
/// replicate order, so the summary does not depend on the thread count.
pub fn run_mc_study(config_id: &str, cfg: &MCConfig) -> Result<MonteCarloSummary> {
    cfg.validate()?;
    let reports = (0..cfg.replicates as u64)
        .into_par_iter()
        .map(|r| replicate(cfg, r))
        .collect::<Result<Vec<_>>>()?;
    let p = &cfg.params_true;
    let rows = vec![
        summarize("alpha", p.alpha, &reports, |r| (r.alpha_hat, r.ci_alpha)),
        summarize("lambda", p.lambda, &reports, |r| (r.lambda_hat, r.ci_lambda)),
        summarize("mu", p.mu, &reports, |r| (r.mu_hat, r.ci_mu)),
        summarize("xi", p.xi, &reports, |r| (r.xi_hat, r.ci_xi)),
    ];
    Ok(MonteCarloSummary {
        config_id: config_id.to_string(),
        sample_size: cfg.sample_size,
        replicates: cfg.replicates,
        rows,
        alpha_above_one: reports.iter().filter(|r| r.flags.alpha_above_one).count(),
    })
}

/// A parameter point studied at several sample sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyBlock {
    pub id: String,
    pub params_true: QueueParams,
    pub sample_sizes: Vec<usize>,
    /// False for blocks whose published parameterization is uncertain.
    #[serde(default = "normative_default")]
    pub normative: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn normative_default() -> bool {
    true
}

/// Study file layout: shared settings and a list of blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub base_seed: u64,
    pub replicates: usize,
    pub confidence_level: f64,
    #[serde(default = "default_initial_state")]
    pub initial_state: usize,
    #[serde(default)]
    pub rate_variance: RateVarianceForm,
    pub blocks: Vec<StudyBlock>,
}

impl StudyConfig {
    /// Cells in file order: blocks, then sample sizes within a block.
    pub fn cells(&self) -> Vec<(String, MCConfig)> {
        self.blocks
            .iter()
            .flat_map(|b| {
                b.sample_sizes.iter().map(move |&n| {
                    (
                        b.id.clone(),
                        MCConfig {
                            params_true: b.params_true,
                            sample_size: n,
                            replicates: self.replicates,
                            confidence_level: self.confidence_level,
                            base_seed: self.base_seed,
                            initial_state: self.initial_state,
                            rate_variance: self.rate_variance,
                        },
                    )
                })
            })
            .collect()
    }
}

pub fn run_study(study: &StudyConfig) -> Result<Vec<MonteCarloSummary>> {
    if study.blocks.is_empty() {
        return Err(Error::Format("study has no blocks".into()));
    }
    study.cells().iter().map(|(id, cfg)| run_mc_study(id, cfg)).collect()
}

#[derive(Serialize)]
struct SummaryRecord<'a> {
    config_id: &'a str,
    param: &'a str,
    #[serde(rename = "true")]
    true_value: f64,
    pct_bias: f64,
    cv: f64,
    cp: f64,
    n: usize,
    replicates: usize,
}

/// Long-format CSV: one row per parameter per cell.
pub fn write_summaries_csv<W: std::io::Write>(summaries: &[MonteCarloSummary], w: W) -> Result<()> {
    let records: Vec<SummaryRecord> = summaries
        .iter()
        .flat_map(|s| {
            s.rows.iter().map(move |r| SummaryRecord {
                config_id: &s.config_id,
                param: &r.name,
                true_value: r.true_value,
                pct_bias: r.pct_bias,
                cv: r.cv,
                cp: r.cp,
                n: s.sample_size,
                replicates: s.replicates,
            })
        })
        .collect();
    super::write_rows_csv(&records, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(replicates: usize) -> MCConfig {
        MCConfig {
            params_true: QueueParams::new(4.0, 2.0, 1.0, 0.9).unwrap(),
            sample_size: 200,
            replicates,
            confidence_level: 0.95,
            base_seed: 1,
            initial_state: 1,
            rate_variance: RateVarianceForm::Asymptotic,
        }
    }

    #[test]
    fn single_replicate_is_flagged() {
        let s = run_mc_study("one", &cfg(1)).unwrap();
        assert_eq!(s.rows.len(), 4);
        for r in &s.rows {
            assert!(r.degenerate);
            assert!(r.cv.is_nan());
            assert!(r.cp == 0.0 || r.cp == 1.0);
        }
    }

    #[test]
    fn thread_count_does_not_change_the_summary() {
        let c = cfg(40);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let a = one.install(|| run_mc_study("x", &c)).unwrap();
        let b = three.install(|| run_mc_study("x", &c)).unwrap();
        assert_eq!(a, b);
        for r in &a.rows {
            assert!((0.0..=1.0).contains(&r.cp));
            assert!(!r.degenerate);
        }
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut c = cfg(0);
        assert!(run_mc_study("x", &c).is_err());
        c.replicates = 2;
        c.confidence_level = 1.0;
        assert!(run_mc_study("x", &c).is_err());
    }

    #[test]
    fn csv_columns() {
        let s = run_mc_study("b1", &cfg(3)).unwrap();
        let mut buf = Vec::new();
        write_summaries_csv(&[s], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "config_id,param,true,pct_bias,cv,cp,n,replicates");
        assert_eq!(lines.count(), 4);
    }
}
