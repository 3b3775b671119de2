//! `fracqueue` command-line interface.

mod output;

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fracqueue::estimation::{estimate_with, RateVarianceForm};
use fracqueue::experiments::{
    emit_moment_curves, emit_path_traces, emit_transient_curves, run_study, write_summaries_csv,
    StudyConfig,
};
use fracqueue::simulator::{extract_sojourns, read_path_csv, read_path_json, simulate_path, write_path_csv, write_path_json};
use fracqueue::{QuadratureControl, QueueParams, RngStream, SeriesControl, StopRule};

use output::Output;

const AFTER_HELP: &str = "\
Output schemas (long format, one observation per row; JSON mirrors the same records):
  probability   t,alpha,n,probability
  moments       t,alpha,mean,variance
  simulate      time,kind,state      kinds: start, arrival, service, catastrophe, empty_restart, end
  traces        alpha,time,kind,state
  estimate      one row: alpha_hat,theta_hat,lambda_hat,mu_hat,xi_hat,p1_hat,p2_hat,p3_hat,sigma2_theta_hat,
                ci_*_lower,ci_*_upper,level,n,rate_variance,flags
  mc-study      config_id,param,true,pct_bias,cv,cp,n,replicates
Exit codes: 0 success, 2 usage or domain error, 3 numerical non-convergence.
See FORMATS.md for details.";

#[derive(Parser, Debug)]
#[command(name = "fracqueue", version, about = "Fractional M/M/1 queue with catastrophes", after_help = AFTER_HELP)]
struct Cli {
    /// Seed for simulation commands (overrides the study file's base_seed in mc-study).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Absolute tolerance of the transient quadratures.
    #[arg(long, global = true, value_parser = positive)]
    tol: Option<f64>,
    /// Worker threads; results do not depend on this value.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone, Copy)]
struct Rates {
    #[arg(long, value_parser = positive)]
    lambda: f64,
    #[arg(long, value_parser = positive)]
    mu: f64,
    #[arg(long, value_parser = nonnegative)]
    xi: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// State probabilities P(X_t = n | X_0 = i).
    Probability {
        #[command(flatten)]
        rates: Rates,
        /// One or more orders, comma separated.
        #[arg(long, value_parser = alpha, value_delimiter = ',', required = true)]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        from_state: usize,
        /// One or more target states, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        state: Vec<usize>,
        #[command(flatten)]
        times: Times,
    },
    /// Mean and variance of the queue length over a time grid.
    Moments {
        #[command(flatten)]
        rates: Rates,
        #[arg(long, value_parser = alpha, value_delimiter = ',', required = true)]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        from_state: usize,
        #[command(flatten)]
        times: Times,
    },
    /// Simulate one trajectory and write its event log.
    Simulate {
        #[command(flatten)]
        rates: Rates,
        #[arg(long, value_parser = alpha)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        from_state: usize,
        #[command(flatten)]
        stop: Stop,
    },
    /// Step-function trajectories for several orders (order k uses stream k).
    Traces {
        #[command(flatten)]
        rates: Rates,
        #[arg(long, value_parser = alpha, value_delimiter = ',', required = true)]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        from_state: usize,
        #[command(flatten)]
        stop: Stop,
    },
    /// Estimate (alpha, theta, lambda, mu, xi) from an event log.
    Estimate {
        /// Event log in the `simulate` schema (.csv, or .json for the JSON form).
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.95, value_parser = level)]
        level: f64,
        #[arg(long, value_enum, default_value_t = RateForm::Asymptotic)]
        rate_variance: RateForm,
    },
    /// Monte Carlo bias/dispersion/coverage study from a JSON study file.
    McStudy {
        #[arg(long)]
        config: PathBuf,
        /// Run only these block ids (comma separated).
        #[arg(long, value_delimiter = ',')]
        block: Vec<String>,
        /// Override the replicate count of the study file.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        replicates: Option<u32>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Times {
    /// Single time point.
    #[arg(long, value_parser = nonnegative)]
    time: Option<f64>,
    /// Uniform grid `t0:t1:steps` with steps + 1 points.
    #[arg(long, value_parser = grid)]
    grid: Option<Grid>,
}

#[derive(Debug, Clone)]
struct Grid(Vec<f64>);

impl Times {
    fn points(&self) -> Vec<f64> {
        match (&self.time, &self.grid) {
            (Some(t), _) => vec![*t],
            (None, Some(g)) => g.0.clone(),
            (None, None) => unreachable!("clap enforces one of --time/--grid"),
        }
    }
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Stop {
    /// Stop after N events.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    events: Option<u64>,
    /// Stop at time T (the last sojourn is censored).
    #[arg(long, value_parser = positive)]
    until: Option<f64>,
}

impl Stop {
    fn rule(&self) -> StopRule {
        match (self.events, self.until) {
            (Some(n), _) => StopRule::MaxEvents(n as usize),
            (None, Some(t)) => StopRule::MaxTime(t),
            (None, None) => unreachable!("clap enforces one of --events/--until"),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum RateForm {
    Asymptotic,
    LinearTheta,
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{v} must be positive"))
    }
}

fn nonnegative(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("{v} must be nonnegative"))
    }
}

fn alpha(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(format!("alpha = {v} must lie in (0, 1]"))
    }
}

fn level(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("level = {v} must lie in (0, 1)"))
    }
}

fn grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [t0, t1, steps] = parts[..] else {
        return Err(format!("`{s}` is not of the form t0:t1:steps"));
    };
    let (t0, t1) = (nonnegative(t0)?, nonnegative(t1)?);
    let steps: usize = steps.trim().parse().map_err(|_| format!("`{steps}` is not a step count"))?;
    if steps == 0 || t1 <= t0 {
        return Err(format!("grid `{s}` needs t1 > t0 and at least one step"));
    }
    Ok(Grid((0..=steps).map(|k| t0 + (t1 - t0) * k as f64 / steps as f64).collect()))
}

fn params(r: &Rates, alpha: f64) -> fracqueue::Result<QueueParams> {
    QueueParams::new(r.lambda, r.mu, r.xi, alpha)
}

fn quadrature(tol: Option<f64>) -> fracqueue::Result<QuadratureControl> {
    let mut q = QuadratureControl::default();
    if let Some(t) = tol {
        q.abs_tol = t;
    }
    q.validate()?;
    Ok(q)
}

fn read_study(path: &Path) -> anyhow::Result<StudyConfig> {
    let file = File::open(path).with_context(|| format!("cannot open study file {}", path.display()))?;
    let study: StudyConfig = serde_json::from_reader(BufReader::new(file))
        .map_err(|e| fracqueue::Error::Format(format!("{}: {e}", path.display())))?;
    for b in &study.blocks {
        b.params_true.validate()?;
    }
    Ok(study)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let out = Output::new(cli.out.as_deref(), cli.format);
    let sctl = SeriesControl::default();
    let seed = cli.seed.unwrap_or(0);
    match &cli.command {
        Command::Probability {
            rates,
            alpha,
            from_state,
            state,
            times,
        } => {
            let base = params(rates, alpha[0])?;
            let rows = emit_transient_curves(&base, alpha, *from_state, state, &times.points(), quadrature(cli.tol)?, sctl)?;
            out.rows(&rows)
        }
        Command::Moments {
            rates,
            alpha,
            from_state,
            times,
        } => {
            let base = params(rates, alpha[0])?;
            let rows = emit_moment_curves(&base, alpha, *from_state, &times.points(), quadrature(cli.tol)?, sctl)?;
            out.rows(&rows)
        }
        Command::Simulate {
            rates,
            alpha,
            from_state,
            stop,
        } => {
            let path = simulate_path(&params(rates, *alpha)?, *from_state, stop.rule(), RngStream::new(seed, 0))?;
            out.with_writer(|w| match cli.format {
                Format::Csv => write_path_csv(&path, w),
                Format::Json => write_path_json(&path, w),
            })
        }
        Command::Traces {
            rates,
            alpha,
            from_state,
            stop,
        } => {
            let rows = emit_path_traces(&params(rates, alpha[0])?, *from_state, alpha, stop.rule(), seed)?;
            out.rows(&rows)
        }
        Command::Estimate {
            input,
            level,
            rate_variance,
        } => {
            let file = File::open(input).with_context(|| format!("cannot open event log {}", input.display()))?;
            let reader = BufReader::new(file);
            let path = if input.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
                read_path_json(reader)?
            } else {
                read_path_csv(reader)?
            };
            let form = match rate_variance {
                RateForm::Asymptotic => RateVarianceForm::Asymptotic,
                RateForm::LinearTheta => RateVarianceForm::LinearTheta,
            };
            let report = estimate_with(&extract_sojourns(&path)?, *level, form)?;
            out.with_writer(|w| match cli.format {
                Format::Csv => report.write_csv(w),
                Format::Json => output::json(&report, w),
            })
        }
        Command::McStudy {
            config,
            block,
            replicates,
        } => {
            let mut study = read_study(config)?;
            if let Some(s) = cli.seed {
                study.base_seed = s;
            }
            if let Some(r) = replicates {
                study.replicates = *r as usize;
            }
            if !block.is_empty() {
                if let Some(missing) = block.iter().find(|id| !study.blocks.iter().any(|b| &b.id == *id)) {
                    bail!(fracqueue::Error::Format(format!("no block `{missing}` in {}", config.display())));
                }
                study.blocks.retain(|b| block.contains(&b.id));
            }
            let summaries = run_study(&study)?;
            out.with_writer(|w| match cli.format {
                Format::Csv => write_summaries_csv(&summaries, w),
                Format::Json => output::json(&summaries, w),
            })
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<fracqueue::Error>() {
        Some(e) if e.is_numerical() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j as usize)
            .build()
            .context("cannot start worker pool")
            .and_then(|pool| pool.install(|| run(cli))),
        None => run(cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
