//! Exact event-driven simulation of the fractional queue.
//!
//! From a state `k > 0` the chain waits a Mittag-Leffler time with rate
//! `θ = λ + μ + ξ` and then jumps up (probability `λ/θ`), down (`μ/θ`) or to
//! the empty state (`ξ/θ`). From the empty state it waits a Mittag-Leffler
//! time with rate `λ` and moves to state 1.

mod io;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::{ml_waiting_time, ml_waiting_time_ln, RngStream};
use crate::transient::QueueParams;

pub use io::{read_path_csv, read_path_json, write_path_csv, write_path_json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Arrival,
    Service,
    Catastrophe,
    /// Forced `0 → 1` jump at the end of an empty period.
    EmptyRestart,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Arrival => "arrival",
            EventKind::Service => "service",
            EventKind::Catastrophe => "catastrophe",
            EventKind::EmptyRestart => "empty_restart",
        }
    }

    /// State after this event fires in `from`, or `None` if it cannot fire there.
    pub fn apply(self, from: usize) -> Option<usize> {
        match (self, from) {
            (EventKind::EmptyRestart, 0) => Some(1),
            (EventKind::EmptyRestart, _) | (_, 0) => None,
            (EventKind::Arrival, k) => Some(k + 1),
            (EventKind::Service, k) => Some(k - 1),
            (EventKind::Catastrophe, _) => Some(0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub time: f64,
    pub kind: EventKind,
    /// State right after the jump.
    pub state: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopRule {
    /// Stop after this many events of any kind.
    MaxEvents(usize),
    /// Stop at this time; the sojourn in progress is censored and emits no event.
    MaxTime(f64),
}

/// A simulated (or imported) trajectory.
///
/// `params_used` and `seed_info` are `None` for paths read back from CSV,
/// which records events only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePath {
    pub initial_state: usize,
    pub events: Vec<Event>,
    /// Observation horizon: the stop time, or the last event time under `MaxEvents`.
    pub end_time: f64,
    pub params_used: Option<QueueParams>,
    pub seed_info: Option<RngStream>,
}

impl SamplePath {
    /// Checks time ordering and that every transition is consistent with its kind.
    pub fn validate(&self) -> Result<()> {
        let mut state = self.initial_state;
        let mut last = 0.0;
        for (k, e) in self.events.iter().enumerate() {
            if !(e.time > last) || !e.time.is_finite() {
                return Err(Error::Format(format!("event {k}: time {} not after {last}", e.time)));
            }
            match e.kind.apply(state) {
                Some(s) if s == e.state => {}
                _ => {
                    return Err(Error::Format(format!(
                        "event {k}: {} from state {state} cannot lead to state {}",
                        e.kind.as_str(),
                        e.state
                    )))
                }
            }
            state = e.state;
            last = e.time;
        }
        if !(self.end_time >= last) || !self.end_time.is_finite() {
            return Err(Error::Format(format!("end time {} before last event {last}", self.end_time)));
        }
        Ok(())
    }

    pub fn final_state(&self) -> usize {
        self.events.last().map_or(self.initial_state, |e| e.state)
    }
}

/// Sojourns out of nonempty states and the kind of event that ended each.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SojournSample {
    pub waiting_times: Vec<f64>,
    pub n_a: usize,
    pub n_s: usize,
    pub n_c: usize,
}

impl SojournSample {
    pub fn n(&self) -> usize {
        self.n_a + self.n_s + self.n_c
    }

    fn record(&mut self, wait: f64, kind: EventKind) {
        self.waiting_times.push(wait);
        match kind {
            EventKind::Arrival => self.n_a += 1,
            EventKind::Service => self.n_s += 1,
            EventKind::Catastrophe => self.n_c += 1,
            EventKind::EmptyRestart => unreachable!("empty-state sojourns are not recorded"),
        }
    }
}

/// One step of the chain: waiting time and the event that ends it.
struct Stepper {
    p1: f64,
    p12: f64,
    theta: f64,
    lambda: f64,
}

impl Stepper {
    fn new(p: &QueueParams) -> Self {
        let theta = p.theta();
        Self {
            p1: p.lambda / theta,
            p12: (p.lambda + p.mu) / theta,
            theta,
            lambda: p.lambda,
        }
    }

    fn kind<R: Rng + ?Sized>(&self, state: usize, rng: &mut R) -> EventKind {
        if state == 0 {
            return EventKind::EmptyRestart;
        }
        let u: f64 = rng.random();
        if u < self.p1 {
            EventKind::Arrival
        } else if u < self.p12 {
            EventKind::Service
        } else {
            EventKind::Catastrophe
        }
    }

    fn rate(&self, state: usize) -> f64 {
        if state == 0 {
            self.lambda
        } else {
            self.theta
        }
    }
}

/// Simulates one trajectory from `i0` until `stop`.
pub fn simulate_path(params: &QueueParams, i0: usize, stop: StopRule, rng_stream: RngStream) -> Result<SamplePath> {
    params.validate()?;
    match stop {
        StopRule::MaxEvents(0) => return Err(Error::invalid("max_events", 0.0, "must be positive")),
        StopRule::MaxTime(t) if !(t > 0.0) || !t.is_finite() => {
            return Err(Error::invalid("max_time", t, "must be positive and finite"))
        }
        _ => {}
    }
    let step = Stepper::new(params);
    let mut rng = rng_stream.generator();
    let mut events = Vec::new();
    let mut state = i0;
    let mut time = 0.0_f64;
    let end_time = loop {
        if let StopRule::MaxEvents(m) = stop {
            if events.len() >= m {
                break time;
            }
        }
        let wait = ml_waiting_time(step.rate(state), params.alpha, &mut rng)?;
        let kind = step.kind(state, &mut rng);
        let mut next = time + wait;
        if let StopRule::MaxTime(t_max) = stop {
            if next > t_max {
                break t_max;
            }
        }
        if !next.is_finite() {
            return Err(Error::non_convergence(
                "path simulation",
                format!("event time overflowed after {} events", events.len()),
            ));
        }
        if next <= time {
            // waiting time below the resolution of the clock
            next = time.next_up();
        }
        time = next;
        state = kind.apply(state).expect("kind drawn for the current state");
        events.push(Event { time, kind, state });
    };
    Ok(SamplePath {
        initial_state: i0,
        events,
        end_time,
        params_used: Some(*params),
        seed_info: Some(rng_stream),
    })
}

/// Gaps between consecutive events that start in a nonempty state.
pub fn extract_sojourns(path: &SamplePath) -> Result<SojournSample> {
    let mut sample = SojournSample::default();
    let mut state = path.initial_state;
    let mut last = 0.0;
    for e in &path.events {
        if state > 0 {
            sample.record(e.time - last, e.kind);
        }
        state = e.state;
        last = e.time;
    }
    if sample.n() == 0 {
        return Err(Error::EmptyPath);
    }
    Ok(sample)
}

/// Simulates until `n` sojourns out of nonempty states have been observed,
/// recording the waiting times directly instead of event times.
///
/// Consumes the random stream exactly as [`simulate_path`] does, so the
/// result agrees with `extract_sojourns` on a long enough path (up to the
/// rounding of time differences). Skipping the clock keeps heavy-tailed
/// waiting times at small `α` from overflowing it.
pub fn simulate_sojourns(params: &QueueParams, i0: usize, n: usize, rng_stream: RngStream) -> Result<SojournSample> {
    params.validate()?;
    if n == 0 {
        return Err(Error::invalid("n", 0.0, "sample size must be positive"));
    }
    let step = Stepper::new(params);
    let mut rng = rng_stream.generator();
    let mut sample = SojournSample {
        waiting_times: Vec::with_capacity(n),
        ..Default::default()
    };
    let mut state = i0;
    while sample.n() < n {
        let ln_wait = ml_waiting_time_ln(step.rate(state), params.alpha, &mut rng)?;
        let kind = step.kind(state, &mut rng);
        if state > 0 {
            sample.record(ln_wait.exp().clamp(f64::MIN_POSITIVE, f64::MAX), kind);
        }
        state = kind.apply(state).expect("kind drawn for the current state");
    }
    Ok(sample)
}

/// Right-continuous state `X(t)` for `t` in `[0, end_time]`.
pub fn occupancy_at(path: &SamplePath, t: f64) -> Result<usize> {
    if !(t >= 0.0 && t <= path.end_time) {
        return Err(Error::OutOfRange { t, end: path.end_time });
    }
    let k = path.events.partition_point(|e| e.time <= t);
    Ok(if k == 0 {
        path.initial_state
    } else {
        path.events[k - 1].state
    })
}
