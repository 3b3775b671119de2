//! Event-log export and import.
//!
//! Both formats carry the same records `(time, kind, state)`: a `start` row
//! with the initial state at time 0, one row per event with the post-jump
//! state, and an `end` row holding the observation horizon and final state.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{Event, EventKind, SamplePath};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RecordKind {
    Start,
    Arrival,
    Service,
    Catastrophe,
    EmptyRestart,
    End,
}

impl From<EventKind> for RecordKind {
    fn from(k: EventKind) -> Self {
        match k {
            EventKind::Arrival => RecordKind::Arrival,
            EventKind::Service => RecordKind::Service,
            EventKind::Catastrophe => RecordKind::Catastrophe,
            EventKind::EmptyRestart => RecordKind::EmptyRestart,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct Record {
    time: f64,
    kind: RecordKind,
    state: usize,
}

fn records(path: &SamplePath) -> Vec<Record> {
    let mut out = Vec::with_capacity(path.events.len() + 2);
    out.push(Record {
        time: 0.0,
        kind: RecordKind::Start,
        state: path.initial_state,
    });
    out.extend(path.events.iter().map(|e| Record {
        time: e.time,
        kind: e.kind.into(),
        state: e.state,
    }));
    out.push(Record {
        time: path.end_time,
        kind: RecordKind::End,
        state: path.final_state(),
    });
    out
}

fn from_records(recs: Vec<Record>) -> Result<SamplePath> {
    let (first, rest) = recs
        .split_first()
        .ok_or_else(|| Error::Format("event log is empty".into()))?;
    if first.kind != RecordKind::Start || first.time != 0.0 {
        return Err(Error::Format("first record must be `start` at time 0".into()));
    }
    let mut events = Vec::with_capacity(rest.len());
    let mut end = None;
    for (k, r) in rest.iter().enumerate() {
        if end.is_some() {
            return Err(Error::Format(format!("record {} follows the `end` record", k + 2)));
        }
        let kind = match r.kind {
            RecordKind::Start => return Err(Error::Format(format!("record {}: repeated `start`", k + 2))),
            RecordKind::End => {
                end = Some(*r);
                continue;
            }
            RecordKind::Arrival => EventKind::Arrival,
            RecordKind::Service => EventKind::Service,
            RecordKind::Catastrophe => EventKind::Catastrophe,
            RecordKind::EmptyRestart => EventKind::EmptyRestart,
        };
        events.push(Event {
            time: r.time,
            kind,
            state: r.state,
        });
    }
    let end_time = match end {
        Some(e) => e.time,
        // a log cut after its last event is still usable for estimation
        None => events.last().map_or(0.0, |e| e.time),
    };
    let path = SamplePath {
        initial_state: first.state,
        events,
        end_time,
        params_used: None,
        seed_info: None,
    };
    path.validate()?;
    if let Some(e) = end {
        if e.state != path.final_state() {
            return Err(Error::Format(format!(
                "`end` record state {} differs from final state {}",
                e.state,
                path.final_state()
            )));
        }
    }
    Ok(path)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

/// Writes the path as CSV with header `time,kind,state`.
pub fn write_path_csv<W: Write>(path: &SamplePath, w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in records(path) {
        wr.serialize(r).map_err(csv_err)?;
    }
    wr.flush().map_err(|e| Error::Format(e.to_string()))
}

pub fn read_path_csv<R: Read>(r: R) -> Result<SamplePath> {
    let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let headers = rd.headers().map_err(csv_err)?.clone();
    if headers.iter().collect::<Vec<_>>() != ["time", "kind", "state"] {
        return Err(Error::Format(format!("expected header `time,kind,state`, got `{}`", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let recs = rd
        .deserialize()
        .collect::<std::result::Result<Vec<Record>, _>>()
        .map_err(csv_err)?;
    from_records(recs)
}

/// Writes the path as a JSON array of the same records as the CSV form.
pub fn write_path_json<W: Write>(path: &SamplePath, w: W) -> Result<()> {
    serde_json::to_writer_pretty(w, &records(path)).map_err(|e| Error::Format(e.to_string()))
}

pub fn read_path_json<R: Read>(r: R) -> Result<SamplePath> {
    let recs: Vec<Record> = serde_json::from_reader(r).map_err(|e| Error::Format(e.to_string()))?;
    from_records(recs)
}
