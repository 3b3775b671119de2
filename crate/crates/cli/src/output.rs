use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

use crate::Format;

/// Destination and encoding chosen by the global flags.
pub struct Output<'a> {
    path: Option<&'a Path>,
    format: Format,
}

impl<'a> Output<'a> {
    pub fn new(path: Option<&'a Path>, format: Format) -> Self {
        Self { path, format }
    }

    pub fn with_writer<F>(&self, f: F) -> anyhow::Result<()>
    where
        F: FnOnce(&mut dyn Write) -> fracqueue::Result<()>,
    {
        match self.path {
            Some(p) => {
                let file = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
                let mut w = BufWriter::new(file);
                f(&mut w)?;
                w.flush().with_context(|| format!("cannot write {}", p.display()))?;
            }
            None => {
                let stdout = io::stdout();
                let mut w = BufWriter::new(stdout.lock());
                f(&mut w)?;
                w.flush().context("cannot write to standard output")?;
            }
        }
        Ok(())
    }

    /// Long-format rows as CSV or a JSON array.
    pub fn rows<T: Serialize>(&self, rows: &[T]) -> anyhow::Result<()> {
        let format = self.format;
        self.with_writer(|w| match format {
            Format::Csv => fracqueue::experiments::write_rows_csv(rows, w),
            Format::Json => json(&rows, w),
        })
    }
}

pub fn json<T: Serialize + ?Sized>(value: &T, mut w: &mut dyn Write) -> fracqueue::Result<()> {
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| fracqueue::Error::Format(e.to_string()))?;
    writeln!(w).map_err(|e| fracqueue::Error::Format(e.to_string()))
}
