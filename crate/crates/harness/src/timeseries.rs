use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{HarnessError, Result};

pub const HEADER: [&str; 5] = ["step", "t", "energy", "vortex_count", "max_position_delta"];

/// One monitoring sample. `max_position_delta` is empty when there is no
/// previous configuration with the same count to compare against.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub step: u64,
    pub t: f64,
    pub energy: f64,
    pub vortex_count: usize,
    pub max_position_delta: Option<f64>,
}

fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

impl Record {
    fn fields(&self) -> [String; 5] {
        [
            self.step.to_string(),
            sci(self.t),
            sci(self.energy),
            self.vortex_count.to_string(),
            self.max_position_delta.map(sci).unwrap_or_default(),
        ]
    }
}

/// Streams records to a CSV file as they arrive.
pub struct TimeSeriesWriter<W: Write> {
    csv: csv::Writer<W>,
    path: PathBuf,
}

impl TimeSeriesWriter<File> {
    pub fn create(path: &Path) -> Result<Self> {
        let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
        Self::new(file, path)
    }
}

impl<W: Write> TimeSeriesWriter<W> {
    pub fn new(inner: W, path: &Path) -> Result<Self> {
        let mut w = TimeSeriesWriter {
            csv: csv::Writer::from_writer(inner),
            path: path.to_path_buf(),
        };
        w.csv.write_record(HEADER).map_err(|e| w.err(e))?;
        Ok(w)
    }

    fn err(&self, e: csv::Error) -> HarnessError {
        HarnessError::io(&self.path, e.into())
    }

    pub fn push(&mut self, r: &Record) -> Result<()> {
        self.csv.write_record(r.fields()).map_err(|e| self.err(e))
    }

    pub fn finish(mut self) -> Result<W> {
        self.csv.flush().map_err(|e| HarnessError::io(&self.path, e))?;
        self.csv
            .into_inner()
            .map_err(|e| HarnessError::io(&self.path, std::io::Error::other(e.to_string())))
    }
}

pub fn emit_timeseries(records: &[Record], path: &Path) -> Result<()> {
    let mut w = TimeSeriesWriter::create(path)?;
    for r in records {
        w.push(r)?;
    }
    w.finish().map(|_| ())
}
