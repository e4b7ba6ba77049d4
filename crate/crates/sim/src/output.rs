//! CSV and JSON persistence of sweep results.

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::config::OutputFormat;
use crate::sweep::{SweepRecord, SweepResult};

/// CSV header, also the field order of [`SweepRecord`].
pub const CSV_HEADER: &str = "detector,snr_db,trials,spatial_errors,scser,bit_errors,total_bits,ber,seed,wall_seconds";

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("no records to write")]
    Empty,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

pub fn to_csv(records: &[SweepRecord]) -> Result<String, OutputError> {
    if records.is_empty() {
        return Err(OutputError::Empty);
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| OutputError::Io { path: "<buffer>".into(), source: e.into_error() })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn parse_csv(text: &str) -> Result<Vec<SweepRecord>, OutputError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

pub fn to_json(result: &SweepResult) -> Result<String, OutputError> {
    if result.records.is_empty() {
        return Err(OutputError::Empty);
    }
    let mut s = serde_json::to_string_pretty(result)?;
    s.push('\n');
    Ok(s)
}

pub fn parse_json(text: &str) -> Result<SweepResult, OutputError> {
    Ok(serde_json::from_str(text)?)
}

pub fn render(result: &SweepResult, format: OutputFormat) -> Result<String, OutputError> {
    match format {
        OutputFormat::Csv => to_csv(&result.records),
        OutputFormat::Json => to_json(result),
    }
}

/// Writes `text` to `path`, creating parent directories.
pub fn write_text(path: &Path, text: &str) -> Result<(), OutputError> {
    let io_err = |source| OutputError::Io { path: path.display().to_string(), source };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err)?;
    }
    fs::write(path, text).map_err(io_err)
}

pub fn emit_results(result: &SweepResult, format: OutputFormat, path: &Path) -> Result<(), OutputError> {
    write_text(path, &render(result, format)?)
}
