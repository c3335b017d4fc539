//! CSV and JSON emission of experiment records.
//!
//! CSV header: `schema,method,eps,trials,success_rate,mean_queries,exact_value,seed`.
//! JSON is an array of objects with the same fields. Floats keep full
//! precision in both.

use std::path::Path;

use super::ExperimentRecord;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordFormat {
    Csv,
    Json,
}

pub const CSV_HEADER: &str = "schema,method,eps,trials,success_rate,mean_queries,exact_value,seed";

pub fn records_to_csv(records: &[ExperimentRecord]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    let body = w.into_inner().map_err(|e| crate::Error::Io(e.into_error()))?;
    Ok(format!("{CSV_HEADER}\n{}", String::from_utf8_lossy(&body)))
}

pub fn records_to_json(records: &[ExperimentRecord]) -> Result<String> {
    Ok(serde_json::to_string_pretty(records)?)
}

pub fn read_records_json(text: &str) -> Result<Vec<ExperimentRecord>> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_records_csv(text: &str) -> Result<Vec<ExperimentRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

pub fn write_records(path: impl AsRef<Path>, records: &[ExperimentRecord], format: RecordFormat) -> Result<()> {
    let text = match format {
        RecordFormat::Csv => records_to_csv(records)?,
        RecordFormat::Json => records_to_json(records)?,
    };
    std::fs::write(path, text)?;
    Ok(())
}
