use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::spec::{ExperimentSpec, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::exact::ExactProb;
use crate::experiments::{EstimateResult, SlopeFit};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "data", rename_all = "snake_case")]
pub enum OutputValue {
    Estimate(EstimateResult),
    Exact(ExactProb),
    /// An exact integer too large for `u64`, as decimal digits.
    Count(String),
    Integer(u64),
    Number(f64),
    Flag(bool),
    Fit(SlopeFit),
    /// Text dump of a sampled object, one item per line.
    Dump(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub label: String,
    pub seed: u64,
    pub value: OutputValue,
}

impl Output {
    pub fn new(label: impl Into<String>, seed: u64, value: OutputValue) -> Self {
        Output { label: label.into(), seed, value }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Versions {
    pub artifact: String,
    pub schema: u32,
}

impl Default for Versions {
    fn default() -> Self {
        Versions { artifact: env!("CARGO_PKG_VERSION").to_string(), schema: SCHEMA_VERSION }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timing {
    pub wall_seconds: f64,
}

/// Everything a run produced, together with the spec that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultRecord {
    pub spec: ExperimentSpec,
    pub outputs: Vec<Output>,
    pub versions: Versions,
    pub timing: Timing,
}

impl ResultRecord {
    pub fn output(&self, label: &str) -> Option<&OutputValue> {
        self.outputs.iter().find(|o| o.label == label).map(|o| &o.value)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl Format {
    /// Guess from a file extension, defaulting to JSON.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    label: &'a str,
    value: String,
    stderr: Option<f64>,
    replicates: Option<u64>,
    censored: Option<f64>,
    seed: u64,
    exact: Option<String>,
}

fn csv_row(o: &Output) -> CsvRow<'_> {
    let mut row = CsvRow { label: &o.label, value: String::new(), stderr: None, replicates: None, censored: None, seed: o.seed, exact: None };
    match &o.value {
        OutputValue::Estimate(e) => {
            row.value = e.mean.to_string();
            row.stderr = Some(e.stderr);
            row.replicates = Some(e.replicates);
            row.censored = Some(e.censored);
        }
        OutputValue::Exact(p) => {
            row.value = p.decimal();
            row.exact = Some(p.fraction());
        }
        OutputValue::Count(c) => {
            row.value = c.clone();
            row.exact = Some(c.clone());
        }
        OutputValue::Integer(i) => {
            row.value = i.to_string();
            row.exact = Some(i.to_string());
        }
        OutputValue::Number(x) => row.value = x.to_string(),
        OutputValue::Flag(b) => row.value = b.to_string(),
        OutputValue::Fit(f) => {
            row.value = f.slope.to_string();
            row.stderr = Some(f.slope_stderr);
            row.replicates = Some(f.points.len() as u64);
        }
        OutputValue::Dump(s) => row.value = s.clone(),
    }
    row
}

/// Writes a record as pretty JSON or as one CSV row per output.
pub fn write_record<W: Write>(record: &ResultRecord, format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, record)?;
            writeln!(out).map_err(|e| Error::Io { path: "<output>".into(), source: e })?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for o in &record.outputs {
                w.serialize(csv_row(o))?;
            }
            w.flush().map_err(|e| Error::Io { path: "<output>".into(), source: e })?;
        }
    }
    Ok(())
}

pub fn write_results(record: &ResultRecord, path: &Path, format: Format) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::Io { path: path.to_path_buf(), source: e })?;
    write_record(record, format, BufWriter::new(file))
}

/// Reads back a JSON record.
pub fn read_record(text: &str) -> Result<ResultRecord> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| Error::Schema { path: e.path().to_string(), message: e.into_inner().to_string() })
}
