//! File formats: line-delimited JSON datasets, the JSON model file, CSV
//! metric tables, and JSON verification reports.
//!
//! Floats go through serde_json's shortest-roundtrip formatting, so
//! write-then-read is lossless and re-serializing a parsed file reproduces it
//! byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use milred::core::{Bag, Instance, LCLExample, LinearWeights, MCLExample, MILExample, TRLExample};
use milred::oracle::VerificationReport;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// One labeled bag: `{"bag": [[...], ...], "label": -1|1}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct MilRecord {
    pub bag: Vec<Vec<f64>>,
    pub label: i8,
}

/// One ranking example: `{"items": [[...], ...], "target_index": int}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct TrlRecord {
    pub items: Vec<Vec<f64>>,
    pub target_index: usize,
}

/// One multi-class example: `{"features": [...], "label": int, "k": int}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct MclRecord {
    pub features: Vec<f64>,
    pub label: usize,
    pub k: usize,
}

/// One labeled/complementary example:
/// `{"features": [...], "label": int, "k": int, "is_true": bool}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct LclRecord {
    pub features: Vec<f64>,
    pub label: usize,
    pub k: usize,
    pub is_true: bool,
}

/// Sidecar record carrying the held-out true label of an LCL example.
#[derive(Debug, Serialize, Deserialize)]
pub struct TrueLabelRecord {
    pub true_label: usize,
}

/// Trained model:
/// `{"kind": "linear"|"multiclass", "dim": int, "classes": int|null,
///   "weights": [...], "lambda_cap": float|null}`.
/// Weights are flat, row-major for the multiclass kind.
#[derive(Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub kind: String,
    pub dim: usize,
    pub classes: Option<usize>,
    pub weights: Vec<f64>,
    pub lambda_cap: Option<f64>,
}

impl ModelFile {
    pub fn linear(w: &LinearWeights) -> Self {
        Self {
            kind: "linear".into(),
            dim: w.dim(),
            classes: None,
            weights: w.as_slice().to_vec(),
            lambda_cap: w.lambda_cap(),
        }
    }

    pub fn to_linear(&self) -> Result<LinearWeights, CliError> {
        if self.kind != "linear" && self.kind != "multiclass" {
            return Err(CliError::data(format!("unknown model kind {:?}", self.kind)));
        }
        LinearWeights::new(self.weights.clone(), self.lambda_cap)
            .map_err(|e| CliError::data(format!("invalid model weights: {e}")))
    }
}

/// Joins relative paths under `MILRED_OUT_DIR` when the variable is set;
/// absolute paths and unset environments pass through.
pub fn resolve_out(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("MILRED_OUT_DIR") {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

pub fn write_jsonl<T: Serialize>(path: &Path, records: &[T]) -> Result<(), CliError> {
    let mut out = String::new();
    for record in records {
        let line = serde_json::to_string(record)
            .map_err(|e| CliError::data(format!("serialization failed: {e}")))?;
        out.push_str(&line);
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| CliError::io(path, e))
}

/// Reads a line-delimited JSON file, keeping 1-based line numbers and
/// skipping blank lines.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<(usize, T)>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut records = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(line).map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            message: e.to_string(),
        })?;
        records.push((idx + 1, record));
    }
    Ok(records)
}

fn parse_err(path: &Path, line: usize, message: impl std::fmt::Display) -> CliError {
    CliError::Parse {
        path: path.to_path_buf(),
        line,
        message: message.to_string(),
    }
}

pub fn read_mil_dataset(path: &Path) -> Result<Vec<MILExample>, CliError> {
    read_jsonl::<MilRecord>(path)?
        .into_iter()
        .map(|(line, record)| {
            let instances = record
                .bag
                .into_iter()
                .map(Instance::new)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| parse_err(path, line, e))?;
            let bag = Bag::new(instances).map_err(|e| parse_err(path, line, e))?;
            MILExample::new(bag, record.label).map_err(|e| parse_err(path, line, e))
        })
        .collect()
}

pub fn read_trl_dataset(path: &Path) -> Result<Vec<TRLExample>, CliError> {
    read_jsonl::<TrlRecord>(path)?
        .into_iter()
        .map(|(line, record)| {
            let items = record
                .items
                .into_iter()
                .map(Instance::new)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| parse_err(path, line, e))?;
            TRLExample::new(items, record.target_index).map_err(|e| parse_err(path, line, e))
        })
        .collect()
}

pub fn read_mcl_dataset(path: &Path) -> Result<Vec<MCLExample>, CliError> {
    read_jsonl::<MclRecord>(path)?
        .into_iter()
        .map(|(line, record)| {
            let x = Instance::new(record.features).map_err(|e| parse_err(path, line, e))?;
            MCLExample::new(x, record.label, record.k).map_err(|e| parse_err(path, line, e))
        })
        .collect()
}

pub fn read_lcl_dataset(path: &Path) -> Result<Vec<LCLExample>, CliError> {
    read_jsonl::<LclRecord>(path)?
        .into_iter()
        .map(|(line, record)| {
            let x = Instance::new(record.features).map_err(|e| parse_err(path, line, e))?;
            LCLExample::new(x, record.label, record.is_true, record.k)
                .map_err(|e| parse_err(path, line, e))
        })
        .collect()
}

pub fn mil_records(examples: &[MILExample]) -> Vec<MilRecord> {
    examples
        .iter()
        .map(|ex| MilRecord {
            bag: ex
                .bag
                .instances()
                .iter()
                .map(|i| i.coords().to_vec())
                .collect(),
            label: ex.label(),
        })
        .collect()
}

pub fn read_model(path: &Path) -> Result<ModelFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| parse_err(path, 1, e))
}

pub fn write_model(path: &Path, model: &ModelFile) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(model)
        .map_err(|e| CliError::data(format!("serialization failed: {e}")))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// One row of a metric table.
pub struct MetricRow {
    pub metric: String,
    pub space: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl MetricRow {
    pub fn new(metric: &str, space: &str, value: f64, tolerance: f64, pass: bool) -> Self {
        Self {
            metric: metric.into(),
            space: space.into(),
            value,
            tolerance,
            pass,
        }
    }
}

/// Fixed column order: metric, space, value, tolerance, pass.
pub fn metric_csv(rows: &[MetricRow]) -> String {
    let mut out = String::from("metric,space,value,tolerance,pass\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            row.metric, row.space, row.value, row.tolerance, row.pass
        );
    }
    out
}

pub fn write_metric_csv(path: &Path, rows: &[MetricRow]) -> Result<(), CliError> {
    fs::write(path, metric_csv(rows)).map_err(|e| CliError::io(path, e))
}

#[derive(Serialize)]
pub struct VerifySummary<'a> {
    pub passed: bool,
    pub reports: &'a [VerificationReport],
}

pub fn write_verify_report(path: &Path, reports: &[VerificationReport]) -> Result<(), CliError> {
    let summary = VerifySummary {
        passed: reports.iter().all(|r| r.passed),
        reports,
    };
    let mut text = serde_json::to_string_pretty(&summary)
        .map_err(|e| CliError::data(format!("serialization failed: {e}")))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}
