//! Experiment records and their CSV / JSON-lines encoding.
//!
//! Numbers are written with 12 significant digits in plain decimal notation
//! (scientific only for very large or very small magnitudes), fields in fixed
//! order, `\n` line endings. Missing optional values are empty CSV cells and
//! `null` in JSON.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regret::Provenance;

/// One `(algorithm, seed, epoch)` row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub algorithm: String,
    pub seed: u64,
    /// 1-based.
    pub epoch: usize,
    pub cost_raw: f64,
    pub cost_norm: f64,
    pub regret_static: Option<f64>,
    pub regret_dynamic: Option<f64>,
    pub comparator: Provenance,
    /// Mobility runs only.
    pub tracking_error: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" | "jsonl" | "json-lines" => Ok(OutputFormat::Json),
            other => Err(Error::validation("format", format!("unknown format `{other}`"))),
        }
    }
}

const BASE_HEADER: &str = "experiment,algorithm,seed,epoch,cost_raw,cost_norm,regret_static,regret_dynamic,comparator";

/// Renders `v` with 12 significant digits.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exponent = v.abs().log10().floor() as i32;
    if !(-6..=15).contains(&exponent) {
        let s = format!("{v:.11e}");
        let (mantissa, exp) = s.split_once('e').expect("scientific notation");
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (11 - exponent).max(0) as usize;
    let s = format!("{v:.decimals$}");
    trim_zeros(&s).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rounds to the value [`format_number`] writes.
pub fn round_sig(v: f64) -> f64 {
    format_number(v).parse().unwrap_or(v)
}

fn opt(v: Option<f64>) -> String {
    v.map(format_number).unwrap_or_default()
}

/// Sorts records by `(algorithm, seed, epoch)`.
pub fn sort_records(records: &mut [ExperimentRecord]) {
    records.sort_by(|a, b| (a.algorithm.as_str(), a.seed, a.epoch).cmp(&(b.algorithm.as_str(), b.seed, b.epoch)));
}

/// Serializes records. The `tracking_error` column appears whenever any record
/// carries one.
pub fn emit(records: &[ExperimentRecord], format: OutputFormat) -> Vec<u8> {
    match format {
        OutputFormat::Csv => emit_csv(records).into_bytes(),
        OutputFormat::Json => emit_json(records).into_bytes(),
    }
}

fn emit_csv(records: &[ExperimentRecord]) -> String {
    let tracking = records.iter().any(|r| r.tracking_error.is_some());
    let mut out = String::from(BASE_HEADER);
    if tracking {
        out.push_str(",tracking_error");
    }
    out.push('\n');
    for r in records {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.experiment,
            r.algorithm,
            r.seed,
            r.epoch,
            format_number(r.cost_raw),
            format_number(r.cost_norm),
            opt(r.regret_static),
            opt(r.regret_dynamic),
            r.comparator.as_str(),
        );
        if tracking {
            out.push(',');
            out.push_str(&opt(r.tracking_error));
        }
        out.push('\n');
    }
    out
}

fn emit_json(records: &[ExperimentRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let rounded = ExperimentRecord {
            cost_raw: round_sig(r.cost_raw),
            cost_norm: round_sig(r.cost_norm),
            regret_static: r.regret_static.map(round_sig),
            regret_dynamic: r.regret_dynamic.map(round_sig),
            tracking_error: r.tracking_error.map(round_sig),
            ..r.clone()
        };
        out.push_str(&serde_json::to_string(&rounded).expect("records serialize"));
        out.push('\n');
    }
    out
}

/// Parses CSV written by [`emit`].
pub fn parse_csv(text: &str) -> Result<Vec<ExperimentRecord>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty CSV".into()))?;
    let tracking = match header {
        h if h == BASE_HEADER => false,
        h if h.strip_suffix(",tracking_error") == Some(BASE_HEADER) => true,
        other => return Err(Error::Parse(format!("unexpected header `{other}`"))),
    };
    let expected_fields = if tracking { 10 } else { 9 };
    lines
        .enumerate()
        .map(|(i, line)| {
            let line_no = i + 2;
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != expected_fields {
                return Err(Error::Parse(format!(
                    "line {line_no}: expected {expected_fields} fields, got {}",
                    fields.len()
                )));
            }
            let num = |s: &str| -> Result<f64> {
                s.parse()
                    .map_err(|_| Error::Parse(format!("line {line_no}: bad number `{s}`")))
            };
            let opt_num = |s: &str| -> Result<Option<f64>> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    num(s).map(Some)
                }
            };
            Ok(ExperimentRecord {
                experiment: fields[0].to_string(),
                algorithm: fields[1].to_string(),
                seed: fields[2]
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {line_no}: bad seed")))?,
                epoch: fields[3]
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {line_no}: bad epoch")))?,
                cost_raw: num(fields[4])?,
                cost_norm: num(fields[5])?,
                regret_static: opt_num(fields[6])?,
                regret_dynamic: opt_num(fields[7])?,
                comparator: Provenance::parse(fields[8])
                    .ok_or_else(|| Error::Parse(format!("line {line_no}: bad comparator `{}`", fields[8])))?,
                tracking_error: if tracking { opt_num(fields[9])? } else { None },
            })
        })
        .collect()
}
