//! CSV and JSON report tables.

use std::fmt;
use std::str::FromStr;

use fairdiv::model::{CriticalEvent, Verdict};
use serde_json::{Map, Number, Value};

/// Significant digits kept for every real number in a report.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(usize),
    Bool(bool),
    Text(String),
    Null,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_significant(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v)
        .parse()
        .unwrap_or(v)
}

fn real_text(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        round_significant(v).to_string()
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Real(v) => real_text(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Real(v) => Number::from_f64(round_significant(*v))
                .map_or_else(|| Value::String(real_text(*v)), Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Null => Value::Null,
        }
    }
}

/// Rows under a fixed header, emitted in insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.header.len(),
            "row width must match the header"
        );
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).expect("writing to memory");
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::text))
                        .expect("writing to memory");
                }
                String::from_utf8(w.into_inner().expect("writing to memory")).expect("utf-8 input")
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .header
                            .iter()
                            .cloned()
                            .zip(row.iter().map(Cell::json))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut text =
                    serde_json::to_string_pretty(&Value::Array(rows)).expect("plain values");
                text.push('\n');
                text
            }
        }
    }
}

pub const REPORT_COLUMNS: [&str; 10] = [
    "algorithm",
    "p",
    "instance_name",
    "sw",
    "opt",
    "ratio",
    "fair_share",
    "envy_free",
    "critical_round",
    "critical_fraction",
];

/// One audited run and what produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub algorithm: String,
    /// Exponent of the rule; `None` when it has none (e.g. a supplied
    /// allocation).
    pub p: Option<f64>,
    pub instance_name: String,
    pub verdict: Verdict,
    pub critical_event: Option<CriticalEvent>,
}

/// The run report: one row per record, in input order. Critical rounds are
/// 1-based.
pub fn emit_report(records: &[RunRecord], format: Format) -> String {
    let mut table = Table::new(REPORT_COLUMNS);
    for r in records {
        table.push(vec![
            r.algorithm.as_str().into(),
            r.p.into(),
            r.instance_name.as_str().into(),
            r.verdict.social_welfare.into(),
            r.verdict.optimal_welfare.into(),
            r.verdict.ratio.into(),
            r.verdict.fair_share_ok.into(),
            r.verdict.envy_free_ok.into(),
            r.critical_event.map(|e| e.round + 1).into(),
            r.critical_event.map(|e| e.fraction).into(),
        ]);
    }
    table.render(format)
}
