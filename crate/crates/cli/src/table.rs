//! Column-ordered tables rendered as CSV or as a JSON array of row objects.

use std::io::Write;

use misclass_core::BoundsReport;
use serde_json::{Map, Value};

use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    /// `log10(v)` for positive `v`, otherwise an empty cell.
    pub fn log10(v: f64) -> Cell {
        if v > 0.0 {
            Cell::Num(v.log10())
        } else {
            Cell::Empty
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Num(v) => Some(v),
            Cell::Int(v) => Some(v as f64),
            _ => None,
        }
    }

    fn to_csv_field(&self) -> String {
        match self {
            Cell::Num(v) => v.to_string(),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

/// Columns contributed by a [`BoundsReport`], in output order.
pub const REPORT_COLUMNS: [&str; 15] = [
    "k",
    "delta",
    "entropy_nats",
    "p_star",
    "L",
    "U",
    "U_simpl",
    "L_FM",
    "U_FM",
    "log10_p_star",
    "log10_L",
    "log10_U",
    "log10_U_simpl",
    "log10_L_FM",
    "log10_U_FM",
];

pub fn report_cells(r: &BoundsReport) -> Vec<Cell> {
    let values = [r.p_star, r.lower, r.upper, r.upper_simpl, r.lower_fm, r.upper_fm];
    let mut cells = vec![Cell::from(r.k), r.delta.into(), r.entropy_nats.into()];
    cells.extend(values.iter().map(|&v| Cell::Num(v)));
    cells.extend(values.iter().map(|&v| Cell::log10(v)));
    cells
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    /// `prefix` columns followed by [`REPORT_COLUMNS`].
    pub fn with_report<S: Into<String>>(prefix: impl IntoIterator<Item = S>) -> Self {
        let mut t = Self::new(prefix);
        t.columns.extend(REPORT_COLUMNS.iter().map(|c| c.to_string()));
        t
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of column `name`, `None` for non-numeric cells.
    pub fn column(&self, name: &str) -> Vec<Option<f64>> {
        let i = self.column_index(name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[i].as_f64()).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv_field))?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.columns.iter().cloned().zip(row.iter().map(Cell::to_json)).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn write<W: Write>(&self, format: OutputFormat, mut out: W) -> Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(out),
            OutputFormat::Json => {
                serde_json::to_writer_pretty(&mut out, &self.to_json())?;
                writeln!(out).map_err(|e| crate::CliError::Io { path: "<output>".into(), source: e })
            }
        }
    }
}
