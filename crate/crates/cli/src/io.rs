//! Joint-model files.
//!
//! CSV: `k` lines of `n` comma-separated decimals, row `y` holding
//! `P(Y = y, X = ·)`; lines starting with `#` are ignored.
//! JSON: `{"k": 2, "n": 2, "w": [[0.4, 0.1], [0.1, 0.4]]}`.
//!
//! Numbers are written in shortest round-trip form, so saving and reloading
//! reproduces every entry exactly.

use std::fs;
use std::path::Path;

use misclass_core::JointModel;
use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// `.json` means JSON, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonModel {
    k: usize,
    n: usize,
    w: Vec<Vec<f64>>,
}

pub fn parse_csv(text: &str) -> Result<JointModel> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(i, field)| {
                field.parse::<f64>().map_err(|e| CliError::parse(line, i + 1, format!("{field:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(CliError::parse(
                    line,
                    row.len().min(first.len()) + 1,
                    format!("expected {} columns, found {}", first.len(), row.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::parse(1, 1, "no data rows"));
    }
    Ok(JointModel::from_rows(&rows)?)
}

pub fn parse_json(text: &str) -> Result<JointModel> {
    let raw: JsonModel = serde_json::from_str(text)
        .map_err(|e| CliError::parse(e.line() as u64, e.column(), e.to_string()))?;
    if raw.w.len() != raw.k {
        return Err(CliError::parse(0, 0, format!("k = {} but w has {} rows", raw.k, raw.w.len())));
    }
    if let Some((y, row)) = raw.w.iter().enumerate().find(|(_, r)| r.len() != raw.n) {
        return Err(CliError::parse(
            0,
            0,
            format!("n = {} but row {} of w has {} entries", raw.n, y, row.len()),
        ));
    }
    Ok(JointModel::from_rows(&raw.w)?)
}

pub fn to_csv(model: &JointModel) -> String {
    let mut out = String::new();
    for row in model.rows() {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn to_json(model: &JointModel) -> String {
    let raw = JsonModel { k: model.k(), n: model.n(), w: model.rows().map(<[f64]>::to_vec).collect() };
    serde_json::to_string(&raw).expect("plain numeric data serializes")
}

pub fn load_model(path: &Path, format: Format) -> Result<JointModel> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    match format {
        Format::Csv => parse_csv(&text),
        Format::Json => parse_json(&text),
    }
}

pub fn save_model(model: &JointModel, path: &Path, format: Format) -> Result<()> {
    let text = match format {
        Format::Csv => to_csv(model),
        Format::Json => to_json(model),
    };
    fs::write(path, text).map_err(|source| CliError::Io { path: path.into(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_csv_with_header() {
        let m = parse_csv("# joint\n0.4,0.1\n0.1, 0.4\n").unwrap();
        assert_eq!(m.as_flat(), &[0.4, 0.1, 0.1, 0.4]);
    }

    #[test]
    fn empty_csv_is_parse_error() {
        assert!(matches!(parse_csv(""), Err(CliError::Parse { .. })));
        assert!(matches!(parse_csv("# only a header\n"), Err(CliError::Parse { .. })));
    }

    #[test]
    fn csv_errors_carry_location() {
        match parse_csv("0.5,0.0\n0.25,abc\n") {
            Err(CliError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 2)),
            other => panic!("{other:?}"),
        }
        match parse_csv("0.5,0.0\n0.5\n") {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn csv_validation_errors_propagate() {
        assert!(matches!(
            parse_csv("0.6,0.6\n0,0\n"),
            Err(CliError::Model(misclass_core::Error::MassNotOne { .. }))
        ));
        assert!(matches!(
            parse_csv("1.0\n"),
            Err(CliError::Model(misclass_core::Error::TooFewClasses { .. }))
        ));
    }

    #[test]
    fn json_round_trip_and_shape_checks() {
        let m = parse_json(r#"{"k":2,"n":2,"w":[[0.4,0.1],[0.1,0.4]]}"#).unwrap();
        assert_eq!(parse_json(&to_json(&m)).unwrap(), m);
        assert!(matches!(
            parse_json(r#"{"k":3,"n":2,"w":[[0.4,0.1],[0.1,0.4]]}"#),
            Err(CliError::Parse { .. })
        ));
        assert!(matches!(
            parse_json(r#"{"k":2,"n":3,"w":[[0.4,0.1],[0.1,0.4]]}"#),
            Err(CliError::Parse { .. })
        ));
        assert!(matches!(parse_json("{"), Err(CliError::Parse { .. })));
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(Format::from_path(Path::new("a/b.JSON")), Format::Json);
        assert_eq!(Format::from_path(Path::new("a/b.csv")), Format::Csv);
        assert_eq!(Format::from_path(Path::new("model")), Format::Csv);
    }
}
