//! Text formats for matrices, chart coordinates and validation reports.
//!
//! Matrices are read from CSV (one row per line, full square) or JSON
//! (`{"n": .., "labels": [..], "matrix": [[..], ..]}`); the format is
//! picked from the first non-blank character. Numbers are written with the
//! shortest representation that parses back to the same binary64.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::chart::{CanonicalCoords, Level, NaturalCoords};
use crate::matrix::DistanceMatrix;
use crate::validate::ValidationReport;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn parse_err(msg: impl Into<String>) -> FormatError {
    FormatError::Parse(msg.into())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMatrix {
    pub matrix: DistanceMatrix,
    pub labels: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    matrix: Vec<Vec<f64>>,
}

pub fn parse_matrix(text: &str) -> Result<LabeledMatrix, FormatError> {
    if text.trim_start().starts_with('{') {
        parse_matrix_json(text)
    } else {
        Ok(LabeledMatrix {
            matrix: parse_matrix_csv(text)?,
            labels: None,
        })
    }
}

pub fn parse_matrix_csv(text: &str) -> Result<DistanceMatrix, FormatError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| {
                    parse_err(format!("line {}: {field:?} is not a number", line + 1))
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    DistanceMatrix::from_rows(&rows).map_err(|e| parse_err(e.to_string()))
}

fn parse_matrix_json(text: &str) -> Result<LabeledMatrix, FormatError> {
    let raw: MatrixJson = serde_json::from_str(text)?;
    if raw.matrix.len() != raw.n {
        return Err(parse_err(format!(
            "\"n\" is {} but the matrix has {} rows",
            raw.n,
            raw.matrix.len()
        )));
    }
    if let Some(labels) = &raw.labels {
        if labels.len() != raw.n {
            return Err(parse_err(format!(
                "{} labels for {} points",
                labels.len(),
                raw.n
            )));
        }
    }
    let matrix = DistanceMatrix::from_rows(&raw.matrix).map_err(|e| parse_err(e.to_string()))?;
    Ok(LabeledMatrix {
        matrix,
        labels: raw.labels,
    })
}

/// Shortest round-trip decimal; exponent notation for very large or small
/// magnitudes.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub fn matrix_to_csv(m: &DistanceMatrix) -> String {
    let mut out = String::new();
    for row in m.rows() {
        let line: Vec<String> = row.iter().map(|&v| format_number(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn matrix_to_json(m: &DistanceMatrix, labels: Option<&[String]>) -> String {
    let raw = MatrixJson {
        n: m.n(),
        labels: labels.map(<[String]>::to_vec),
        matrix: m.rows().map(<[f64]>::to_vec).collect(),
    };
    serde_json::to_string(&raw).expect("matrix serializes")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Coords {
    Natural(NaturalCoords),
    Canonical(CanonicalCoords),
}

#[derive(Serialize, Deserialize)]
struct LevelJson {
    s: f64,
    #[serde(default)]
    u: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct NaturalJson {
    n: usize,
    levels: Vec<LevelJson>,
}

#[derive(Serialize, Deserialize)]
struct CanonicalJson {
    n: usize,
    closed: Vec<f64>,
    half_open: f64,
}

/// Reads either coordinate flavour; natural coordinates are recognised by a
/// `"levels"` key.
pub fn parse_coords(text: &str) -> Result<Coords, FormatError> {
    let value: Value = serde_json::from_str(text)?;
    let shape_err = |e: crate::Error| parse_err(e.to_string());
    if value.get("levels").is_some() {
        let raw: NaturalJson = serde_json::from_value(value)?;
        let levels = raw
            .levels
            .into_iter()
            .map(|l| Level { s: l.s, u: l.u })
            .collect();
        Ok(Coords::Natural(
            NaturalCoords::new(raw.n, levels).map_err(shape_err)?,
        ))
    } else {
        let raw: CanonicalJson = serde_json::from_value(value)?;
        Ok(Coords::Canonical(
            CanonicalCoords::new(raw.n, raw.closed, raw.half_open).map_err(shape_err)?,
        ))
    }
}

pub fn natural_to_json(c: &NaturalCoords) -> String {
    let raw = NaturalJson {
        n: c.n(),
        levels: c
            .levels()
            .iter()
            .map(|l| LevelJson {
                s: l.s,
                u: l.u.clone(),
            })
            .collect(),
    };
    serde_json::to_string(&raw).expect("coords serialize")
}

pub fn canonical_to_json(c: &CanonicalCoords) -> String {
    let raw = CanonicalJson {
        n: c.n(),
        closed: c.closed().to_vec(),
        half_open: c.half_open(),
    };
    serde_json::to_string(&raw).expect("coords serialize")
}

/// Report as JSON, with indices shifted to 1-based positions.
pub fn report_to_json(report: &ValidationReport) -> Value {
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "kind": v.kind,
                "indices": v.indices.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "magnitude": v.magnitude,
            })
        })
        .collect();
    json!({
        "is_pseudometric": report.is_pseudometric,
        "is_metric": report.is_metric,
        "violations": violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn csv_parses_with_blank_lines_and_spaces() {
        let m = parse_matrix("0, 1\n\n1 ,0\n").unwrap().matrix;
        assert_eq!(m, DistanceMatrix::discrete(2, 1.0));
    }

    #[test]
    fn csv_rejects_garbage() {
        assert!(parse_matrix("0,x\n1,0\n").is_err());
        assert!(parse_matrix("0,1\n1\n").is_err());
        assert!(parse_matrix("0,1,2\n1,0,1\n").is_err());
        assert!(parse_matrix("0,nan\nnan,0\n").is_err());
    }

    #[test]
    fn json_matrix_with_labels() {
        let text = r#"{"n": 2, "labels": ["a", "b"], "matrix": [[0, 0.5], [0.5, 0]]}"#;
        let parsed = parse_matrix(text).unwrap();
        assert_eq!(parsed.matrix, DistanceMatrix::discrete(2, 0.5));
        assert_eq!(parsed.labels.as_deref(), Some(&["a".to_string(), "b".to_string()][..]));
        let back = parse_matrix(&matrix_to_json(&parsed.matrix, parsed.labels.as_deref())).unwrap();
        assert_eq!(back, parsed);
    }

    #[test]
    fn json_matrix_shape_errors() {
        assert!(parse_matrix(r#"{"n": 3, "matrix": [[0, 1], [1, 0]]}"#).is_err());
        assert!(parse_matrix(r#"{"n": 2, "labels": ["a"], "matrix": [[0, 1], [1, 0]]}"#).is_err());
        assert!(parse_matrix(r#"{"n": 2, "matrix": [[0, 1], [1]]}"#).is_err());
    }

    #[test]
    fn number_formatting() {
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(0.1), "0.1");
        assert_eq!(format_number(1e300), "1e300");
        assert_eq!(format_number(2.5e-7), "2.5e-7");
        assert_eq!(format_number(0.0), "0");
    }

    #[test]
    fn coords_roundtrip() {
        let nat = NaturalCoords::new(
            3,
            vec![
                Level { s: 0.5, u: vec![] },
                Level { s: 0.25, u: vec![0.75] },
            ],
        )
        .unwrap();
        assert_eq!(parse_coords(&natural_to_json(&nat)).unwrap(), Coords::Natural(nat));
        let can = CanonicalCoords::new(3, vec![0.1, 0.2], 0.3).unwrap();
        assert_eq!(parse_coords(&canonical_to_json(&can)).unwrap(), Coords::Canonical(can));
        assert!(parse_coords(r#"{"n": 3, "closed": [0.1], "half_open": 0.3}"#).is_err());
    }

    proptest! {
        #[test]
        fn csv_and_json_agree_bitwise(
            n in 1usize..6,
            raw in proptest::collection::vec(proptest::num::f64::POSITIVE | proptest::num::f64::ZERO | proptest::num::f64::NORMAL, 36),
        ) {
            let entries: Vec<f64> = raw[..n * n].to_vec();
            let m = DistanceMatrix::new(n, entries).unwrap();
            let via_csv = parse_matrix(&matrix_to_csv(&m)).unwrap().matrix;
            let via_json = parse_matrix(&matrix_to_json(&m, None)).unwrap().matrix;
            let bits = |m: &DistanceMatrix| m.as_slice().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
            prop_assert_eq!(bits(&via_csv), bits(&m));
            prop_assert_eq!(bits(&via_json), bits(&m));
        }
    }
}
